// vcgprep.hpp - 12-lead screening and the inverse Dower reduction of an
// 8-lead ECG record to the three orthogonal VCG channels.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace ecgfuse {

inline constexpr double kDefaultConstantLeadEpsilon = 1e-6;

// Lead names whose ranges collapse below epsilon (flat channels: detached
// electrode, dead amplifier). Any hit marks the record unfit for fusion.
inline std::vector<std::string> detect_constant_leads(
    const MultiLeadRecord& record, double epsilon = kDefaultConstantLeadEpsilon) {
    validate_record(record);
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    std::vector<std::string> flagged;
    for (const auto& lead : record.leads) {
        double lo = lead.samples.front(), hi = lo;
        for (double v : lead.samples) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        if (hi - lo <= epsilon) flagged.push_back(lead.label);
    }
    return flagged;
}

// The eight independent leads, in the column order the reduction matrix
// expects; the remaining four limb leads are linear combinations of I and II
// and carry no extra information.
inline constexpr std::array<const char*, 8> kEightLeadOrder = {
    "V1", "V2", "V3", "V4", "V5", "V6", "I", "II"};

inline MultiLeadRecord select_eight_leads(const MultiLeadRecord& record) {
    validate_record(record);
    MultiLeadRecord out;
    out.sample_rate_hz = record.sample_rate_hz;
    out.id = record.id;
    out.leads.reserve(kEightLeadOrder.size());
    for (const char* name : kEightLeadOrder) {
        const TimeSeries* lead = record.find(name);
        if (!lead) throw MissingLead(std::string("record lacks lead '") + name + "'");
        out.leads.push_back(*lead);
    }
    return out;
}

// ---------------------------------------------------------------------------
// inverse Dower transform
// ---------------------------------------------------------------------------

struct DowerMatrix {
    std::array<std::array<double, 8>, 3> coefficients{};  // rows X, Y, Z
    std::array<std::string, 8> lead_order{};
};

// Standard reduction coefficients for columns (V1..V6, I, II).
inline DowerMatrix default_inverse_dower() {
    DowerMatrix m;
    m.coefficients = {{
        {-0.172, -0.074, 0.122, 0.231, 0.239, 0.194, 0.156, -0.010},
        {0.057, -0.019, -0.106, -0.022, 0.041, 0.048, -0.227, 0.887},
        {-0.229, -0.310, -0.246, -0.063, 0.055, 0.108, 0.022, 0.102},
    }};
    for (std::size_t i = 0; i < 8; ++i) m.lead_order[i] = kEightLeadOrder[i];
    return m;
}

// Per-sample matrix multiply of the 8 leads into channels Vx, Vy, Vz. The
// record's lead names must match the matrix's column order exactly.
inline MultiLeadRecord inverse_dower(const MultiLeadRecord& record,
                                     const DowerMatrix& matrix = default_inverse_dower()) {
    validate_record(record);
    if (record.leads.size() != 8)
        throw LeadOrderMismatch("expected 8 leads, got " +
                                std::to_string(record.leads.size()));
    for (std::size_t i = 0; i < 8; ++i)
        if (record.leads[i].label != matrix.lead_order[i])
            throw LeadOrderMismatch("lead " + std::to_string(i) + " is '" +
                                    record.leads[i].label + "', matrix expects '" +
                                    matrix.lead_order[i] + "'");
    static constexpr const char* channel_names[3] = {"Vx", "Vy", "Vz"};
    MultiLeadRecord out;
    out.sample_rate_hz = record.sample_rate_hz;
    out.id = record.id;
    const std::size_t n = record.length();
    for (std::size_t r = 0; r < 3; ++r) {
        TimeSeries ch;
        ch.label = channel_names[r];
        ch.sample_rate_hz = record.sample_rate_hz;
        ch.samples.assign(n, 0.0);
        for (std::size_t c = 0; c < 8; ++c) {
            const double k = matrix.coefficients[r][c];
            const auto& src = record.leads[c].samples;
            for (std::size_t t = 0; t < n; ++t) ch.samples[t] += k * src[t];
        }
        out.leads.push_back(std::move(ch));
    }
    return out;
}

}  // namespace ecgfuse
