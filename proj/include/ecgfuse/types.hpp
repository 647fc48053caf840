// types.hpp - value types shared across the library: scalar series, embedded
// trajectories, and aligned multi-lead records.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ecgfuse {

// One uniformly sampled scalar channel.
struct TimeSeries {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    std::string label;

    std::size_t size() const { return samples.size(); }
};

// Throws unless the series has >= 2 finite samples and a positive rate.
inline void validate_series(const TimeSeries& s) {
    if (s.samples.size() < 2)
        throw SeriesTooShort("series '" + s.label + "' has " +
                             std::to_string(s.samples.size()) + " samples, need >= 2");
    if (!(s.sample_rate_hz > 0.0))
        throw Error("series '" + s.label + "' has non-positive sample rate");
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        if (!std::isfinite(s.samples[i]))
            throw NonFiniteSample("series '" + s.label + "' sample " +
                                  std::to_string(i) + " is not finite");
}

struct EmbeddingParams {
    int dimension = 1;  // coordinates per state
    int delay = 1;      // sample lag between coordinates
};

inline void validate_params(const EmbeddingParams& p) {
    if (p.dimension < 1 || p.delay < 1)
        throw std::invalid_argument("embedding parameters must satisfy dimension >= 1 and delay >= 1, got dimension=" +
                                    std::to_string(p.dimension) +
                                    " delay=" + std::to_string(p.delay));
}

// A sequence of fixed-dimension states, stored flat for locality. State t of a
// series x is (x[t], x[t + delay], ..., x[t + (dimension-1)*delay]) with t
// counted from zero.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::size_t dimension, EmbeddingParams params, std::string source_label,
               double sample_rate_hz)
        : dimension_(dimension),
          params_(params),
          source_label_(std::move(source_label)),
          sample_rate_hz_(sample_rate_hz) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return dimension_ ? data_.size() / dimension_ : 0; }
    bool empty() const { return data_.empty(); }

    std::span<const double> state(std::size_t i) const {
        if (i >= size())
            throw IndexOutOfRange("state " + std::to_string(i) + " of " +
                                  std::to_string(size()));
        return {data_.data() + i * dimension_, dimension_};
    }

    void push_state(std::span<const double> st) {
        if (st.size() != dimension_)
            throw DimensionMismatch("state has " + std::to_string(st.size()) +
                                    " components, trajectory holds " +
                                    std::to_string(dimension_));
        data_.insert(data_.end(), st.begin(), st.end());
    }

    const EmbeddingParams& params() const { return params_; }
    const std::string& source_label() const { return source_label_; }
    double sample_rate_hz() const { return sample_rate_hz_; }

private:
    std::size_t dimension_ = 0;
    std::vector<double> data_;
    EmbeddingParams params_;
    std::string source_label_;
    double sample_rate_hz_ = 0.0;
};

// Ordered collection of equally long leads sharing one sample rate.
struct MultiLeadRecord {
    std::vector<TimeSeries> leads;
    double sample_rate_hz = 0.0;
    std::string id;

    std::size_t length() const { return leads.empty() ? 0 : leads.front().size(); }

    const TimeSeries* find(std::string_view name) const {
        for (const auto& l : leads)
            if (l.label == name) return &l;
        return nullptr;
    }
};

// Throws unless the record is nonempty with aligned, valid leads.
inline void validate_record(const MultiLeadRecord& rec) {
    if (rec.leads.empty()) throw EmptyInput("record has no leads");
    for (const auto& l : rec.leads) {
        validate_series(l);
        if (l.size() != rec.length())
            throw DimensionMismatch("lead '" + l.label + "' has " +
                                    std::to_string(l.size()) + " samples, expected " +
                                    std::to_string(rec.length()));
        if (l.sample_rate_hz != rec.sample_rate_hz)
            throw DimensionMismatch("lead '" + l.label + "' sample rate differs from record rate");
    }
    for (std::size_t i = 0; i < rec.leads.size(); ++i)
        for (std::size_t j = i + 1; j < rec.leads.size(); ++j)
            if (rec.leads[i].label == rec.leads[j].label)
                throw Error("duplicate lead name '" + rec.leads[i].label + "'");
}

}  // namespace ecgfuse
