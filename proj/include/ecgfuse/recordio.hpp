// recordio.hpp - CSV serialization for records and trajectories, plus sliding
// window segmentation.
//
// Record format (csv_v1): a header line `# fs=<hz> leads=<n1,n2,...>`, then
// one comma-separated row per sample with one column per lead.
// Trajectory format: a header line `# fs=<hz> dim=<m> delay=<t> label=<text>`,
// then one row per state: step index followed by the state's components.
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace ecgfuse {

namespace detail {

// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            std::sscanf(shorter, "%lf", &back);
            if (back == v) return shorter;
        }
    }
    return buf;
}

inline double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                         std::string(text) + "'");
    if (!std::isfinite(value))
        throw ParseError("line " + std::to_string(line_no) + ": non-finite value '" +
                         std::string(text) + "'");
    return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Value of `key=` in a header line, or empty when absent. `greedy` takes the
// rest of the line (for values that may contain spaces).
inline std::string_view header_field(std::string_view header, std::string_view key,
                                     bool greedy = false) {
    const std::string needle = std::string(key) + "=";
    const std::size_t pos = header.find(needle);
    if (pos == std::string_view::npos) return {};
    const std::size_t start = pos + needle.size();
    if (greedy) return trim(header.substr(start));
    const std::size_t end = header.find(' ', start);
    return header.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                              : end - start);
}

inline std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base.resize(dot);
    return base;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// record CSV
// ---------------------------------------------------------------------------

inline MultiLeadRecord read_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw MissingHeader("'" + path + "' does not start with a '# fs=... leads=...' line");
    const auto fs_text = detail::header_field(line, "fs");
    const auto leads_text = detail::header_field(line, "leads");
    if (fs_text.empty() || leads_text.empty())
        throw MissingHeader("'" + path + "' header lacks fs= or leads=");
    const double fs = detail::parse_double(fs_text, 1);
    if (!(fs > 0.0)) throw ParseError("line 1: sample rate must be positive");

    MultiLeadRecord record;
    record.sample_rate_hz = fs;
    record.id = detail::file_stem(path);
    for (auto name : detail::split(leads_text, ',')) {
        name = detail::trim(name);
        if (name.empty()) throw ParseError("line 1: empty lead name");
        TimeSeries lead;
        lead.label = std::string(name);
        lead.sample_rate_hz = fs;
        record.leads.push_back(std::move(lead));
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = detail::split(line, ',');
        if (cells.size() != record.leads.size())
            throw RaggedRows("line " + std::to_string(line_no) + ": " +
                             std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(record.leads.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            record.leads[c].samples.push_back(
                detail::parse_double(detail::trim(cells[c]), line_no));
    }
    if (record.length() < 2)
        throw SeriesTooShort("'" + path + "' holds " + std::to_string(record.length()) +
                             " samples, need >= 2");
    return record;
}

inline void write_record(const MultiLeadRecord& record, const std::string& path) {
    validate_record(record);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "# fs=" << detail::format_double(record.sample_rate_hz) << " leads=";
    for (std::size_t i = 0; i < record.leads.size(); ++i) {
        if (i) out << ',';
        out << record.leads[i].label;
    }
    out << '\n';
    const std::size_t n = record.length();
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t c = 0; c < record.leads.size(); ++c) {
            if (c) out << ',';
            out << detail::format_double(record.leads[c].samples[t]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// trajectory CSV
// ---------------------------------------------------------------------------

inline void write_trajectory(const Trajectory& traj, const std::string& path) {
    if (traj.empty()) throw EmptyTrajectory("refusing to write an empty trajectory");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "# fs=" << detail::format_double(traj.sample_rate_hz())
        << " dim=" << traj.dimension() << " delay=" << traj.params().delay
        << " label=" << traj.source_label() << '\n';
    for (std::size_t p = 0; p < traj.size(); ++p) {
        out << p;
        for (double v : traj.state(p)) out << ',' << detail::format_double(v);
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw MissingHeader("'" + path +
                            "' does not start with a '# fs=... dim=... delay=...' line");
    const auto fs_text = detail::header_field(line, "fs");
    const auto dim_text = detail::header_field(line, "dim");
    const auto delay_text = detail::header_field(line, "delay");
    if (fs_text.empty() || dim_text.empty() || delay_text.empty())
        throw MissingHeader("'" + path + "' header lacks fs=, dim=, or delay=");
    const double fs = detail::parse_double(fs_text, 1);
    const int dim = static_cast<int>(detail::parse_double(dim_text, 1));
    const int delay = static_cast<int>(detail::parse_double(delay_text, 1));
    if (dim < 1 || delay < 1) throw ParseError("line 1: dim and delay must be >= 1");
    const std::string label(detail::header_field(line, "label", /*greedy=*/true));

    Trajectory traj(static_cast<std::size_t>(dim), EmbeddingParams{dim, delay}, label, fs);
    std::vector<double> state(static_cast<std::size_t>(dim));
    std::size_t line_no = 1, expected_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = detail::split(line, ',');
        if (cells.size() != static_cast<std::size_t>(dim) + 1)
            throw RaggedRows("line " + std::to_string(line_no) + ": " +
                             std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(dim + 1));
        const double idx = detail::parse_double(detail::trim(cells[0]), line_no);
        if (idx != static_cast<double>(expected_index))
            throw ParseError("line " + std::to_string(line_no) + ": step index " +
                             std::string(cells[0]) + ", expected " +
                             std::to_string(expected_index));
        for (int c = 0; c < dim; ++c)
            state[static_cast<std::size_t>(c)] =
                detail::parse_double(detail::trim(cells[static_cast<std::size_t>(c) + 1]),
                                     line_no);
        traj.push_state(state);
        ++expected_index;
    }
    if (traj.empty()) throw EmptyTrajectory("'" + path + "' holds no states");
    return traj;
}

// ---------------------------------------------------------------------------
// segmentation
// ---------------------------------------------------------------------------

struct Segment {
    std::size_t start_sample = 0;
    std::size_t length = 0;
    std::string parent;  // id of the record the segment indexes into
};

// Sliding windows of window_s seconds every hop_s seconds; a trailing stretch
// shorter than the window is dropped.
inline std::vector<Segment> segment_record(const MultiLeadRecord& record, double window_s,
                                           double hop_s) {
    validate_record(record);
    if (!(window_s > 0.0) || !(hop_s > 0.0))
        throw std::invalid_argument("window and hop must be positive");
    const auto window =
        static_cast<std::size_t>(std::llround(window_s * record.sample_rate_hz));
    const auto hop = static_cast<std::size_t>(std::llround(hop_s * record.sample_rate_hz));
    if (window == 0 || hop == 0)
        throw std::invalid_argument("window and hop must cover >= 1 sample");
    if (window > record.length())
        throw WindowLargerThanRecord("window of " + std::to_string(window) +
                                     " samples exceeds record length " +
                                     std::to_string(record.length()));
    std::vector<Segment> segments;
    for (std::size_t start = 0; start + window <= record.length(); start += hop)
        segments.push_back({start, window, record.id});
    return segments;
}

inline MultiLeadRecord slice(const MultiLeadRecord& record, const Segment& segment) {
    validate_record(record);
    if (segment.start_sample + segment.length > record.length())
        throw IndexOutOfRange("segment [" + std::to_string(segment.start_sample) + ", " +
                              std::to_string(segment.start_sample + segment.length) +
                              ") exceeds record length " + std::to_string(record.length()));
    MultiLeadRecord out;
    out.sample_rate_hz = record.sample_rate_hz;
    out.id = record.id.empty() ? "" : record.id + "+" + std::to_string(segment.start_sample);
    for (const auto& lead : record.leads) {
        TimeSeries s;
        s.label = lead.label;
        s.sample_rate_hz = lead.sample_rate_hz;
        s.samples.assign(lead.samples.begin() + static_cast<std::ptrdiff_t>(segment.start_sample),
                         lead.samples.begin() +
                             static_cast<std::ptrdiff_t>(segment.start_sample + segment.length));
        out.leads.push_back(std::move(s));
    }
    return out;
}

}  // namespace ecgfuse
