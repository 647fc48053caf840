// config.hpp - JSON configuration for the fuzzy systems and the lead-space
// transform matrix. Absent sections fall back to built-in defaults; a section
// that is present must be complete.
#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "fis.hpp"
#include "vcgprep.hpp"

namespace ecgfuse {

struct FisPair {
    FuzzySystem fis_d;
    FuzzySystem fis_alpha;
};

inline FisPair default_fis() { return {build_fis_d(), build_fis_alpha()}; }

namespace detail {

using json = nlohmann::json;

inline std::vector<TriangularSet> sets_from_json(const json& node,
                                                 const std::vector<std::string>& labels,
                                                 const std::string& where) {
    if (!node.is_array() || node.size() != labels.size())
        throw ParseError(where + " must be an array of " + std::to_string(labels.size()) +
                         " [left, peak, right] triples");
    std::vector<TriangularSet> sets;
    sets.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const json& triple = node[i];
        if (!triple.is_array() || triple.size() != 3)
            throw ParseError(where + "[" + std::to_string(i) +
                             "] must be a [left, peak, right] triple");
        for (const auto& v : triple)
            if (!v.is_number())
                throw ParseError(where + "[" + std::to_string(i) + "] holds a non-number");
        sets.push_back({labels[i], triple[0].get<double>(), triple[1].get<double>(),
                        triple[2].get<double>()});
    }
    return sets;
}

inline Interval span_of(const std::vector<TriangularSet>& sets) {
    Interval u{sets.front().left, sets.front().right};
    for (const auto& s : sets) {
        u.lo = std::min(u.lo, s.left);
        u.hi = std::max(u.hi, s.right);
    }
    return u;
}

inline std::vector<std::vector<std::string>> rules_from_json(const json& node,
                                                             std::size_t rows,
                                                             std::size_t cols,
                                                             const std::string& where) {
    if (!node.is_array() || node.size() != rows)
        throw ParseError(where + " must hold " + std::to_string(rows) + " rows");
    std::vector<std::vector<std::string>> table;
    table.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = node[r];
        if (!row.is_array() || row.size() != cols)
            throw ParseError(where + " row " + std::to_string(r) + " must hold " +
                             std::to_string(cols) + " labels");
        std::vector<std::string> labels;
        labels.reserve(cols);
        for (const auto& cell : row) {
            if (!cell.is_string())
                throw ParseError(where + " row " + std::to_string(r) +
                                 " holds a non-string consequent");
            labels.push_back(cell.get<std::string>());
        }
        table.push_back(std::move(labels));
    }
    return table;
}

inline const json& require_key(const json& node, const std::string& key,
                               const std::string& section) {
    auto it = node.find(key);
    if (it == node.end())
        throw ParseError("section '" + section + "' is missing key '" + key + "'");
    return *it;
}

inline FuzzySystem fis_d_from_json(const json& node) {
    const std::string section = "fis_d";
    auto in1 = sets_from_json(require_key(node, "D", section), {"S", "M", "B"}, "fis_d.D");
    auto in2 = sets_from_json(require_key(node, "D_r", section), {"S", "M", "B"}, "fis_d.D_r");
    auto out = sets_from_json(require_key(node, "O_d", section), {"S", "SR", "M", "BR", "B"},
                              "fis_d.O_d");
    auto rules = rules_from_json(require_key(node, "rules", section), in2.size(), in1.size(),
                                 "fis_d.rules");
    return FuzzySystem("fis_d", in1, in2, centers_of(out), rules, span_of(in1), span_of(in2),
                       span_of(out));
}

inline FuzzySystem fis_alpha_from_json(const json& node) {
    const std::string section = "fis_alpha";
    auto in1 = sets_from_json(require_key(node, "alpha", section), {"NB", "NM", "Z", "PM", "PB"},
                              "fis_alpha.alpha");
    auto in2 = sets_from_json(require_key(node, "alpha_r", section), {"S", "M", "B"},
                              "fis_alpha.alpha_r");
    auto out = sets_from_json(require_key(node, "O_alpha", section),
                              {"S", "SR", "M", "MR", "BR", "B", "VB"}, "fis_alpha.O_alpha");
    auto rules = rules_from_json(require_key(node, "rules", section), in2.size(), in1.size(),
                                 "fis_alpha.rules");
    return FuzzySystem("fis_alpha", in1, in2, centers_of(out), rules, span_of(in1),
                       span_of(in2), span_of(out));
}

}  // namespace detail

// Builds the FIS pair from a parsed JSON document. Either section may be
// omitted (the built-in takes its place); a present section must carry all of
// its keys. Structural or semantic problems raise ParseError or the
// FuzzySystem constructor's own errors.
inline FisPair fis_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("config root must be a JSON object");
    FisPair pair = default_fis();
    if (auto it = doc.find("fis_d"); it != doc.end())
        pair.fis_d = detail::fis_d_from_json(*it);
    if (auto it = doc.find("fis_alpha"); it != doc.end())
        pair.fis_alpha = detail::fis_alpha_from_json(*it);
    return pair;
}

inline FisPair load_fis_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    return fis_from_json(doc);
}

// {"lead_order": [8 names], "rows": [[8 numbers] x 3]} -> transform matrix.
inline DowerMatrix dower_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("matrix config root must be a JSON object");
    const auto& order = detail::require_key(doc, "lead_order", "matrix");
    const auto& rows = detail::require_key(doc, "rows", "matrix");
    if (!order.is_array() || order.size() != 8)
        throw ParseError("lead_order must list 8 lead names");
    if (!rows.is_array() || rows.size() != 3) throw ParseError("rows must hold 3 rows");
    DowerMatrix matrix;
    for (std::size_t j = 0; j < 8; ++j) {
        if (!order[j].is_string()) throw ParseError("lead_order holds a non-string entry");
        matrix.lead_order[j] = order[j].get<std::string>();
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != 8)
            throw ParseError("rows[" + std::to_string(i) + "] must hold 8 numbers");
        for (std::size_t j = 0; j < 8; ++j) {
            if (!row[j].is_number())
                throw ParseError("rows[" + std::to_string(i) + "] holds a non-number");
            matrix.coefficients[i][j] = row[j].get<double>();
        }
    }
    return matrix;
}

inline DowerMatrix load_dower_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    return dower_from_json(doc);
}

}  // namespace ecgfuse
