// fis.hpp - two-input fuzzy inference over triangular sets with min-AND
// activation and center-average defuzzification. Two built systems drive the
// fusion weights: one grades step distance against its change, the other
// grades heading cosine against its change.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ecgfuse {

// ---------------------------------------------------------------------------
// triangular membership
// ---------------------------------------------------------------------------

struct TriangularSet {
    std::string label;
    double left = 0.0;
    double peak = 0.0;
    double right = 0.0;
};

// Hat function over [left, right] peaking at 1; a set with left == peak (or
// peak == right) is a shoulder and stays at 1 beyond the peak.
inline double membership(const TriangularSet& set, double x) {
    if (set.left == set.peak && x <= set.peak) return 1.0;
    if (set.peak == set.right && x >= set.peak) return 1.0;
    if (x <= set.left || x >= set.right) return 0.0;
    if (x < set.peak) return (x - set.left) / (set.peak - set.left);
    if (x > set.peak) return (set.right - x) / (set.right - set.peak);
    return 1.0;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// ---------------------------------------------------------------------------
// rule-based system
// ---------------------------------------------------------------------------

// Immutable after construction. Rules form a complete table indexed
// [input2 set][input1 set]; each cell names an output set whose center feeds
// the defuzzifier. Inputs are clamped to their universes before evaluation.
class FuzzySystem {
public:
    FuzzySystem(std::string name, std::vector<TriangularSet> input1_sets,
                std::vector<TriangularSet> input2_sets,
                std::map<std::string, double> output_centers,
                std::vector<std::vector<std::string>> rules, Interval input1_universe,
                Interval input2_universe, Interval output_universe)
        : name_(std::move(name)),
          input1_sets_(std::move(input1_sets)),
          input2_sets_(std::move(input2_sets)),
          output_centers_(std::move(output_centers)),
          rules_(std::move(rules)),
          input1_universe_(input1_universe),
          input2_universe_(input2_universe),
          output_universe_(output_universe) {
        validate();
    }

    double evaluate(double in1, double in2) const {
        in1 = clamp(in1, input1_universe_);
        in2 = clamp(in2, input2_universe_);
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < input2_sets_.size(); ++r) {
            const double mu2 = membership(input2_sets_[r], in2);
            if (mu2 == 0.0) continue;
            for (std::size_t c = 0; c < input1_sets_.size(); ++c) {
                const double mu1 = membership(input1_sets_[c], in1);
                const double activation = mu1 < mu2 ? mu1 : mu2;
                if (activation == 0.0) continue;
                num += activation * output_centers_.at(rules_[r][c]);
                den += activation;
            }
        }
        if (den == 0.0)
            throw ZeroActivation(name_ + ": no rule fires at (" + std::to_string(in1) +
                                 ", " + std::to_string(in2) + ")");
        return num / den;
    }

    const std::string& name() const { return name_; }
    const std::vector<TriangularSet>& input1_sets() const { return input1_sets_; }
    const std::vector<TriangularSet>& input2_sets() const { return input2_sets_; }
    const std::map<std::string, double>& output_centers() const { return output_centers_; }
    std::size_t rule_count() const { return input1_sets_.size() * input2_sets_.size(); }

    // Consequent label for (input1 set i1, input2 set i2), by set position.
    const std::string& consequent(std::size_t i1, std::size_t i2) const {
        if (i2 >= rules_.size() || i1 >= rules_[i2].size())
            throw IndexOutOfRange(name_ + ": rule (" + std::to_string(i1) + ", " +
                                  std::to_string(i2) + ")");
        return rules_[i2][i1];
    }

    Interval input1_universe() const { return input1_universe_; }
    Interval input2_universe() const { return input2_universe_; }
    Interval output_universe() const { return output_universe_; }

private:
    static double clamp(double x, Interval u) {
        return x < u.lo ? u.lo : (x > u.hi ? u.hi : x);
    }

    void validate() const {
        if (input1_sets_.empty() || input2_sets_.empty() || output_centers_.empty())
            throw std::invalid_argument(name_ + ": empty partition");
        if (rules_.size() != input2_sets_.size())
            throw std::invalid_argument(name_ + ": rule table has " +
                                        std::to_string(rules_.size()) + " rows, expected " +
                                        std::to_string(input2_sets_.size()));
        for (const auto& row : rules_) {
            if (row.size() != input1_sets_.size())
                throw std::invalid_argument(name_ + ": ragged rule table row");
            for (const auto& label : row)
                if (!output_centers_.count(label))
                    throw std::invalid_argument(name_ + ": rule names unknown output set '" +
                                                label + "'");
        }
        for (const auto& [label, center] : output_centers_)
            if (center < output_universe_.lo || center > output_universe_.hi)
                throw std::invalid_argument(name_ + ": center of '" + label +
                                            "' lies outside the output universe");
        check_cover(input1_sets_, input1_universe_, "input 1");
        check_cover(input2_sets_, input2_universe_, "input 2");
    }

    // Every universe point must activate some set: consecutive sets (by peak)
    // must overlap and the shoulders must reach the universe edges.
    void check_cover(const std::vector<TriangularSet>& sets, Interval u,
                     const char* which) const {
        std::vector<const TriangularSet*> sorted;
        sorted.reserve(sets.size());
        for (const auto& s : sets) {
            if (!(s.left <= s.peak && s.peak <= s.right))
                throw std::invalid_argument(name_ + ": set '" + s.label +
                                            "' has disordered break points");
            sorted.push_back(&s);
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](const TriangularSet* a, const TriangularSet* b) { return a->peak < b->peak; });
        if (sorted.front()->left > u.lo || sorted.back()->right < u.hi)
            throw std::invalid_argument(name_ + ": " + which +
                                        " sets do not reach the universe edges");
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            if (sorted[i]->right <= sorted[i + 1]->left)
                throw std::invalid_argument(name_ + ": " + which + " sets '" +
                                            sorted[i]->label + "' and '" +
                                            sorted[i + 1]->label + "' leave a gap");
    }

    std::string name_;
    std::vector<TriangularSet> input1_sets_;
    std::vector<TriangularSet> input2_sets_;
    std::map<std::string, double> output_centers_;
    std::vector<std::vector<std::string>> rules_;  // [input2][input1]
    Interval input1_universe_;
    Interval input2_universe_;
    Interval output_universe_;
};

// ---------------------------------------------------------------------------
// built-in partitions and rule tables
// ---------------------------------------------------------------------------

// Uniform triangular partition with 50% overlap: peaks evenly spaced over the
// universe, each set reaching its neighbors' peaks, shoulders at the edges.
inline std::vector<TriangularSet> uniform_partition(std::span<const char* const> labels,
                                                    Interval u) {
    const std::size_t n = labels.size();
    std::vector<TriangularSet> sets;
    sets.reserve(n);
    const double pitch = (u.hi - u.lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double peak = u.lo + pitch * static_cast<double>(i);
        TriangularSet s;
        s.label = labels[i];
        s.peak = peak;
        s.left = i == 0 ? peak : peak - pitch;
        s.right = i == n - 1 ? peak : peak + pitch;
        sets.push_back(std::move(s));
    }
    return sets;
}

inline std::map<std::string, double> centers_of(const std::vector<TriangularSet>& sets) {
    std::map<std::string, double> centers;
    for (const auto& s : sets) centers[s.label] = s.peak;
    return centers;
}

// Distance grader: inputs "how far did the state move" and "how much did that
// distance change", both on [0,1]; bigger, less steady motion scores higher.
inline FuzzySystem build_fis_d() {
    static constexpr const char* in_labels[] = {"S", "M", "B"};
    static constexpr const char* out_labels[] = {"S", "SR", "M", "BR", "B"};
    const Interval unit{0.0, 1.0};
    return FuzzySystem(
        "fis_d", uniform_partition(in_labels, unit), uniform_partition(in_labels, unit),
        centers_of(uniform_partition(out_labels, unit)),
        {
            // rows: distance-change S, M, B; columns: distance S, M, B
            {"S", "SR", "M"},
            {"SR", "M", "BR"},
            {"M", "BR", "B"},
        },
        unit, unit, unit);
}

// Heading grader: inputs "cosine between consecutive step directions" on
// [-1,1] and "how much that cosine changed" on [0,1]; straight, steady motion
// scores higher.
inline FuzzySystem build_fis_alpha() {
    static constexpr const char* cos_labels[] = {"NB", "NM", "Z", "PM", "PB"};
    static constexpr const char* rate_labels[] = {"S", "M", "B"};
    static constexpr const char* out_labels[] = {"S", "SR", "M", "MR", "BR", "B", "VB"};
    const Interval unit{0.0, 1.0};
    return FuzzySystem(
        "fis_alpha", uniform_partition(cos_labels, Interval{-1.0, 1.0}),
        uniform_partition(rate_labels, unit), centers_of(uniform_partition(out_labels, unit)),
        {
            // rows: cosine-change S, M, B; columns: cosine NB, NM, Z, PM, PB
            {"VB", "B", "BR", "MR", "M"},
            {"B", "BR", "MR", "M", "SR"},
            {"BR", "MR", "M", "SR", "S"},
        },
        Interval{-1.0, 1.0}, unit, unit);
}

}  // namespace ecgfuse
