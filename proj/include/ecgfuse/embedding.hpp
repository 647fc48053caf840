// embedding.hpp - delay embedding and parameter estimators. A scalar series
// x[0..N-1] embeds into states X_t = (x[t], x[t+delay], ..., x[t+(m-1)*delay])
// for t = 0 .. N-1-(m-1)*delay; the delay comes from the average-displacement
// (AD) saturation rule and the dimension from the false-nearest-neighbor (FNN)
// test.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace ecgfuse {

inline constexpr int kDefaultAdProbeDim = 2;
inline constexpr double kDefaultAdSlopeFraction = 0.7;
inline constexpr double kDefaultFnnRtol = 15.0;
inline constexpr double kDefaultFnnAtol = 2.0;
inline constexpr double kDefaultFnnThreshold = 0.01;

// ---------------------------------------------------------------------------
// delay embedding
// ---------------------------------------------------------------------------

inline Trajectory delay_embed(const TimeSeries& series, EmbeddingParams params) {
    validate_params(params);
    validate_series(series);
    const std::size_t span =
        static_cast<std::size_t>(params.dimension - 1) * static_cast<std::size_t>(params.delay);
    if (series.size() < span + 2)
        throw SeriesTooShort("series '" + series.label + "' has " +
                             std::to_string(series.size()) +
                             " samples, needs > " + std::to_string(span + 1) +
                             " for dimension=" + std::to_string(params.dimension) +
                             " delay=" + std::to_string(params.delay));
    const std::size_t count = series.size() - span;
    Trajectory traj(static_cast<std::size_t>(params.dimension), params, series.label,
                    series.sample_rate_hz);
    std::vector<double> st(static_cast<std::size_t>(params.dimension));
    for (std::size_t t = 0; t < count; ++t) {
        for (int j = 0; j < params.dimension; ++j)
            st[static_cast<std::size_t>(j)] =
                series.samples[t + static_cast<std::size_t>(j) *
                                       static_cast<std::size_t>(params.delay)];
        traj.push_state(st);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// delay estimation: average displacement
// ---------------------------------------------------------------------------

// S(tau) = mean over t of the distance between the probe-dimension state at
// delay tau and the same state collapsed to (x_t, ..., x_t). S(0) = 0.
inline std::vector<double> average_displacement_curve(const TimeSeries& series,
                                                      int max_delay,
                                                      int probe_dim = kDefaultAdProbeDim) {
    if (max_delay < 1) throw std::invalid_argument("max_delay must be >= 1");
    if (probe_dim < 2) throw std::invalid_argument("probe dimension must be >= 2");
    validate_series(series);
    const std::size_t need =
        static_cast<std::size_t>(probe_dim - 1) * static_cast<std::size_t>(max_delay) + 2;
    if (series.size() < need)
        throw SeriesTooShort("series '" + series.label + "' has " +
                             std::to_string(series.size()) + " samples, needs >= " +
                             std::to_string(need) + " for max_delay=" +
                             std::to_string(max_delay));
    const auto& x = series.samples;
    std::vector<double> curve{0.0};
    curve.reserve(static_cast<std::size_t>(max_delay) + 1);
    for (int tau = 1; tau <= max_delay; ++tau) {
        const std::size_t count =
            x.size() - static_cast<std::size_t>(probe_dim - 1) * static_cast<std::size_t>(tau);
        double acc = 0.0;
        for (std::size_t t = 0; t < count; ++t) {
            double s = 0.0;
            for (int j = 1; j < probe_dim; ++j) {
                const double d =
                    x[t + static_cast<std::size_t>(j) * static_cast<std::size_t>(tau)] - x[t];
                s += d * d;
            }
            acc += std::sqrt(s);
        }
        curve.push_back(acc / static_cast<double>(count));
    }
    return curve;
}

// Smallest tau >= 2 whose marginal increase S(tau) - S(tau-1) falls below
// slope_fraction times the first increase S(1) - S(0); max_delay when the
// curve never flattens that far.
inline int estimate_delay_ad(const TimeSeries& series, int max_delay,
                             double slope_fraction = kDefaultAdSlopeFraction,
                             int probe_dim = kDefaultAdProbeDim) {
    if (!(slope_fraction > 0.0 && slope_fraction < 1.0))
        throw std::invalid_argument("slope_fraction must lie in (0, 1)");
    const auto curve = average_displacement_curve(series, max_delay, probe_dim);
    const double first = curve[1] - curve[0];
    if (first <= 0.0)
        throw SeriesDegenerate("series '" + series.label +
                               "' shows no displacement at delay 1");
    for (int tau = 2; tau <= max_delay; ++tau)
        if (curve[static_cast<std::size_t>(tau)] - curve[static_cast<std::size_t>(tau - 1)] <
            slope_fraction * first)
            return tau;
    return max_delay;
}

// ---------------------------------------------------------------------------
// dimension estimation: false nearest neighbors
// ---------------------------------------------------------------------------

namespace detail {

// Fraction of states whose nearest neighbor at dimension m separates once the
// (m+1)-th coordinate is added. Neighbors are searched over the states that
// remain valid at dimension m+1. A neighbor is false when the new coordinate
// gap exceeds rtol times the m-dimensional distance, or when the grown
// distance exceeds atol times the series deviation. Duplicate states (distance
// within fp dust) carry no usable ratio, so they are judged by the new
// coordinate gap against atol alone.
inline double fnn_fraction_at(const std::vector<double>& x, int m, int delay,
                              double rtol, double atol, double sigma) {
    const std::size_t span = static_cast<std::size_t>(m) * static_cast<std::size_t>(delay);
    const std::size_t count = x.size() - span;
    const std::size_t dim = static_cast<std::size_t>(m);
    const std::size_t step = static_cast<std::size_t>(delay);
    const double dup_eps2 = 1e-18 * sigma * sigma;
    std::size_t false_count = 0;
    for (std::size_t t = 0; t < count; ++t) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t nn = t;
        for (std::size_t i = 0; i < count; ++i) {
            if (i == t) continue;
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = x[t + j * step] - x[i + j * step];
                s += d * d;
                if (s >= best) break;
            }
            if (s < best) {
                best = s;
                nn = i;
            }
        }
        const double extra = std::fabs(x[t + span] - x[nn + span]);
        bool is_false;
        if (best <= dup_eps2) {
            is_false = extra > atol * sigma;
        } else {
            const double dist = std::sqrt(best);
            is_false = (extra > rtol * dist) ||
                       (std::sqrt(best + extra * extra) > atol * sigma);
        }
        if (is_false) ++false_count;
    }
    return static_cast<double>(false_count) / static_cast<double>(count);
}

}  // namespace detail

// One false-neighbor fraction per trial dimension 1..max_dimension. Trial
// dimensions the series is too short to evaluate are omitted from the tail.
inline std::vector<double> fnn_fractions(const TimeSeries& series, int delay,
                                         int max_dimension,
                                         double rtol = kDefaultFnnRtol,
                                         double atol = kDefaultFnnAtol) {
    if (delay < 1) throw std::invalid_argument("delay must be >= 1");
    if (max_dimension < 1) throw std::invalid_argument("max_dimension must be >= 1");
    validate_series(series);
    double m0 = 0.0;
    for (double v : series.samples) m0 += v;
    m0 /= static_cast<double>(series.size());
    double var = 0.0;
    for (double v : series.samples) var += (v - m0) * (v - m0);
    const double sigma = std::sqrt(var / static_cast<double>(series.size()));
    if (sigma == 0.0)
        throw SeriesDegenerate("series '" + series.label + "' is constant");
    std::vector<double> fractions;
    for (int m = 1; m <= max_dimension; ++m) {
        const std::size_t span =
            static_cast<std::size_t>(m) * static_cast<std::size_t>(delay);
        if (series.size() < span + 2) break;
        fractions.push_back(
            detail::fnn_fraction_at(series.samples, m, delay, rtol, atol, sigma));
    }
    if (fractions.empty())
        throw SeriesTooShort("series '" + series.label +
                             "' too short for any FNN trial at delay " +
                             std::to_string(delay));
    return fractions;
}

struct FnnResult {
    int dimension = 0;       // first dimension whose fraction drops below threshold
    bool saturated = false;  // true when no fraction dropped; dimension = last trial
    std::vector<double> fractions;
};

inline FnnResult estimate_dimension_fnn(const TimeSeries& series, int delay,
                                        int max_dimension = 10,
                                        double rtol = kDefaultFnnRtol,
                                        double atol = kDefaultFnnAtol,
                                        double threshold = kDefaultFnnThreshold) {
    FnnResult result;
    result.fractions = fnn_fractions(series, delay, max_dimension, rtol, atol);
    for (std::size_t i = 0; i < result.fractions.size(); ++i) {
        if (result.fractions[i] < threshold) {
            result.dimension = static_cast<int>(i) + 1;
            return result;
        }
    }
    result.dimension = static_cast<int>(result.fractions.size());
    result.saturated = true;
    return result;
}

// ---------------------------------------------------------------------------
// joint parameters across leads
// ---------------------------------------------------------------------------

// Largest dimension and smallest delay across the per-lead estimates, so every
// lead embeds losslessly at the shared parameters.
inline EmbeddingParams select_joint_params(std::span<const EmbeddingParams> per_lead) {
    if (per_lead.empty()) throw EmptyInput("no embedding parameters given");
    EmbeddingParams joint = per_lead.front();
    validate_params(joint);
    for (const auto& p : per_lead.subspan(1)) {
        validate_params(p);
        joint.dimension = std::max(joint.dimension, p.dimension);
        joint.delay = std::min(joint.delay, p.delay);
    }
    return joint;
}

}  // namespace ecgfuse
