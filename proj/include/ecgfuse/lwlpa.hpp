// lwlpa.hpp - locally weighted linear prediction on an embedded trajectory:
// rank nearby states, weight them by closeness, fit the shared one-step affine
// map Y = intercept + slope * X, and predict the query's successor from it.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace ecgfuse {

inline constexpr double kDefaultNeighborLambda = 1.0;

// Customary neighborhood size for an m-dimensional fit.
inline std::size_t default_neighbor_count(int dimension) {
    return 2 * (static_cast<std::size_t>(dimension) + 1);
}

inline double state_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// neighbor search
// ---------------------------------------------------------------------------

struct NeighborSet {
    std::vector<std::size_t> indices;   // ascending by distance, ties by index
    std::vector<double> distances;
};

struct NeighborOptions {
    // Exclude candidates within this many steps of the query (0 disables).
    std::size_t theiler_window = 0;
    // Only consider candidate indices strictly below this bound; defaults to
    // size()-1 so every candidate still has a successor.
    std::optional<std::size_t> search_end;
};

inline NeighborSet find_neighbors(const Trajectory& traj, std::size_t query,
                                  std::size_t count, NeighborOptions options = {}) {
    if (traj.size() < 2) throw NotEnoughStates("trajectory has fewer than 2 states");
    if (query >= traj.size())
        throw IndexOutOfRange("query " + std::to_string(query) + " of " +
                              std::to_string(traj.size()));
    if (count == 0) throw std::invalid_argument("neighbor count must be >= 1");
    const std::size_t end = std::min(options.search_end.value_or(traj.size() - 1),
                                     traj.size() - 1);
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(end);
    const auto q = traj.state(query);
    for (std::size_t i = 0; i < end; ++i) {
        if (i == query) continue;
        if (options.theiler_window > 0) {
            const std::size_t gap = i < query ? query - i : i - query;
            if (gap <= options.theiler_window) continue;
        }
        ranked.emplace_back(state_distance(q, traj.state(i)), i);
    }
    if (ranked.size() < count)
        throw NotEnoughStates("need " + std::to_string(count) + " neighbors, only " +
                              std::to_string(ranked.size()) + " candidates");
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count),
                      ranked.end());
    NeighborSet out;
    out.indices.reserve(count);
    out.distances.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.distances.push_back(ranked[i].first);
        out.indices.push_back(ranked[i].second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// closeness weights
// ---------------------------------------------------------------------------

// w_i proportional to exp(-lambda * (d_i - d_min)), normalized to sum 1.
inline std::vector<double> neighbor_weights(std::span<const double> distances,
                                            double lambda = kDefaultNeighborLambda) {
    if (distances.empty()) throw EmptyInput("no neighbor distances");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    const double d_min = *std::min_element(distances.begin(), distances.end());
    std::vector<double> w(distances.size());
    double total = 0.0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        w[i] = std::exp(-lambda * (distances[i] - d_min));
        total += w[i];
    }
    for (auto& v : w) v /= total;
    return w;
}

inline std::vector<double> neighbor_weights(const NeighborSet& neighbors,
                                            double lambda = kDefaultNeighborLambda) {
    return neighbor_weights(std::span<const double>(neighbors.distances), lambda);
}

// ---------------------------------------------------------------------------
// weighted affine fit
// ---------------------------------------------------------------------------

using StateView = std::span<const double>;

struct AffineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;   // attained weighted objective
    bool degenerate = false; // fallback used: slope 0, intercept = weighted mean
};

// Minimizes sum_i w_i * || next_i - intercept - slope * current_i ||^2 over
// (intercept, slope) via the 2x2 normal equations. A normal matrix that is
// singular relative to its own scale (all current components equal) flips the
// degenerate flag instead of erroring and falls back to the weighted mean of
// the next components.
inline AffineFit weighted_affine_fit(std::span<const StateView> current,
                                     std::span<const StateView> next,
                                     std::span<const double> weights) {
    if (current.empty()) throw EmptyInput("no states to fit");
    if (current.size() != next.size() || current.size() != weights.size())
        throw DimensionMismatch("fit inputs disagree: " + std::to_string(current.size()) +
                                " current, " + std::to_string(next.size()) + " next, " +
                                std::to_string(weights.size()) + " weights");
    const std::size_t dim = current.front().size();
    double s0 = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
        if (current[i].size() != dim || next[i].size() != dim)
            throw DimensionMismatch("state " + std::to_string(i) + " dimension differs");
        const double w = weights[i];
        s0 += w * static_cast<double>(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            sx += w * current[i][c];
            sxx += w * current[i][c] * current[i][c];
            sy += w * next[i][c];
            sxy += w * current[i][c] * next[i][c];
        }
    }
    AffineFit fit;
    const double det = s0 * sxx - sx * sx;
    const double scale = std::max(std::fabs(s0 * sxx), sx * sx);
    if (det <= 1e-12 * scale || scale == 0.0) {
        fit.degenerate = true;
        fit.slope = 0.0;
        fit.intercept = sy / s0;
    } else {
        fit.slope = (s0 * sxy - sx * sy) / det;
        fit.intercept = (sy * sxx - sx * sxy) / det;
    }
    for (std::size_t i = 0; i < current.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double r = next[i][c] - fit.intercept - fit.slope * current[i][c];
            s += r * r;
        }
        fit.residual += weights[i] * s;
    }
    return fit;
}

// ---------------------------------------------------------------------------
// one-step prediction
// ---------------------------------------------------------------------------

// Successor estimate for the query state: fit the local affine map over the
// neighbors' transitions, push each neighbor through it, and blend the fitted
// successors with the closeness weights.
inline std::vector<double> predict_next(const Trajectory& traj, std::size_t query,
                                        std::size_t neighbor_count,
                                        double lambda = kDefaultNeighborLambda,
                                        NeighborOptions options = {}) {
    const auto neighbors = find_neighbors(traj, query, neighbor_count, options);
    const auto weights = neighbor_weights(neighbors, lambda);
    std::vector<StateView> current, next;
    current.reserve(neighbors.indices.size());
    next.reserve(neighbors.indices.size());
    for (std::size_t idx : neighbors.indices) {
        current.push_back(traj.state(idx));
        next.push_back(traj.state(idx + 1));
    }
    const auto fit = weighted_affine_fit(current, next, weights);
    std::vector<double> prediction(traj.dimension(), 0.0);
    for (std::size_t i = 0; i < current.size(); ++i)
        for (std::size_t c = 0; c < prediction.size(); ++c)
            prediction[c] += weights[i] * (fit.intercept + fit.slope * current[i][c]);
    return prediction;
}

// First component of every state, as a series; embedding leaves the original
// samples in component 0, so this inverts it over the covered range.
inline TimeSeries extract_series(const Trajectory& traj) {
    if (traj.empty()) throw EmptyTrajectory("cannot extract from an empty trajectory");
    TimeSeries out;
    out.sample_rate_hz = traj.sample_rate_hz();
    out.label = traj.source_label();
    out.samples.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) out.samples.push_back(traj.state(i)[0]);
    return out;
}

}  // namespace ecgfuse
