// nfda.hpp - multi-lead trajectory fusion. Per step, every lead's local motion
// is graded by two fuzzy systems (distance behavior and heading behavior), the
// grades become softmax weights, and a weighted affine fit across the leads'
// transitions advances the fused state by one step.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fis.hpp"
#include "lwlpa.hpp"
#include "types.hpp"

namespace ecgfuse {

// ---------------------------------------------------------------------------
// per-step motion features
// ---------------------------------------------------------------------------

struct StepFeatures {
    double distance = 0.0;         // normalized step length at p
    double distance_change = 0.0;  // normalized |step length change| at p
    double cosine = 0.0;           // heading cosine between steps p and p-1
    double cosine_change = 0.0;    // |cosine change| / 2, on [0,1]
};

namespace detail {

// Cosine between step vectors; a zero-length step counts as perfectly aligned.
inline double step_cosine(std::span<const double> from_a, std::span<const double> to_a,
                          std::span<const double> from_b, std::span<const double> to_b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t c = 0; c < to_a.size(); ++c) {
        const double va = to_a[c] - from_a[c];
        const double vb = to_b[c] - from_b[c];
        dot += va * vb;
        na += va * va;
        nb += vb * vb;
    }
    if (na == 0.0 || nb == 0.0) return 1.0;
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace detail

// Largest step length over every trajectory and step; the shared normalizer
// that puts distance features on [0,1].
inline double max_step_distance(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw EmptyInput("no trajectories");
    double best = 0.0;
    for (const auto& traj : trajectories)
        for (std::size_t p = 1; p < traj.size(); ++p)
            best = std::max(best, state_distance(traj.state(p), traj.state(p - 1)));
    return best;
}

// Motion features at step p; needs states p-3..p, so p >= 3. distance_scale is
// the record-wide normalizer from max_step_distance (a non-positive scale
// zeroes the distance features).
inline StepFeatures step_features(const Trajectory& traj, std::size_t p,
                                  double distance_scale) {
    if (p >= traj.size())
        throw IndexOutOfRange("step " + std::to_string(p) + " of " +
                              std::to_string(traj.size()));
    if (p < 3)
        throw IndexOutOfRange("step features need p >= 3, got " + std::to_string(p));
    const auto x0 = traj.state(p - 3);
    const auto x1 = traj.state(p - 2);
    const auto x2 = traj.state(p - 1);
    const auto x3 = traj.state(p);
    const double d_now = state_distance(x3, x2);
    const double d_prev = state_distance(x2, x1);
    StepFeatures f;
    if (distance_scale > 0.0) {
        f.distance = std::clamp(d_now / distance_scale, 0.0, 1.0);
        f.distance_change = std::clamp(std::fabs(d_now - d_prev) / distance_scale, 0.0, 1.0);
    }
    const double cos_now = detail::step_cosine(x2, x3, x1, x2);
    const double cos_prev = detail::step_cosine(x1, x2, x0, x1);
    f.cosine = cos_now;
    f.cosine_change = std::fabs(cos_now - cos_prev) / 2.0;
    return f;
}

// ---------------------------------------------------------------------------
// fusion weights
// ---------------------------------------------------------------------------

enum class Normalization {
    global_max,       // distance features over the record-wide max step length
    amplitude_range,  // distance features over the record-wide component range
};

struct FusionConfig {
    double gamma = 1.0;       // softmax sharpness
    int bootstrap_steps = 3;  // uniform-weight steps before features exist
    Normalization normalization = Normalization::global_max;
    FuzzySystem fis_d = build_fis_d();
    FuzzySystem fis_alpha = build_fis_alpha();
};

// Softmax over the scores, anchored at the minimum: w_l proportional to
// exp(gamma * (score_l - min score)). Positive, sums to 1, order-preserving.
inline std::vector<double> softmax_weights(std::span<const double> scores, double gamma) {
    if (scores.empty()) throw EmptyInput("no scores to weight");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    const double lo = *std::min_element(scores.begin(), scores.end());
    std::vector<double> w(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        w[i] = std::exp(gamma * (scores[i] - lo));
        total += w[i];
    }
    for (auto& v : w) v /= total;
    return w;
}

// Per-lead weights from per-lead step features: each lead's two fuzzy grades
// add into a score, softmax turns scores into weights.
inline std::vector<double> trajectory_weights(std::span<const StepFeatures> features,
                                              const FusionConfig& config) {
    if (features.empty()) throw EmptyInput("no per-lead features");
    std::vector<double> scores;
    scores.reserve(features.size());
    for (const auto& f : features)
        scores.push_back(config.fis_d.evaluate(f.distance, f.distance_change) +
                         config.fis_alpha.evaluate(f.cosine, f.cosine_change));
    return softmax_weights(scores, config.gamma);
}

// Componentwise mean of the leads' first states; the fused start point.
inline std::vector<double> initial_state(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw EmptyInput("no trajectories");
    const std::size_t dim = trajectories.front().dimension();
    std::vector<double> mean(dim, 0.0);
    for (const auto& traj : trajectories) {
        if (traj.dimension() != dim)
            throw DimensionMismatch("trajectory '" + traj.source_label() + "' has dimension " +
                                    std::to_string(traj.dimension()) + ", expected " +
                                    std::to_string(dim));
        if (traj.empty()) throw EmptyTrajectory("trajectory '" + traj.source_label() + "'");
        const auto st = traj.state(0);
        for (std::size_t c = 0; c < dim; ++c) mean[c] += st[c];
    }
    for (auto& v : mean) v /= static_cast<double>(trajectories.size());
    return mean;
}

// ---------------------------------------------------------------------------
// fusion
// ---------------------------------------------------------------------------

// Fuses the leads' trajectories into one. Leads longer than the shortest are
// truncated to it. The fused trajectory starts at the centroid of the first
// states and advances by the per-step affine recursion; the first
// bootstrap_steps steps use uniform weights because motion features need four
// past states.
inline Trajectory fuse(std::span<const Trajectory> trajectories,
                       const FusionConfig& config = {}) {
    if (trajectories.size() < 2)
        throw TooFewTrajectories("fusion needs >= 2 trajectories, got " +
                                 std::to_string(trajectories.size()));
    if (!(config.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (config.bootstrap_steps < 3)
        throw std::invalid_argument("bootstrap_steps must be >= 3");
    const std::size_t lead_count = trajectories.size();
    const std::size_t dim = trajectories.front().dimension();
    std::size_t steps = trajectories.front().size();
    for (const auto& traj : trajectories) {
        if (traj.dimension() != dim)
            throw DimensionMismatch("trajectory '" + traj.source_label() + "' has dimension " +
                                    std::to_string(traj.dimension()) + ", expected " +
                                    std::to_string(dim));
        steps = std::min(steps, traj.size());
    }
    if (steps < 2)
        throw TooFewStates("fusion needs >= 2 common states, got " + std::to_string(steps));

    // Record-wide distance normalizer over the common range.
    double distance_scale = 0.0;
    if (config.normalization == Normalization::global_max) {
        for (const auto& traj : trajectories)
            for (std::size_t p = 1; p < steps; ++p)
                distance_scale = std::max(
                    distance_scale, state_distance(traj.state(p), traj.state(p - 1)));
    } else {
        double lo = trajectories.front().state(0)[0], hi = lo;
        for (const auto& traj : trajectories)
            for (std::size_t p = 0; p < steps; ++p)
                for (double v : traj.state(p)) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
        distance_scale = hi - lo;
    }

    Trajectory fused(dim, trajectories.front().params(), "fused",
                     trajectories.front().sample_rate_hz());
    std::vector<double> state = initial_state(trajectories);
    fused.push_state(state);

    std::vector<StepFeatures> features(lead_count);
    std::vector<double> weights;
    std::vector<StateView> current(lead_count), next(lead_count);
    for (std::size_t p = 0; p + 1 < steps; ++p) {
        if (p < static_cast<std::size_t>(config.bootstrap_steps)) {
            weights.assign(lead_count, 1.0 / static_cast<double>(lead_count));
        } else {
            for (std::size_t l = 0; l < lead_count; ++l)
                features[l] = step_features(trajectories[l], p, distance_scale);
            weights = trajectory_weights(features, config);
        }
        for (std::size_t l = 0; l < lead_count; ++l) {
            current[l] = trajectories[l].state(p);
            next[l] = trajectories[l].state(p + 1);
        }
        const auto fit = weighted_affine_fit(current, next, weights);
        for (auto& v : state) v = fit.intercept + fit.slope * v;
        for (double v : state)
            if (!std::isfinite(v))
                throw NonFiniteState("fusion produced a non-finite state at step " +
                                     std::to_string(p + 1));
        fused.push_state(state);
    }
    return fused;
}

// ---------------------------------------------------------------------------
// disorder metric
// ---------------------------------------------------------------------------

// Mean absolute change of consecutive step lengths, normalized by the RMS
// state norm. Zero for uniform straight-line motion, scale-invariant, larger
// for jerkier trajectories. An all-zero trajectory scores 0.
inline double disorder_metric(const Trajectory& traj) {
    if (traj.size() < 4)
        throw TooFewStates("disorder metric needs >= 4 states, got " +
                           std::to_string(traj.size()));
    double prev = state_distance(traj.state(1), traj.state(0));
    double change_sum = 0.0;
    for (std::size_t p = 2; p < traj.size(); ++p) {
        const double d = state_distance(traj.state(p), traj.state(p - 1));
        change_sum += std::fabs(d - prev);
        prev = d;
    }
    double norm_sq = 0.0;
    for (std::size_t p = 0; p < traj.size(); ++p)
        for (double v : traj.state(p)) norm_sq += v * v;
    const double rms = std::sqrt(norm_sq / static_cast<double>(traj.size()));
    if (rms == 0.0) return 0.0;
    return change_sum / static_cast<double>(traj.size() - 2) / rms;
}

}  // namespace ecgfuse
