#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skelxai/attribution.hpp"
#include "skelxai/graph.hpp"
#include "skelxai/model.hpp"
#include "skelxai/perturb.hpp"
#include "skelxai/sequence.hpp"

namespace skelxai {

// Prediction-gap (faithfulness) settings. The expectation over perturbed
// variants is estimated with `samples` Monte Carlo draws.
struct FaithfulnessConfig {
    std::vector<int> k_grid = {1, 2, 3, 5, 8, 12, 18, 25};
    double radius_m = 0.025;
    int samples = 10;
    std::uint64_t seed = 0;

    void validate(int joint_count) const;  // throws ConfigError
};

// Relative-stability settings. The max over the neighborhood is taken over
// `samples` candidate perturbations of all joints.
struct StabilityConfig {
    double p = 2.0;           // norm order
    double eps_min = 1e-6;    // floor for denominators (and per-element division)
    double radius_m = 0.025;
    int samples = 10;
    std::uint64_t seed = 0;
    bool use_raw_scores = false;  // compare raw per-joint scores instead of normalized
};

// Elementwise (a - b) / max(|a|, eps).
std::vector<double> relative_change(std::span<const double> a, std::span<const double> b,
                                    double eps);

// (sum |x_i|^p)^(1/p) for p >= 1.
double lp_norm(std::span<const double> values, double p);

// Trapezoidal integral of `values` over `k_grid`, normalized by
// (k_max - k_min) so the result lives on the value scale. Throws ConfigError
// with fewer than two grid points.
double auc_over_k(std::span<const double> values, std::span<const int> k_grid);

// Mean over draws of |f(X)[c] - f(X')[c]| at the predicted class c, where X'
// perturbs the top-k (pgi) or the non-top-k (pgu) joints of the raw sequence
// and the branches are re-derived from the perturbed positions.
double pgi(const ModelParams& params, const SkeletonGraph& graph, const SkeletonSequence& x,
           const Attribution& attr, int k, const FaithfulnessConfig& cfg);
double pgu(const ModelParams& params, const SkeletonGraph& graph, const SkeletonSequence& x,
           const Attribution& attr, int k, const FaithfulnessConfig& cfg);

struct FaithfulnessCurves {
    std::vector<double> pgi_values;  // aligned with cfg.k_grid
    std::vector<double> pgu_values;
    double pgi_auc = 0.0;
    double pgu_auc = 0.0;
};

// PGI/PGU over the whole k grid plus their AUC aggregates. One forward pass
// of the original sample is shared across the grid.
FaithfulnessCurves faithfulness_curves(const ModelParams& params, const SkeletonGraph& graph,
                                       const SkeletonSequence& x, const Attribution& attr,
                                       const FaithfulnessConfig& cfg);

// Stability ratios for one (X, X') pair: explanation change over input /
// output / representation change, each denominator floored at eps_min.
double ris(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> branch_x, std::span<const double> branch_x_prime,
           const StabilityConfig& cfg);
double ros(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> probs_x, std::span<const double> probs_x_prime,
           const StabilityConfig& cfg);
double rrs(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> logits_x, std::span<const double> logits_x_prime,
           const StabilityConfig& cfg);

// Raw norms recorded for one neighborhood draw (pre-floor denominators).
struct StabilityDraw {
    bool admissible = false;       // predicted class preserved
    double explanation_change = 0; // numerator norm
    double den_joint = 0, den_velocity = 0, den_bone = 0;
    double den_probs = 0, den_logits = 0;
};

// One stability sub-metric: the max ratio over admissible draws plus the
// denominator that produced it.
struct MetricAtMax {
    double value = 0.0;
    double den_norm = 0.0;   // raw denominator norm at the maximizing draw
    bool den_floored = false;
    int draw = -1;
};

struct StabilityOutcome {
    bool excluded = false;  // no admissible draw in the neighborhood
    int admissible_count = 0;
    int draw_count = 0;
    MetricAtMax ris_joint, ris_velocity, ris_bone, ros, rrs;
    std::vector<StabilityDraw> draws;
};

// Draws `cfg.samples` perturbed variants of x (all joints targeted), keeps
// those whose predicted class matches, recomputes the explanation on each
// and returns the max of every sub-metric over admissible draws. The
// explanation of x is passed in; its method decides how draw explanations
// are produced (Random uses per-draw seeds derived from cfg.seed).
StabilityOutcome stability_sweep(const ModelParams& params, const SkeletonGraph& graph,
                                 const SkeletonSequence& x, const Attribution& explanation,
                                 const StabilityConfig& cfg);

}  // namespace skelxai
