#include "skelxai/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skelxai/errors.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace {

constexpr std::uint64_t kRandomDrawTag = 0x53524e44ULL;

void check_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw MetricError(std::string(what) + ": size mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
}

double stability_ratio(std::span<const double> e, std::span<const double> e_prime,
                       std::span<const double> ref, std::span<const double> ref_prime,
                       const StabilityConfig& cfg, const char* what) {
    check_same_size(e.size(), e_prime.size(), what);
    check_same_size(ref.size(), ref_prime.size(), what);
    const double num = lp_norm(relative_change(e, e_prime, cfg.eps_min), cfg.p);
    const double den = lp_norm(relative_change(ref, ref_prime, cfg.eps_min), cfg.p);
    return num / std::max(den, cfg.eps_min);
}

std::span<const double> explanation_view(const Attribution& attr, const StabilityConfig& cfg) {
    return cfg.use_raw_scores ? std::span<const double>(attr.per_joint)
                              : std::span<const double>(attr.normalized);
}

}  // namespace

void FaithfulnessConfig::validate(int joint_count) const {
    if (k_grid.empty()) throw ConfigError("faithfulness k grid is empty");
    int prev = 0;
    for (int k : k_grid) {
        if (k < 1 || k > joint_count)
            throw ConfigError("faithfulness k = " + std::to_string(k) +
                              " outside [1, " + std::to_string(joint_count) + "]");
        if (k <= prev) throw ConfigError("faithfulness k grid must be strictly ascending");
        prev = k;
    }
    if (samples < 1) throw ConfigError("faithfulness draw count must be >= 1");
    if (!(radius_m >= 0.0)) throw ConfigError("faithfulness radius must be >= 0");
}

std::vector<double> relative_change(std::span<const double> a, std::span<const double> b,
                                    double eps) {
    check_same_size(a.size(), b.size(), "relative_change");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = (a[i] - b[i]) / std::max(std::fabs(a[i]), eps);
    return out;
}

double lp_norm(std::span<const double> values, double p) {
    if (p < 1.0) throw MetricError("norm order must be >= 1");
    if (p == 2.0) {
        double acc = 0.0;
        for (double x : values) acc += x * x;
        return std::sqrt(acc);
    }
    double acc = 0.0;
    for (double x : values) acc += std::pow(std::fabs(x), p);
    return std::pow(acc, 1.0 / p);
}

double auc_over_k(std::span<const double> values, std::span<const int> k_grid) {
    if (k_grid.size() < 2) throw ConfigError("AUC aggregation needs at least two k values");
    check_same_size(values.size(), k_grid.size(), "auc_over_k");
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < k_grid.size(); ++i)
        area += 0.5 * (values[i] + values[i + 1]) * (k_grid[i + 1] - k_grid[i]);
    return area / (k_grid.back() - k_grid.front());
}

namespace {

// Shared body of pgi/pgu: mean |f(X)[c] - f(X')[c]| over draws for a fixed
// target set.
double prediction_gap(const ModelParams& params, const SkeletonGraph& graph,
                      const SkeletonSequence& x, std::vector<int> targets,
                      const FaithfulnessConfig& cfg, int predicted, double prob_at_predicted) {
    if (targets.empty()) return 0.0;
    PerturbationSpec spec;
    spec.radius_m = cfg.radius_m;
    spec.targets = std::move(targets);
    spec.seed = cfg.seed;
    spec.samples = cfg.samples;

    double acc = 0.0;
    for (int draw = 0; draw < cfg.samples; ++draw) {
        const SkeletonSequence x_prime = perturb(x, spec, draw);
        const MultiBranchInput input = preprocess(x_prime, graph);
        const ForwardTrace trace = forward(params, input, graph);
        acc += std::fabs(prob_at_predicted - trace.probs[predicted]);
    }
    return acc / cfg.samples;
}

}  // namespace

double pgi(const ModelParams& params, const SkeletonGraph& graph, const SkeletonSequence& x,
           const Attribution& attr, int k, const FaithfulnessConfig& cfg) {
    cfg.validate(x.joints());
    const ForwardTrace trace = forward(params, preprocess(x, graph), graph);
    auto [top, rest] = top_k(attr, k);
    (void)rest;
    return prediction_gap(params, graph, x, std::move(top), cfg, trace.predicted_class,
                          trace.probs[trace.predicted_class]);
}

double pgu(const ModelParams& params, const SkeletonGraph& graph, const SkeletonSequence& x,
           const Attribution& attr, int k, const FaithfulnessConfig& cfg) {
    cfg.validate(x.joints());
    const ForwardTrace trace = forward(params, preprocess(x, graph), graph);
    auto [top, rest] = top_k(attr, k);
    (void)top;
    return prediction_gap(params, graph, x, std::move(rest), cfg, trace.predicted_class,
                          trace.probs[trace.predicted_class]);
}

FaithfulnessCurves faithfulness_curves(const ModelParams& params, const SkeletonGraph& graph,
                                       const SkeletonSequence& x, const Attribution& attr,
                                       const FaithfulnessConfig& cfg) {
    cfg.validate(x.joints());
    const ForwardTrace trace = forward(params, preprocess(x, graph), graph);
    const int predicted = trace.predicted_class;
    const double prob = trace.probs[predicted];

    FaithfulnessCurves curves;
    for (int k : cfg.k_grid) {
        auto [top, rest] = top_k(attr, k);
        curves.pgi_values.push_back(
            prediction_gap(params, graph, x, std::move(top), cfg, predicted, prob));
        curves.pgu_values.push_back(
            prediction_gap(params, graph, x, std::move(rest), cfg, predicted, prob));
    }
    if (cfg.k_grid.size() >= 2) {
        curves.pgi_auc = auc_over_k(curves.pgi_values, cfg.k_grid);
        curves.pgu_auc = auc_over_k(curves.pgu_values, cfg.k_grid);
    } else {
        curves.pgi_auc = curves.pgi_values.front();
        curves.pgu_auc = curves.pgu_values.front();
    }
    return curves;
}

double ris(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> branch_x, std::span<const double> branch_x_prime,
           const StabilityConfig& cfg) {
    return stability_ratio(e, e_prime, branch_x, branch_x_prime, cfg, "ris");
}

double ros(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> probs_x, std::span<const double> probs_x_prime,
           const StabilityConfig& cfg) {
    return stability_ratio(e, e_prime, probs_x, probs_x_prime, cfg, "ros");
}

double rrs(std::span<const double> e, std::span<const double> e_prime,
           std::span<const double> logits_x, std::span<const double> logits_x_prime,
           const StabilityConfig& cfg) {
    return stability_ratio(e, e_prime, logits_x, logits_x_prime, cfg, "rrs");
}

StabilityOutcome stability_sweep(const ModelParams& params, const SkeletonGraph& graph,
                                 const SkeletonSequence& x, const Attribution& explanation,
                                 const StabilityConfig& cfg) {
    if (cfg.samples < 1) throw ConfigError("stability draw count must be >= 1");
    if (cfg.eps_min <= 0.0) throw ConfigError("stability eps_min must be > 0");
    if (cfg.p < 1.0) throw ConfigError("stability norm order must be >= 1");

    const MultiBranchInput input = preprocess(x, graph);
    const ForwardTrace trace = forward(params, input, graph);
    const int predicted = trace.predicted_class;
    const std::span<const double> e_x = explanation_view(explanation, cfg);

    PerturbationSpec spec;
    spec.radius_m = cfg.radius_m;
    spec.targets.resize(x.joints());
    for (int v = 0; v < x.joints(); ++v) spec.targets[v] = v;
    spec.seed = cfg.seed;
    spec.samples = cfg.samples;

    StabilityOutcome outcome;
    outcome.draw_count = cfg.samples;
    outcome.draws.resize(cfg.samples);

    auto consider = [&](MetricAtMax& slot, double num, double den_raw, int draw) {
        const double value = num / std::max(den_raw, cfg.eps_min);
        if (slot.draw < 0 || value > slot.value) {
            slot.value = value;
            slot.den_norm = den_raw;
            slot.den_floored = den_raw < cfg.eps_min;
            slot.draw = draw;
        }
    };

    for (int draw = 0; draw < cfg.samples; ++draw) {
        const SkeletonSequence x_prime = perturb(x, spec, draw);
        const MultiBranchInput input_prime = preprocess(x_prime, graph);
        const ForwardTrace trace_prime = forward(params, input_prime, graph);

        StabilityDraw& rec = outcome.draws[draw];
        rec.admissible = trace_prime.predicted_class == predicted;

        Attribution attr_prime;
        switch (explanation.method) {
            case Method::CAM:
                attr_prime = cam(trace_prime, params, predicted);
                break;
            case Method::GradCAM:
                attr_prime = gradcam(trace_prime, params, predicted);
                break;
            case Method::Random:
                attr_prime = random_attribution(
                    x.joints(),
                    rng::derive(cfg.seed, {kRandomDrawTag, static_cast<std::uint64_t>(draw)}),
                    trace_prime.feature_maps.frames);
                break;
        }
        const std::span<const double> e_prime = explanation_view(attr_prime, cfg);

        rec.explanation_change = lp_norm(relative_change(e_x, e_prime, cfg.eps_min), cfg.p);
        rec.den_joint =
            lp_norm(relative_change(input.joint.values, input_prime.joint.values, cfg.eps_min),
                    cfg.p);
        rec.den_velocity = lp_norm(
            relative_change(input.velocity.values, input_prime.velocity.values, cfg.eps_min),
            cfg.p);
        rec.den_bone =
            lp_norm(relative_change(input.bone.values, input_prime.bone.values, cfg.eps_min),
                    cfg.p);
        rec.den_probs =
            lp_norm(relative_change(trace.probs, trace_prime.probs, cfg.eps_min), cfg.p);
        rec.den_logits =
            lp_norm(relative_change(trace.logits, trace_prime.logits, cfg.eps_min), cfg.p);

        if (!rec.admissible) continue;
        ++outcome.admissible_count;
        consider(outcome.ris_joint, rec.explanation_change, rec.den_joint, draw);
        consider(outcome.ris_velocity, rec.explanation_change, rec.den_velocity, draw);
        consider(outcome.ris_bone, rec.explanation_change, rec.den_bone, draw);
        consider(outcome.ros, rec.explanation_change, rec.den_probs, draw);
        consider(outcome.rrs, rec.explanation_change, rec.den_logits, draw);
    }

    outcome.excluded = outcome.admissible_count == 0;
    return outcome;
}

}  // namespace skelxai
