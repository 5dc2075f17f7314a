#include "skelxai/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "skelxai/errors.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

const char* method_name(Method m) {
    switch (m) {
        case Method::CAM: return "cam";
        case Method::GradCAM: return "gradcam";
        case Method::Random: return "random";
    }
    return "unknown";
}

Method method_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "cam") return Method::CAM;
    if (lower == "gradcam" || lower == "grad-cam") return Method::GradCAM;
    if (lower == "random") return Method::Random;
    throw ConfigError("unknown attribution method '" + std::string(name) + "'");
}

std::vector<double> minmax_normalize(std::span<const double> values, bool* degenerate) {
    std::vector<double> out(values.size(), 0.0);
    if (values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        if (degenerate) *degenerate = true;
        return out;  // constant scores carry no ordering information
    }
    if (degenerate) *degenerate = false;
    const double span = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / span;
    return out;
}

std::vector<int> rank_descending(std::span<const double> values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    return order;
}

namespace {

Attribution finish_attribution(Method method, ScoreMap raw) {
    Attribution attr;
    attr.method = method;
    attr.per_joint.assign(raw.joints, 0.0);
    const double inv_frames = 1.0 / static_cast<double>(raw.frames);
    for (int v = 0; v < raw.joints; ++v) {
        double acc = 0.0;
        for (int t = 0; t < raw.frames; ++t) acc += raw.at(t, v);
        attr.per_joint[v] = acc * inv_frames;
    }
    attr.raw = std::move(raw);
    attr.normalized = minmax_normalize(attr.per_joint, &attr.degenerate);
    attr.ranking = rank_descending(attr.per_joint);
    return attr;
}

void check_class(const ModelParams& params, int class_id) {
    if (class_id < 0 || class_id >= params.classes)
        throw AttrError("class id " + std::to_string(class_id) + " out of range [0, " +
                        std::to_string(params.classes) + ")");
}

}  // namespace

Attribution cam(const ForwardTrace& trace, const ModelParams& params, int class_id) {
    check_class(params, class_id);
    const FeatureMap& maps = trace.feature_maps;
    ScoreMap raw(maps.frames, maps.joints);
    for (int n = 0; n < maps.channels; ++n) {
        const double w =
            params.head_weight[static_cast<std::size_t>(class_id) * kFusedChannels + n];
        if (w == 0.0) continue;
        for (int t = 0; t < maps.frames; ++t)
            for (int v = 0; v < maps.joints; ++v) raw.at(t, v) += w * maps.at(n, t, v);
    }
    return finish_attribution(Method::CAM, std::move(raw));
}

Attribution gradcam(const ForwardTrace& trace, const ModelParams& params, int class_id,
                    bool rectify) {
    check_class(params, class_id);
    const FeatureMap grad = grad_featuremaps(params, trace, class_id);
    const FeatureMap& maps = trace.feature_maps;
    const double inv_cells = 1.0 / (static_cast<double>(maps.frames) * maps.joints);

    ScoreMap raw(maps.frames, maps.joints);
    for (int n = 0; n < maps.channels; ++n) {
        double alpha = 0.0;
        for (int t = 0; t < maps.frames; ++t)
            for (int v = 0; v < maps.joints; ++v) alpha += grad.at(n, t, v);
        alpha *= inv_cells;
        if (alpha == 0.0) continue;
        for (int t = 0; t < maps.frames; ++t)
            for (int v = 0; v < maps.joints; ++v) raw.at(t, v) += alpha * maps.at(n, t, v);
    }
    if (rectify)
        for (double& x : raw.values) x = x > 0.0 ? x : 0.0;
    return finish_attribution(Method::GradCAM, std::move(raw));
}

Attribution random_attribution(int joints, std::uint64_t seed, int frames) {
    if (joints < 1) throw AttrError("random attribution needs at least one joint");
    if (frames < 1) frames = 1;
    std::vector<double> scores(joints);
    for (int v = 0; v < joints; ++v)
        scores[v] = rng::unit_from(rng::derive(seed, {0x524e44ULL, static_cast<std::uint64_t>(v)}));
    ScoreMap raw(frames, joints);
    for (int t = 0; t < frames; ++t)
        for (int v = 0; v < joints; ++v) raw.at(t, v) = scores[v];
    return finish_attribution(Method::Random, std::move(raw));
}

std::pair<std::vector<int>, std::vector<int>> top_k(const Attribution& attr, int k) {
    const int joints = static_cast<int>(attr.ranking.size());
    if (k < 0 || k > joints)
        throw RangeError("k = " + std::to_string(k) + " out of range [0, " +
                         std::to_string(joints) + "]");
    std::vector<int> top(attr.ranking.begin(), attr.ranking.begin() + k);
    std::vector<int> rest(attr.ranking.begin() + k, attr.ranking.end());
    return {std::move(top), std::move(rest)};
}

std::string attribution_to_json(const Attribution& attr, std::string_view sample_id,
                                int class_id) {
    nlohmann::ordered_json doc;
    doc["sample_id"] = std::string(sample_id);
    doc["method"] = method_name(attr.method);
    doc["class_id"] = class_id;
    doc["per_joint"] = attr.per_joint;
    doc["ranking"] = attr.ranking;
    doc["degenerate"] = attr.degenerate;
    return doc.dump();
}

}  // namespace skelxai
