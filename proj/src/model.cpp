#include "skelxai/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "skelxai/errors.hpp"

namespace skelxai {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void check_size(const std::vector<double>& v, std::size_t expected, const char* name) {
    if (v.size() != expected)
        throw ModelError(std::string("parameter tensor '") + name + "' has size " +
                         std::to_string(v.size()) + ", expected " + std::to_string(expected));
}

// Aggregates joints over the normalized adjacency: out[t,v,:] = sum_u
// adj[v,u] * in[t,u,:]. Shared by forward and inputs of the backward pass.
JointFrames spatial_aggregate(const JointFrames& in, const SkeletonGraph& graph) {
    JointFrames out(in.frames, in.joints);
    const int v_count = in.joints;
    for (int t = 0; t < in.frames; ++t)
        for (int v = 0; v < v_count; ++v) {
            double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0;
            for (int u = 0; u < v_count; ++u) {
                const double w = graph.adj(v, u);
                if (w == 0.0) continue;
                acc0 += w * in.at(t, u, 0);
                acc1 += w * in.at(t, u, 1);
                acc2 += w * in.at(t, u, 2);
            }
            out.at(t, v, 0) = acc0;
            out.at(t, v, 1) = acc1;
            out.at(t, v, 2) = acc2;
        }
    return out;
}

}  // namespace

bool ModelParams::finite() const {
    for (const auto& b : branches)
        if (!all_finite(b.gc_weight) || !all_finite(b.gc_bias) || !all_finite(b.tc_weight) ||
            !all_finite(b.tc_bias))
            return false;
    return all_finite(fuse_weight) && all_finite(fuse_bias) && all_finite(head_weight) &&
           all_finite(head_bias);
}

void ModelParams::validate() const {
    if (classes < 1) throw ModelError("model needs at least one class");
    if (static_cast<int>(branches.size()) != kBranchCount)
        throw ModelError("model needs exactly " + std::to_string(kBranchCount) + " branches");
    for (const auto& b : branches) {
        check_size(b.gc_weight, kInputChannels * kBranchChannels, "gc_weight");
        check_size(b.gc_bias, kBranchChannels, "gc_bias");
        check_size(b.tc_weight, kBranchChannels * kBranchChannels * kTemporalKernel,
                   "tc_weight");
        check_size(b.tc_bias, kBranchChannels, "tc_bias");
    }
    check_size(fuse_weight, kConcatChannels * kFusedChannels, "fuse_weight");
    check_size(fuse_bias, kFusedChannels, "fuse_bias");
    check_size(head_weight, static_cast<std::size_t>(classes) * kFusedChannels, "head_weight");
    check_size(head_bias, classes, "head_bias");
    if (!finite()) throw ModelError("model parameters contain NaN/Inf");
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    double max_logit = -std::numeric_limits<double>::infinity();
    for (double x : logits) max_logit = std::max(max_logit, x);
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

ForwardTrace forward(const ModelParams& params, const MultiBranchInput& input,
                     const SkeletonGraph& graph, ForwardCache* cache) {
    params.validate();
    if (!input.joint.same_shape(input.velocity) || !input.joint.same_shape(input.bone))
        throw ModelError("input branches disagree on shape");
    if (input.joints() != graph.node_count)
        throw ModelError("input has " + std::to_string(input.joints()) +
                         " joints, graph expects " + std::to_string(graph.node_count));
    const int frames = input.frames();
    const int joints = input.joints();
    if (frames < 1) throw ModelError("input has no frames");
    const int out_frames = temporal_out_frames(frames);

    const JointFrames* branch_inputs[kBranchCount] = {&input.joint, &input.velocity,
                                                      &input.bone};

    FeatureMap concat(kConcatChannels, out_frames, joints);
    if (cache) {
        cache->spatial_in.resize(kBranchCount);
        cache->act1.resize(kBranchCount);
    }

    for (int b = 0; b < kBranchCount; ++b) {
        const BranchParams& bp = params.branches[b];
        JointFrames spatial = spatial_aggregate(*branch_inputs[b], graph);

        // Graph conv 3 -> 8 with ReLU, laid out (t*V + v)*8 + o.
        std::vector<double> act1(static_cast<std::size_t>(frames) * joints * kBranchChannels);
        for (int t = 0; t < frames; ++t)
            for (int v = 0; v < joints; ++v) {
                const double x0 = spatial.at(t, v, 0);
                const double x1 = spatial.at(t, v, 1);
                const double x2 = spatial.at(t, v, 2);
                double* out = &act1[(static_cast<std::size_t>(t) * joints + v) *
                                    kBranchChannels];
                for (int o = 0; o < kBranchChannels; ++o) {
                    const double s = bp.gc_bias[o] + x0 * bp.gc_weight[o] +
                                     x1 * bp.gc_weight[kBranchChannels + o] +
                                     x2 * bp.gc_weight[2 * kBranchChannels + o];
                    out[o] = s > 0.0 ? s : 0.0;
                }
            }

        // Temporal conv 8 -> 8 (kernel 5, stride 2, zero pad 2) with ReLU.
        for (int o = 0; o < kBranchChannels; ++o) {
            const double* w = &bp.tc_weight[static_cast<std::size_t>(o) * kBranchChannels *
                                            kTemporalKernel];
            for (int tp = 0; tp < out_frames; ++tp) {
                const int tau0 = tp * kTemporalStride - kTemporalPad;
                for (int v = 0; v < joints; ++v) {
                    double s = bp.tc_bias[o];
                    for (int k = 0; k < kTemporalKernel; ++k) {
                        const int tau = tau0 + k;
                        if (tau < 0 || tau >= frames) continue;
                        const double* a =
                            &act1[(static_cast<std::size_t>(tau) * joints + v) *
                                  kBranchChannels];
                        for (int i = 0; i < kBranchChannels; ++i)
                            s += w[i * kTemporalKernel + k] * a[i];
                    }
                    concat.at(b * kBranchChannels + o, tp, v) = s > 0.0 ? s : 0.0;
                }
            }
        }

        if (cache) {
            cache->spatial_in[b] = std::move(spatial);
            cache->act1[b] = std::move(act1);
        }
    }

    // Fused graph conv 24 -> 16 with ReLU.
    FeatureMap spatial_concat(kConcatChannels, out_frames, joints);
    for (int i = 0; i < kConcatChannels; ++i)
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v) {
                double acc = 0.0;
                for (int u = 0; u < joints; ++u) acc += graph.adj(v, u) * concat.at(i, tp, u);
                spatial_concat.at(i, tp, v) = acc;
            }

    ForwardTrace trace;
    trace.feature_maps = FeatureMap(kFusedChannels, out_frames, joints);
    for (int n = 0; n < kFusedChannels; ++n)
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v) {
                double s = params.fuse_bias[n];
                for (int i = 0; i < kConcatChannels; ++i)
                    s += spatial_concat.at(i, tp, v) * params.fuse_weight[i * kFusedChannels + n];
                trace.feature_maps.at(n, tp, v) = s > 0.0 ? s : 0.0;
            }

    // Global average pooling + linear head.
    trace.gap.assign(kFusedChannels, 0.0);
    const double inv_cells = 1.0 / (static_cast<double>(out_frames) * joints);
    for (int n = 0; n < kFusedChannels; ++n) {
        double acc = 0.0;
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v) acc += trace.feature_maps.at(n, tp, v);
        trace.gap[n] = acc * inv_cells;
    }

    trace.logits.assign(params.classes, 0.0);
    for (int c = 0; c < params.classes; ++c) {
        double s = params.head_bias[c];
        for (int n = 0; n < kFusedChannels; ++n)
            s += params.head_weight[static_cast<std::size_t>(c) * kFusedChannels + n] *
                 trace.gap[n];
        trace.logits[c] = s;
    }
    trace.probs = softmax(trace.logits);
    trace.predicted_class = static_cast<int>(
        std::max_element(trace.probs.begin(), trace.probs.end()) - trace.probs.begin());

    if (cache) {
        cache->concat = std::move(concat);
        cache->spatial_concat = std::move(spatial_concat);
    }
    return trace;
}

FeatureMap grad_featuremaps(const ModelParams& params, const ForwardTrace& trace,
                            int class_id) {
    if (class_id < 0 || class_id >= params.classes)
        throw ModelError("class id " + std::to_string(class_id) + " out of range [0, " +
                         std::to_string(params.classes) + ")");
    const int out_frames = trace.feature_maps.frames;
    const int joints = trace.feature_maps.joints;
    FeatureMap grad(kFusedChannels, out_frames, joints);
    const double inv_cells = 1.0 / (static_cast<double>(out_frames) * joints);
    for (int n = 0; n < kFusedChannels; ++n) {
        const double g =
            params.head_weight[static_cast<std::size_t>(class_id) * kFusedChannels + n] *
            inv_cells;
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v) grad.at(n, tp, v) = g;
    }
    return grad;
}

std::pair<int, std::vector<double>> predict(const ModelParams& params,
                                            const MultiBranchInput& input,
                                            const SkeletonGraph& graph) {
    ForwardTrace trace = forward(params, input, graph);
    return {trace.predicted_class, std::move(trace.probs)};
}

// ---- checkpoint ----

namespace {

constexpr int kCheckpointVersion = 1;

nlohmann::ordered_json tensor_json(const std::vector<double>& data,
                                   std::initializer_list<int> shape) {
    nlohmann::ordered_json t;
    t["shape"] = std::vector<int>(shape);
    t["data"] = data;
    return t;
}

std::vector<double> tensor_from_json(const nlohmann::json& doc, const std::string& name,
                                     std::initializer_list<int> shape) {
    if (!doc.contains(name)) throw ParseError("checkpoint: missing tensor '" + name + "'");
    const auto& t = doc.at(name);
    std::size_t expected = 1;
    for (int d : shape) expected *= static_cast<std::size_t>(d);
    const auto got_shape = t.at("shape").get<std::vector<int>>();
    if (!std::equal(got_shape.begin(), got_shape.end(), shape.begin(), shape.end()))
        throw ParseError("checkpoint: tensor '" + name + "' has unexpected shape");
    auto data = t.at("data").get<std::vector<double>>();
    if (data.size() != expected)
        throw ParseError("checkpoint: tensor '" + name + "' has unexpected size");
    return data;
}

}  // namespace

std::string checkpoint_to_json(const ModelParams& params) {
    params.validate();
    nlohmann::ordered_json doc;
    doc["format_version"] = kCheckpointVersion;
    doc["classes"] = params.classes;
    nlohmann::ordered_json tensors;
    for (int b = 0; b < kBranchCount; ++b) {
        const auto& bp = params.branches[b];
        const std::string prefix = "branch" + std::to_string(b) + ".";
        tensors[prefix + "gc_weight"] =
            tensor_json(bp.gc_weight, {kInputChannels, kBranchChannels});
        tensors[prefix + "gc_bias"] = tensor_json(bp.gc_bias, {kBranchChannels});
        tensors[prefix + "tc_weight"] =
            tensor_json(bp.tc_weight, {kBranchChannels, kBranchChannels, kTemporalKernel});
        tensors[prefix + "tc_bias"] = tensor_json(bp.tc_bias, {kBranchChannels});
    }
    tensors["fuse_weight"] = tensor_json(params.fuse_weight, {kConcatChannels, kFusedChannels});
    tensors["fuse_bias"] = tensor_json(params.fuse_bias, {kFusedChannels});
    tensors["head_weight"] =
        tensor_json(params.head_weight, {params.classes, kFusedChannels});
    tensors["head_bias"] = tensor_json(params.head_bias, {params.classes});
    doc["tensors"] = std::move(tensors);
    return doc.dump();
}

ModelParams checkpoint_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("checkpoint JSON: ") + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kCheckpointVersion)
            throw ParseError("checkpoint: unsupported format version");
        ModelParams params;
        params.classes = doc.at("classes").get<int>();
        const auto& tensors = doc.at("tensors");
        params.branches.resize(kBranchCount);
        for (int b = 0; b < kBranchCount; ++b) {
            auto& bp = params.branches[b];
            const std::string prefix = "branch" + std::to_string(b) + ".";
            bp.gc_weight = tensor_from_json(tensors, prefix + "gc_weight",
                                            {kInputChannels, kBranchChannels});
            bp.gc_bias = tensor_from_json(tensors, prefix + "gc_bias", {kBranchChannels});
            bp.tc_weight = tensor_from_json(
                tensors, prefix + "tc_weight",
                {kBranchChannels, kBranchChannels, kTemporalKernel});
            bp.tc_bias = tensor_from_json(tensors, prefix + "tc_bias", {kBranchChannels});
        }
        params.fuse_weight =
            tensor_from_json(tensors, "fuse_weight", {kConcatChannels, kFusedChannels});
        params.fuse_bias = tensor_from_json(tensors, "fuse_bias", {kFusedChannels});
        params.head_weight =
            tensor_from_json(tensors, "head_weight", {params.classes, kFusedChannels});
        params.head_bias = tensor_from_json(tensors, "head_bias", {params.classes});
        params.validate();
        return params;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint JSON: ") + e.what());
    }
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open checkpoint path for writing: " + path);
    out << checkpoint_to_json(params);
    if (!out) throw ConfigError("failed writing checkpoint: " + path);
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return checkpoint_from_json(text);
}

}  // namespace skelxai
