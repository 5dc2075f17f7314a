#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "skelxai/errors.hpp"
#include "skelxai/model.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace {

std::vector<std::vector<double>*> tensor_refs(std::vector<BranchParams>& branches,
                                              std::vector<double>& fuse_w,
                                              std::vector<double>& fuse_b,
                                              std::vector<double>& head_w,
                                              std::vector<double>& head_b) {
    std::vector<std::vector<double>*> refs;
    for (auto& bp : branches) {
        refs.push_back(&bp.gc_weight);
        refs.push_back(&bp.gc_bias);
        refs.push_back(&bp.tc_weight);
        refs.push_back(&bp.tc_bias);
    }
    refs.push_back(&fuse_w);
    refs.push_back(&fuse_b);
    refs.push_back(&head_w);
    refs.push_back(&head_b);
    return refs;
}

std::vector<std::vector<double>*> tensor_refs(ModelParams& p) {
    return tensor_refs(p.branches, p.fuse_weight, p.fuse_bias, p.head_weight, p.head_bias);
}

std::vector<std::vector<double>*> tensor_refs(Gradients& g) {
    return tensor_refs(g.branches, g.fuse_weight, g.fuse_bias, g.head_weight, g.head_bias);
}

double stable_cross_entropy(const std::vector<double>& logits, int label) {
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - max_logit);
    return max_logit + std::log(sum) - logits[label];
}

}  // namespace

Gradients::Gradients(int classes) {
    branches.resize(kBranchCount);
    for (auto& b : branches) {
        b.gc_weight.assign(kInputChannels * kBranchChannels, 0.0);
        b.gc_bias.assign(kBranchChannels, 0.0);
        b.tc_weight.assign(kBranchChannels * kBranchChannels * kTemporalKernel, 0.0);
        b.tc_bias.assign(kBranchChannels, 0.0);
    }
    fuse_weight.assign(kConcatChannels * kFusedChannels, 0.0);
    fuse_bias.assign(kFusedChannels, 0.0);
    head_weight.assign(static_cast<std::size_t>(classes) * kFusedChannels, 0.0);
    head_bias.assign(classes, 0.0);
}

void Gradients::set_zero() {
    for (auto* t : tensor_refs(*this)) std::fill(t->begin(), t->end(), 0.0);
}

void Gradients::add(const Gradients& other) {
    auto dst = tensor_refs(*this);
    auto src = tensor_refs(const_cast<Gradients&>(other));
    for (std::size_t i = 0; i < dst.size(); ++i)
        for (std::size_t j = 0; j < dst[i]->size(); ++j) (*dst[i])[j] += (*src[i])[j];
}

void Gradients::scale(double s) {
    for (auto* t : tensor_refs(*this))
        for (double& x : *t) x *= s;
}

ModelParams init_params(int classes, std::uint64_t seed) {
    if (classes < 1) throw ConfigError("model needs at least one class");
    ModelParams p;
    p.classes = classes;
    p.branches.resize(kBranchCount);
    rng::Stream stream(rng::derive(seed, {0x494e4954ULL}));

    auto he_uniform = [&](std::vector<double>& w, std::size_t size, int fan_in) {
        const double limit = std::sqrt(6.0 / fan_in);
        w.resize(size);
        for (double& x : w) x = stream.next_uniform(-limit, limit);
    };

    for (auto& bp : p.branches) {
        he_uniform(bp.gc_weight, kInputChannels * kBranchChannels, kInputChannels);
        bp.gc_bias.assign(kBranchChannels, 0.0);
        he_uniform(bp.tc_weight, kBranchChannels * kBranchChannels * kTemporalKernel,
                   kBranchChannels * kTemporalKernel);
        bp.tc_bias.assign(kBranchChannels, 0.0);
    }
    he_uniform(p.fuse_weight, kConcatChannels * kFusedChannels, kConcatChannels);
    p.fuse_bias.assign(kFusedChannels, 0.0);
    he_uniform(p.head_weight, static_cast<std::size_t>(classes) * kFusedChannels,
               kFusedChannels);
    p.head_bias.assign(classes, 0.0);
    return p;
}

double sample_loss_and_gradient(const ModelParams& params, const SkeletonGraph& graph,
                                const MultiBranchInput& input, int label, Gradients& out) {
    if (label < 0 || label >= params.classes)
        throw TrainingError("label " + std::to_string(label) + " outside class range");

    ForwardCache cache;
    const ForwardTrace trace = forward(params, input, graph, &cache);
    const double loss = stable_cross_entropy(trace.logits, label);

    const int frames = input.frames();
    const int joints = input.joints();
    const int out_frames = trace.feature_maps.frames;
    const double inv_cells = 1.0 / (static_cast<double>(out_frames) * joints);

    // Head.
    std::vector<double> dlogits = trace.probs;
    dlogits[label] -= 1.0;
    std::vector<double> dgap(kFusedChannels, 0.0);
    for (int c = 0; c < params.classes; ++c) {
        const double dl = dlogits[c];
        out.head_bias[c] += dl;
        for (int n = 0; n < kFusedChannels; ++n) {
            out.head_weight[static_cast<std::size_t>(c) * kFusedChannels + n] +=
                dl * trace.gap[n];
            dgap[n] += dl * params.head_weight[static_cast<std::size_t>(c) * kFusedChannels + n];
        }
    }

    // Through GAP and the fused graph conv's ReLU.
    FeatureMap dfused(kFusedChannels, out_frames, joints);
    for (int n = 0; n < kFusedChannels; ++n) {
        const double g = dgap[n] * inv_cells;
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v)
                dfused.at(n, tp, v) = trace.feature_maps.at(n, tp, v) > 0.0 ? g : 0.0;
    }

    // Fused graph conv weights and input gradient.
    FeatureMap dspatial_concat(kConcatChannels, out_frames, joints);
    for (int n = 0; n < kFusedChannels; ++n) {
        double dbias = 0.0;
        for (int tp = 0; tp < out_frames; ++tp)
            for (int v = 0; v < joints; ++v) {
                const double d = dfused.at(n, tp, v);
                if (d == 0.0) continue;
                dbias += d;
                for (int i = 0; i < kConcatChannels; ++i) {
                    out.fuse_weight[i * kFusedChannels + n] +=
                        d * cache.spatial_concat.at(i, tp, v);
                    dspatial_concat.at(i, tp, v) +=
                        d * params.fuse_weight[i * kFusedChannels + n];
                }
            }
        out.fuse_bias[n] += dbias;
    }

    // Back through the adjacency aggregation (symmetric matrix).
    FeatureMap dconcat(kConcatChannels, out_frames, joints);
    for (int i = 0; i < kConcatChannels; ++i)
        for (int tp = 0; tp < out_frames; ++tp)
            for (int u = 0; u < joints; ++u) {
                double acc = 0.0;
                for (int v = 0; v < joints; ++v)
                    acc += graph.adj(u, v) * dspatial_concat.at(i, tp, v);
                dconcat.at(i, tp, u) = acc;
            }

    // Per branch: temporal conv then graph conv.
    for (int b = 0; b < kBranchCount; ++b) {
        const BranchParams& bp = params.branches[b];
        BranchParams& gb = out.branches[b];
        const std::vector<double>& act1 = cache.act1[b];

        std::vector<double> dact1(act1.size(), 0.0);
        for (int o = 0; o < kBranchChannels; ++o) {
            const double* w = &bp.tc_weight[static_cast<std::size_t>(o) * kBranchChannels *
                                            kTemporalKernel];
            double* gw = &gb.tc_weight[static_cast<std::size_t>(o) * kBranchChannels *
                                       kTemporalKernel];
            double dbias = 0.0;
            for (int tp = 0; tp < out_frames; ++tp) {
                const int tau0 = tp * kTemporalStride - kTemporalPad;
                for (int v = 0; v < joints; ++v) {
                    const double post = dconcat.at(b * kBranchChannels + o, tp, v);
                    if (post == 0.0) continue;
                    if (!(cache.concat.at(b * kBranchChannels + o, tp, v) > 0.0)) continue;
                    dbias += post;
                    for (int k = 0; k < kTemporalKernel; ++k) {
                        const int tau = tau0 + k;
                        if (tau < 0 || tau >= frames) continue;
                        const std::size_t base =
                            (static_cast<std::size_t>(tau) * joints + v) * kBranchChannels;
                        for (int i = 0; i < kBranchChannels; ++i) {
                            gw[i * kTemporalKernel + k] += post * act1[base + i];
                            dact1[base + i] += post * w[i * kTemporalKernel + k];
                        }
                    }
                }
            }
            gb.tc_bias[o] += dbias;
        }

        const JointFrames& spatial = cache.spatial_in[b];
        for (int t = 0; t < frames; ++t)
            for (int v = 0; v < joints; ++v) {
                const std::size_t base =
                    (static_cast<std::size_t>(t) * joints + v) * kBranchChannels;
                for (int o = 0; o < kBranchChannels; ++o) {
                    if (!(act1[base + o] > 0.0)) continue;
                    const double d = dact1[base + o];
                    if (d == 0.0) continue;
                    gb.gc_bias[o] += d;
                    gb.gc_weight[o] += d * spatial.at(t, v, 0);
                    gb.gc_weight[kBranchChannels + o] += d * spatial.at(t, v, 1);
                    gb.gc_weight[2 * kBranchChannels + o] += d * spatial.at(t, v, 2);
                }
            }
    }

    return loss;
}

double batch_gradient_serial(const ModelParams& params, const SkeletonGraph& graph,
                             std::span<const LabeledSample> data, std::span<const int> batch,
                             Gradients& out) {
    out.set_zero();
    double loss_sum = 0.0;
    for (int idx : batch) {
        const LabeledSample& s = data[idx];
        loss_sum += sample_loss_and_gradient(params, graph, s.input, s.label, out);
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    out.scale(inv);
    return loss_sum * inv;
}

double batch_gradient_parallel(const ModelParams& params, const SkeletonGraph& graph,
                               std::span<const LabeledSample> data, std::span<const int> batch,
                               Gradients& out) {
    const int n = static_cast<int>(batch.size());
    std::vector<Gradients> slots(n, Gradients(params.classes));
    std::vector<double> losses(n, 0.0);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const LabeledSample& s = data[batch[i]];
        losses[i] = sample_loss_and_gradient(params, graph, s.input, s.label, slots[i]);
    }

    // Fixed-order reduction: identical result to the serial path.
    out.set_zero();
    double loss_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        out.add(slots[i]);
        loss_sum += losses[i];
    }
    const double inv = 1.0 / static_cast<double>(n);
    out.scale(inv);
    return loss_sum * inv;
}

double accuracy(const ModelParams& params, const SkeletonGraph& graph,
                std::span<const LabeledSample> data, bool parallel) {
    if (data.empty()) return 0.0;
    const int n = static_cast<int>(data.size());
    long correct = 0;
    if (parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : correct)
        for (int i = 0; i < n; ++i) {
            ForwardTrace trace = forward(params, data[i].input, graph);
            if (trace.predicted_class == data[i].label) ++correct;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            ForwardTrace trace = forward(params, data[i].input, graph);
            if (trace.predicted_class == data[i].label) ++correct;
        }
    }
    return static_cast<double>(correct) / n;
}

TrainResult train(std::span<const LabeledSample> train_set, const Hyperparams& hp,
                  std::uint64_t seed, const SkeletonGraph& graph,
                  std::span<const LabeledSample> val_set) {
    if (train_set.empty()) throw ConfigError("training set is empty");
    if (hp.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (hp.batch < 1) throw ConfigError("batch size must be >= 1");
    if (hp.lr <= 0.0) throw ConfigError("learning rate must be > 0");

    int classes = 0;
    for (const auto& s : train_set) classes = std::max(classes, s.label + 1);
    for (const auto& s : val_set) classes = std::max(classes, s.label + 1);
    if (classes < 1) throw ConfigError("training set has no valid labels");

    TrainResult result;
    result.params = init_params(classes, seed);
    Gradients grad(classes);
    Gradients velocity(classes);

    std::vector<int> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        rng::Stream shuffle(rng::derive(seed, {0x53485546ULL, static_cast<std::uint64_t>(epoch)}));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle.next_below(i)]);

        double epoch_loss = 0.0;
        int batches = 0;
        for (std::size_t start = 0; start < order.size(); start += hp.batch) {
            const std::size_t end = std::min(order.size(), start + hp.batch);
            std::span<const int> batch(order.data() + start, end - start);
            const double loss =
                hp.parallel ? batch_gradient_parallel(result.params, graph, train_set, batch, grad)
                            : batch_gradient_serial(result.params, graph, train_set, batch, grad);
            if (!std::isfinite(loss))
                throw TrainingError("training diverged: loss is not finite at epoch " +
                                    std::to_string(epoch));
            epoch_loss += loss;
            ++batches;

            auto p_refs = tensor_refs(result.params);
            auto g_refs = tensor_refs(grad);
            auto v_refs = tensor_refs(velocity);
            for (std::size_t t = 0; t < p_refs.size(); ++t) {
                auto& p = *p_refs[t];
                auto& g = *g_refs[t];
                auto& v = *v_refs[t];
                for (std::size_t j = 0; j < p.size(); ++j) {
                    v[j] = hp.momentum * v[j] - hp.lr * (g[j] + hp.weight_decay * p[j]);
                    p[j] += v[j];
                }
            }
        }

        result.loss_history.push_back(epoch_loss / batches);
        result.train_accuracy.push_back(accuracy(result.params, graph, train_set, hp.parallel));
        if (!val_set.empty())
            result.val_accuracy.push_back(accuracy(result.params, graph, val_set, hp.parallel));
    }

    if (!result.params.finite()) throw TrainingError("training produced non-finite parameters");
    return result;
}

}  // namespace skelxai
