#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skelxai/graph.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/tensors.hpp"

namespace skelxai {

// Three-branch spatiotemporal GCN classifier. Per branch: graph conv
// (3 -> 8 channels, normalized-adjacency weighted) + ReLU, temporal conv
// (kernel 5, stride 2, pad 2, 8 -> 8) + ReLU. The branches are channel-
// concatenated (24), fused by one graph conv (24 -> 16) + ReLU, globally
// average pooled over (T', V) and classified by a linear head.
inline constexpr int kInputChannels = 3;
inline constexpr int kBranchCount = 3;
inline constexpr int kBranchChannels = 8;
inline constexpr int kConcatChannels = kBranchCount * kBranchChannels;
inline constexpr int kFusedChannels = 16;
inline constexpr int kTemporalKernel = 5;
inline constexpr int kTemporalStride = 2;
inline constexpr int kTemporalPad = 2;

constexpr int temporal_out_frames(int frames) {
    return (frames + 2 * kTemporalPad - kTemporalKernel) / kTemporalStride + 1;
}

struct BranchParams {
    std::vector<double> gc_weight;  // kInputChannels x kBranchChannels
    std::vector<double> gc_bias;    // kBranchChannels
    std::vector<double> tc_weight;  // kBranchChannels x kBranchChannels x kTemporalKernel
    std::vector<double> tc_bias;    // kBranchChannels
};

struct ModelParams {
    int classes = 0;
    std::vector<BranchParams> branches;  // size kBranchCount
    std::vector<double> fuse_weight;     // kConcatChannels x kFusedChannels
    std::vector<double> fuse_bias;       // kFusedChannels
    std::vector<double> head_weight;     // classes x kFusedChannels
    std::vector<double> head_bias;       // classes

    bool finite() const;
    // Throws ModelError when a tensor has the wrong size or non-finite
    // entries.
    void validate() const;
};

// Everything captured from one forward pass that the attribution and metric
// code consumes.
struct ForwardTrace {
    FeatureMap feature_maps;     // kFusedChannels x T' x V, the stage feeding GAP
    std::vector<double> gap;     // kFusedChannels
    std::vector<double> logits;  // classes
    std::vector<double> probs;   // softmax(logits)
    int predicted_class = -1;    // argmax, lowest index on ties
};

// Intermediate activations needed by backpropagation. Only filled when a
// training step asks for it.
struct ForwardCache {
    std::vector<JointFrames> spatial_in;   // per branch: adjacency-aggregated input
    std::vector<std::vector<double>> act1; // per branch: T x V x kBranchChannels, post-ReLU
    FeatureMap concat;                     // kConcatChannels x T' x V, post-ReLU
    FeatureMap spatial_concat;             // adjacency-aggregated concat
};

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

ForwardTrace forward(const ModelParams& params, const MultiBranchInput& input,
                     const SkeletonGraph& graph, ForwardCache* cache = nullptr);

// Analytic d logits[class_id] / d feature_maps. For this architecture the
// gradient is constant per channel: head_weight[class_id, n] / (T' * V).
FeatureMap grad_featuremaps(const ModelParams& params, const ForwardTrace& trace,
                            int class_id);

std::pair<int, std::vector<double>> predict(const ModelParams& params,
                                            const MultiBranchInput& input,
                                            const SkeletonGraph& graph);

// ---- training ----

struct LabeledSample {
    MultiBranchInput input;
    int label = 0;
};

struct Hyperparams {
    double lr = 0.05;
    int epochs = 30;
    int batch = 32;
    double weight_decay = 0.0;
    double momentum = 0.9;
    bool parallel = true;  // fan batch gradients out over OpenMP threads
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history;      // mean training loss per epoch
    std::vector<double> train_accuracy;    // per epoch
    std::vector<double> val_accuracy;      // per epoch; empty without a val set
};

// Gradient accumulator with the same tensor layout as ModelParams.
struct Gradients {
    std::vector<BranchParams> branches;
    std::vector<double> fuse_weight, fuse_bias;
    std::vector<double> head_weight, head_bias;

    explicit Gradients(int classes = 0);
    void set_zero();
    void add(const Gradients& other);
    void scale(double s);
};

ModelParams init_params(int classes, std::uint64_t seed);

// Cross-entropy loss of one sample plus parameter gradients (accumulated
// into `out`). Returns the loss.
double sample_loss_and_gradient(const ModelParams& params, const SkeletonGraph& graph,
                                const MultiBranchInput& input, int label, Gradients& out);

// Mean gradient over a batch (indices into `data`), serial reference and the
// OpenMP fan-out. Both accumulate per-sample gradients in index order, so
// their results are bitwise identical.
double batch_gradient_serial(const ModelParams& params, const SkeletonGraph& graph,
                             std::span<const LabeledSample> data, std::span<const int> batch,
                             Gradients& out);
double batch_gradient_parallel(const ModelParams& params, const SkeletonGraph& graph,
                               std::span<const LabeledSample> data, std::span<const int> batch,
                               Gradients& out);

// Full-model SGD-with-momentum training loop, deterministic for a given
// seed. Throws ConfigError on an empty dataset and TrainingError when the
// loss stops being finite.
TrainResult train(std::span<const LabeledSample> train_set, const Hyperparams& hp,
                  std::uint64_t seed, const SkeletonGraph& graph,
                  std::span<const LabeledSample> val_set = {});

double accuracy(const ModelParams& params, const SkeletonGraph& graph,
                std::span<const LabeledSample> data, bool parallel = true);

// ---- checkpoint ----

// JSON checkpoint of named tensors with shape headers and a format-version
// field. Doubles round-trip bit-exactly.
std::string checkpoint_to_json(const ModelParams& params);
ModelParams checkpoint_from_json(const std::string& text);
void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace skelxai
