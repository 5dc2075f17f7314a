#include <doctest.h>

#include <vector>

#include "skelxai/errors.hpp"
#include "skelxai/model.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/synth.hpp"

using namespace skelxai;

namespace {

std::vector<LabeledSample> tiny_dataset(int per_class, int classes, std::uint64_t seed,
                                        const SkeletonGraph& graph, int frames = 16) {
    std::vector<LabeledSample> data;
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i) {
            const SkeletonSequence seq =
                synth_generate(c, seed + 1000 * c + i, frames, kSynthDefaultNoiseSigma);
            data.push_back({preprocess(seq, graph), c});
        }
    return data;
}

}  // namespace

TEST_CASE("one-sample dataset is memorized") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = tiny_dataset(1, 1, 5, graph);
    Hyperparams hp;
    hp.epochs = 5;
    hp.batch = 1;
    hp.lr = 0.1;
    const TrainResult result = train(data, hp, 3, graph);
    CHECK(result.train_accuracy.back() == 1.0);
}

TEST_CASE("training is bitwise deterministic for a fixed seed") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = tiny_dataset(3, 2, 9, graph);
    Hyperparams hp;
    hp.epochs = 3;
    hp.batch = 2;
    const TrainResult a = train(data, hp, 42, graph);
    const TrainResult b = train(data, hp, 42, graph);
    for (int br = 0; br < kBranchCount; ++br) {
        CHECK(a.params.branches[br].gc_weight == b.params.branches[br].gc_weight);
        CHECK(a.params.branches[br].tc_weight == b.params.branches[br].tc_weight);
    }
    CHECK(a.params.fuse_weight == b.params.fuse_weight);
    CHECK(a.params.head_weight == b.params.head_weight);
    CHECK(a.params.head_bias == b.params.head_bias);
    CHECK(a.loss_history == b.loss_history);

    const TrainResult c = train(data, hp, 43, graph);
    CHECK(a.params.head_weight != c.params.head_weight);
}

TEST_CASE("empty dataset raises ConfigError") {
    const SkeletonGraph graph = build_ntu_graph();
    Hyperparams hp;
    CHECK_THROWS_AS(train({}, hp, 1, graph), ConfigError);
}

TEST_CASE("diverging training raises TrainingError") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = tiny_dataset(2, 2, 13, graph);
    Hyperparams hp;
    hp.epochs = 30;
    hp.batch = 2;
    hp.lr = 1e12;  // guaranteed blow-up
    CHECK_THROWS_AS(train(data, hp, 1, graph), TrainingError);
}

TEST_CASE("validation accuracy history is recorded") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = tiny_dataset(3, 2, 21, graph);
    const std::vector<LabeledSample> val = tiny_dataset(1, 2, 77, graph);
    Hyperparams hp;
    hp.epochs = 2;
    hp.batch = 3;
    const TrainResult result = train(data, hp, 4, graph, val);
    CHECK(result.val_accuracy.size() == 2);
    CHECK(result.train_accuracy.size() == 2);
    CHECK(result.loss_history.size() == 2);
}
