#include <doctest.h>

#include <filesystem>
#include <numeric>
#include <vector>

#include "skelxai/harness.hpp"
#include "skelxai/model.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/rng.hpp"
#include "skelxai/synth.hpp"

using namespace skelxai;
namespace fs = std::filesystem;

namespace {

std::vector<LabeledSample> small_dataset(const SkeletonGraph& graph) {
    std::vector<LabeledSample> data;
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 4; ++i) {
            const SkeletonSequence seq = synth_generate(c, 31 * c + i, 16);
            data.push_back({preprocess(seq, graph), c});
        }
    return data;
}

}  // namespace

TEST_CASE("OpenMP batch gradient matches the serial reference bitwise") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = small_dataset(graph);
    const ModelParams params = init_params(4, 3);

    std::vector<int> batch(data.size());
    std::iota(batch.begin(), batch.end(), 0);

    Gradients serial(params.classes), parallel(params.classes);
    const double loss_serial = batch_gradient_serial(params, graph, data, batch, serial);
    const double loss_parallel = batch_gradient_parallel(params, graph, data, batch, parallel);

    CHECK(loss_serial == loss_parallel);
    for (int b = 0; b < kBranchCount; ++b) {
        CHECK(serial.branches[b].gc_weight == parallel.branches[b].gc_weight);
        CHECK(serial.branches[b].gc_bias == parallel.branches[b].gc_bias);
        CHECK(serial.branches[b].tc_weight == parallel.branches[b].tc_weight);
        CHECK(serial.branches[b].tc_bias == parallel.branches[b].tc_bias);
    }
    CHECK(serial.fuse_weight == parallel.fuse_weight);
    CHECK(serial.fuse_bias == parallel.fuse_bias);
    CHECK(serial.head_weight == parallel.head_weight);
    CHECK(serial.head_bias == parallel.head_bias);
}

TEST_CASE("training with and without the fan-out gives identical parameters") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = small_dataset(graph);
    Hyperparams hp;
    hp.epochs = 2;
    hp.batch = 3;

    Hyperparams serial_hp = hp;
    serial_hp.parallel = false;
    const TrainResult a = train(data, hp, 21, graph);
    const TrainResult b = train(data, serial_hp, 21, graph);

    CHECK(a.params.fuse_weight == b.params.fuse_weight);
    CHECK(a.params.head_weight == b.params.head_weight);
    CHECK(a.loss_history == b.loss_history);
    CHECK(a.train_accuracy == b.train_accuracy);
}

TEST_CASE("parallel and serial experiment runs write identical artifacts") {
    const fs::path base =
        fs::temp_directory_path() / ("skelxai_par_" + std::to_string(rng::mix64(123)));
    fs::create_directories(base);

    ExperimentConfig cfg;
    cfg.synth_classes = 2;
    cfg.synth_per_class = 2;
    cfg.synth_frames = 16;
    cfg.class_filter = "auto";
    cfg.radii_cm = {2.5, 10.0};
    cfg.methods = {Method::CAM, Method::Random};
    cfg.k_grid = {1, 5, 25};
    cfg.faith_samples = 2;
    cfg.stab_samples = 2;
    cfg.model_path = (base / "model.json").string();
    cfg.seed = 12;
    save_checkpoint(init_params(2, 8), cfg.model_path);

    cfg.parallel = true;
    cfg.output_dir = (base / "out_parallel").string();
    const ExperimentResult with_threads = run_experiment(cfg);

    cfg.parallel = false;
    cfg.output_dir = (base / "out_serial").string();
    const ExperimentResult serial = run_experiment(cfg);

    CHECK(with_threads.report_csv == serial.report_csv);
    CHECK(with_threads.detail_json == serial.detail_json);
    REQUIRE(with_threads.plotdata.size() == serial.plotdata.size());
    for (std::size_t i = 0; i < serial.plotdata.size(); ++i)
        CHECK(with_threads.plotdata[i].second == serial.plotdata[i].second);

    std::error_code ec;
    fs::remove_all(base, ec);
}

TEST_CASE("accuracy is identical with and without threads") {
    const SkeletonGraph graph = build_ntu_graph();
    const std::vector<LabeledSample> data = small_dataset(graph);
    const ModelParams params = init_params(4, 99);
    CHECK(accuracy(params, graph, data, true) == accuracy(params, graph, data, false));
}
