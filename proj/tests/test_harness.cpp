#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "skelxai/errors.hpp"
#include "skelxai/harness.hpp"
#include "skelxai/rng.hpp"

using namespace skelxai;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("skelxai_" + name + "_" +
                                            std::to_string(rng::mix64(
                                                reinterpret_cast<std::uintptr_t>(this))));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

// Small, fast experiment over an untrained checkpoint.
ExperimentConfig tiny_config(const TempDir& dir, const std::string& out_name) {
    ExperimentConfig cfg;
    cfg.source = ExperimentConfig::Source::Synth;
    cfg.synth_classes = 3;
    cfg.synth_per_class = 3;
    cfg.synth_frames = 16;
    cfg.class_filter = "2";
    cfg.radii_cm = {2.5};
    cfg.methods = {Method::Random};
    cfg.k_grid = {1, 25};
    cfg.faith_samples = 2;
    cfg.stab_samples = 2;
    cfg.model_path = (dir.path / "model.json").string();
    cfg.output_dir = (dir.path / out_name).string();
    cfg.seed = 9;
    return cfg;
}

void write_checkpoint(const ExperimentConfig& cfg, int classes = 3) {
    save_checkpoint(init_params(classes, 77), cfg.model_path);
}

}  // namespace

TEST_CASE("config text parses defaults and overrides") {
    const ExperimentConfig defaults = parse_config_text(default_config_text());
    CHECK(defaults.source == ExperimentConfig::Source::Synth);
    CHECK(defaults.radii_cm == std::vector<double>{2.5, 5, 10, 20, 40, 80});
    CHECK(defaults.methods.size() == 3);
    CHECK(defaults.k_grid == std::vector<int>{1, 2, 3, 5, 8, 12, 18, 25});
    CHECK(defaults.stab_eps_min == 1e-6);
    CHECK(defaults.seed == 42);

    const ExperimentConfig cfg = parse_config_text(
        "data = synth\nradii_cm = 5, 10\nmethods = cam\nseed = 7\n"
        "stab_p = 1\nparallel = false\nclasses = 0,1\n");
    CHECK(cfg.radii_cm == std::vector<double>{5, 10});
    CHECK(cfg.methods == std::vector<Method>{Method::CAM});
    CHECK(cfg.seed == 7);
    CHECK(cfg.stab_p == 1.0);
    CHECK_FALSE(cfg.parallel);
    CHECK(cfg.class_filter == "0,1");
}

TEST_CASE("config rejects unknown keys and malformed lines") {
    CHECK_THROWS_AS(parse_config_text("no_such_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("data synth\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("seed = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("data = csv\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("methods = lime\n"), ConfigError);
}

TEST_CASE("config validation catches bad values") {
    ExperimentConfig cfg;
    cfg.model_path = "m.json";
    cfg.radii_cm = {};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.radii_cm = {-1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.radii_cm = {2.5};
    cfg.methods = {};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("load_config names a missing path") {
    try {
        load_config("/nonexistent/skelxai.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/skelxai.cfg") != std::string::npos);
    }
}

TEST_CASE("missing checkpoint raises ConfigError") {
    TempDir dir("nockpt");
    const ExperimentConfig cfg = tiny_config(dir, "out");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("single-cell experiment: one row, three samples") {
    TempDir dir("tinyrun");
    const ExperimentConfig cfg = tiny_config(dir, "out");
    write_checkpoint(cfg);

    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.report.rows.size() == 1);
    const ReportRow& row = result.report.rows[0];
    CHECK(row.class_id == 2);
    CHECK(row.method == Method::Random);
    CHECK(row.radius_cm == 2.5);
    CHECK(row.samples == 3);
    CHECK(row.pgi.count == 3);

    CHECK(fs::exists(fs::path(cfg.output_dir) / "report.csv"));
    CHECK(fs::exists(fs::path(cfg.output_dir) / "detail.json"));
    // One plot file per metric, each with |radii| rows per method.
    CHECK(result.plotdata.size() == 7);
    for (const auto& [stem, csv] : result.plotdata) {
        CHECK(fs::exists(fs::path(cfg.output_dir) / "plotdata" / (stem + ".csv")));
        const auto lines = std::count(csv.begin(), csv.end(), '\n');
        CHECK(lines == 1 + static_cast<long>(cfg.radii_cm.size() * cfg.methods.size()));
    }
}

TEST_CASE("experiment output is bitwise reproducible") {
    TempDir dir("repro");
    ExperimentConfig cfg = tiny_config(dir, "out_a");
    write_checkpoint(cfg);
    const ExperimentResult a = run_experiment(cfg);

    cfg.output_dir = (dir.path / "out_b").string();
    const ExperimentResult b = run_experiment(cfg);

    CHECK(a.report_csv == b.report_csv);
    CHECK(a.detail_json == b.detail_json);
    REQUIRE(a.plotdata.size() == b.plotdata.size());
    for (std::size_t i = 0; i < a.plotdata.size(); ++i) {
        CHECK(a.plotdata[i].first == b.plotdata[i].first);
        CHECK(a.plotdata[i].second == b.plotdata[i].second);
    }
    CHECK(read_file(fs::path(dir.path) / "out_a" / "report.csv") ==
          read_file(fs::path(dir.path) / "out_b" / "report.csv"));
}

TEST_CASE("auto class filter evaluates the best and worst classes") {
    TempDir dir("auto");
    ExperimentConfig cfg = tiny_config(dir, "out");
    cfg.class_filter = "auto";
    write_checkpoint(cfg);
    const ExperimentResult result = run_experiment(cfg);
    CHECK(!result.eval_classes.empty());
    CHECK(result.eval_classes.size() <= 2);
    const std::size_t expected_rows =
        result.eval_classes.size() * cfg.methods.size() * cfg.radii_cm.size();
    CHECK(result.report.rows.size() == expected_rows);
}

TEST_CASE("detail document records per-draw denominator norms") {
    TempDir dir("detail");
    const ExperimentConfig cfg = tiny_config(dir, "out");
    write_checkpoint(cfg);
    const ExperimentResult result = run_experiment(cfg);

    const auto doc = nlohmann::json::parse(result.detail_json);
    REQUIRE(doc.contains("samples"));
    REQUIRE(!doc["samples"].empty());
    const auto& sample = doc["samples"][0];
    const auto& stab = sample["methods"]["random"]["radii"][0]["stability"];
    REQUIRE(stab.contains("draw_details"));
    CHECK(stab["draw_details"].size() == 2);
    for (const auto& d : stab["draw_details"]) {
        CHECK(d.contains("den_probs"));
        CHECK(d.contains("den_logits"));
        CHECK(d.contains("den_joint"));
    }
}

TEST_CASE("train_if_missing trains and saves a checkpoint") {
    TempDir dir("trainrun");
    ExperimentConfig cfg = tiny_config(dir, "out");
    cfg.synth_classes = 2;
    cfg.synth_per_class = 2;
    cfg.class_filter = "0";
    cfg.train_if_missing = true;
    cfg.train_hp.epochs = 1;
    cfg.train_hp.batch = 2;
    const ExperimentResult result = run_experiment(cfg);
    CHECK(fs::exists(cfg.model_path));
    CHECK(!result.report.rows.empty());
}

TEST_CASE("unknown class filter raises DataError") {
    TempDir dir("badclass");
    ExperimentConfig cfg = tiny_config(dir, "out");
    cfg.class_filter = "17";
    write_checkpoint(cfg);
    CHECK_THROWS_AS(run_experiment(cfg), DataError);
}

TEST_CASE("json directory data source round-trips samples") {
    TempDir dir("jsondir");
    const fs::path samples_dir = dir.path / "samples";
    fs::create_directories(samples_dir);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i) {
            const SkeletonSequence seq = synth_generate(c, 100 + 10 * c + i, 16);
            std::ofstream out(samples_dir /
                              ("c" + std::to_string(c) + "_" + std::to_string(i) + ".json"));
            out << sequence_to_json(seq);
        }

    ExperimentConfig cfg = tiny_config(dir, "out");
    cfg.source = ExperimentConfig::Source::JsonDir;
    cfg.data_dir = samples_dir.string();
    cfg.class_filter = "1";
    write_checkpoint(cfg);
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.report.rows.size() == 1);
    CHECK(result.report.rows[0].samples == 2);
}
