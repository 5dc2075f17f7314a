#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skelxai/attribution.hpp"
#include "skelxai/metrics.hpp"
#include "skelxai/model.hpp"
#include "skelxai/report.hpp"
#include "skelxai/sequence.hpp"
#include "skelxai/synth.hpp"

namespace skelxai {

// Full experiment description. Parsed from a `key = value` config file; see
// default_config_text() for the documented template.
struct ExperimentConfig {
    enum class Source { Synth, JsonDir, NtuDir };

    Source source = Source::Synth;
    std::string data_dir;  // for JsonDir / NtuDir
    int synth_classes = 8;
    int synth_per_class = 25;
    int synth_frames = kSynthDefaultFrames;
    double synth_noise = kSynthDefaultNoiseSigma;

    // "auto" evaluates the best- and worst-accuracy classes of the model;
    // otherwise a comma list of class ids.
    std::string class_filter = "auto";

    std::vector<double> radii_cm = {2.5, 5.0, 10.0, 20.0, 40.0, 80.0};
    std::vector<Method> methods = {Method::CAM, Method::GradCAM, Method::Random};

    std::vector<int> k_grid = {1, 2, 3, 5, 8, 12, 18, 25};
    int faith_samples = 10;
    int stab_samples = 10;
    double stab_p = 2.0;
    double stab_eps_min = 1e-6;
    bool stab_use_raw = false;
    bool gradcam_rectify = false;

    std::string model_path;
    bool train_if_missing = false;
    Hyperparams train_hp;

    std::string output_dir = "out";
    std::uint64_t seed = 42;
    bool parallel = true;

    void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config_text(const std::string& text);

// Reads and parses a config file. The SKELXAI_OUT_DIR environment variable,
// when set, overrides output_dir (and nothing else).
ExperimentConfig load_config(const std::string& path);

// A commented config template with every key at its default.
std::string default_config_text();

struct ExperimentResult {
    MetricReport report;
    std::string report_csv;
    std::string detail_json;
    // plot file stem -> csv text, one entry per metric
    std::vector<std::pair<std::string, std::string>> plotdata;
    std::vector<int> eval_classes;
    std::vector<std::pair<int, double>> class_accuracy;  // (class, accuracy) on the dataset
};

// Loads the dataset described by the config (synthetic generation or a
// sample directory). Deterministic given the config.
std::vector<SkeletonSequence> load_dataset(const ExperimentConfig& cfg);

// Runs the full sweep: per (sample of the selected classes, method, radius)
// computes the attribution, the prediction-gap curves with their AUC and the
// stability sweep, aggregates everything into the report and writes
// report.csv, detail.json and plotdata/<metric>.csv under output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace skelxai
