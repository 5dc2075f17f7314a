#include "skelxai/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "skelxai/errors.hpp"
#include "skelxai/ntu_parser.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTagData = 0x44415441ULL;
constexpr std::uint64_t kTagTrain = 0x5452414eULL;
constexpr std::uint64_t kTagRandAttr = 0x52415454ULL;
constexpr std::uint64_t kTagFaith = 0x46414954ULL;
constexpr std::uint64_t kTagStab = 0x53544142ULL;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        long x = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value +
                          "'");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (radii_cm.empty()) throw ConfigError("radii_cm must not be empty");
    for (double r : radii_cm)
        if (!(r > 0.0)) throw ConfigError("radii_cm entries must be positive");
    if (methods.empty()) throw ConfigError("methods must not be empty");
    if (source != Source::Synth && data_dir.empty())
        throw ConfigError("data_dir is required for directory data sources");
    if (source == Source::Synth) {
        if (synth_classes < 1 || synth_classes > synth_class_count())
            throw ConfigError("synth_classes must be in [1, " +
                              std::to_string(synth_class_count()) + "]");
        if (synth_per_class < 1) throw ConfigError("synth_per_class must be >= 1");
    }
    if (faith_samples < 1 || stab_samples < 1)
        throw ConfigError("draw counts must be >= 1");
    if (k_grid.empty()) throw ConfigError("k_grid must not be empty");
    if (model_path.empty()) throw ConfigError("model checkpoint path is not set");
    if (output_dir.empty()) throw ConfigError("output_dir is not set");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "data") {
            if (value == "synth") cfg.source = ExperimentConfig::Source::Synth;
            else if (value == "json") cfg.source = ExperimentConfig::Source::JsonDir;
            else if (value == "ntu") cfg.source = ExperimentConfig::Source::NtuDir;
            else throw ConfigError("config key 'data': expected synth|json|ntu, got '" +
                                   value + "'");
        } else if (key == "data_dir") {
            cfg.data_dir = value;
        } else if (key == "synth_classes") {
            cfg.synth_classes = static_cast<int>(parse_int(value, key));
        } else if (key == "synth_per_class") {
            cfg.synth_per_class = static_cast<int>(parse_int(value, key));
        } else if (key == "synth_frames") {
            cfg.synth_frames = static_cast<int>(parse_int(value, key));
        } else if (key == "synth_noise") {
            cfg.synth_noise = parse_double(value, key);
        } else if (key == "classes") {
            cfg.class_filter = value;
        } else if (key == "radii_cm") {
            cfg.radii_cm.clear();
            for (const auto& item : split_list(value))
                cfg.radii_cm.push_back(parse_double(item, key));
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const auto& item : split_list(value))
                cfg.methods.push_back(method_from_string(item));
        } else if (key == "k_grid") {
            cfg.k_grid.clear();
            for (const auto& item : split_list(value))
                cfg.k_grid.push_back(static_cast<int>(parse_int(item, key)));
        } else if (key == "faith_samples") {
            cfg.faith_samples = static_cast<int>(parse_int(value, key));
        } else if (key == "stab_samples") {
            cfg.stab_samples = static_cast<int>(parse_int(value, key));
        } else if (key == "stab_p") {
            cfg.stab_p = parse_double(value, key);
        } else if (key == "stab_eps_min") {
            cfg.stab_eps_min = parse_double(value, key);
        } else if (key == "stab_use_raw") {
            cfg.stab_use_raw = parse_bool(value, key);
        } else if (key == "gradcam_rectify") {
            cfg.gradcam_rectify = parse_bool(value, key);
        } else if (key == "model") {
            cfg.model_path = value;
        } else if (key == "train_if_missing") {
            cfg.train_if_missing = parse_bool(value, key);
        } else if (key == "train_epochs") {
            cfg.train_hp.epochs = static_cast<int>(parse_int(value, key));
        } else if (key == "train_lr") {
            cfg.train_hp.lr = parse_double(value, key);
        } else if (key == "train_batch") {
            cfg.train_hp.batch = static_cast<int>(parse_int(value, key));
        } else if (key == "train_weight_decay") {
            cfg.train_hp.weight_decay = parse_double(value, key);
        } else if (key == "train_momentum") {
            cfg.train_hp.momentum = parse_double(value, key);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
        } else if (key == "parallel") {
            cfg.parallel = parse_bool(value, key);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ExperimentConfig cfg = parse_config_text(text);
    if (const char* out_dir = std::getenv("SKELXAI_OUT_DIR"); out_dir && *out_dir)
        cfg.output_dir = out_dir;
    return cfg;
}

std::string default_config_text() {
    return
        "# experiment configuration (key = value, '#' starts a comment)\n"
        "\n"
        "# data source: synth | json | ntu. Directory sources need data_dir.\n"
        "data = synth\n"
        "# data_dir = samples/\n"
        "synth_classes = 8\n"
        "synth_per_class = 25\n"
        "synth_frames = 64\n"
        "synth_noise = 0.005\n"
        "\n"
        "# classes to evaluate: 'auto' picks the best- and worst-accuracy\n"
        "# classes of the model on this dataset, or give a comma list of ids.\n"
        "classes = auto\n"
        "\n"
        "radii_cm = 2.5, 5, 10, 20, 40, 80\n"
        "methods = cam, gradcam, random\n"
        "\n"
        "k_grid = 1, 2, 3, 5, 8, 12, 18, 25\n"
        "faith_samples = 10\n"
        "stab_samples = 10\n"
        "stab_p = 2\n"
        "stab_eps_min = 1e-6\n"
        "stab_use_raw = false\n"
        "gradcam_rectify = false\n"
        "\n"
        "model = model.json\n"
        "train_if_missing = false\n"
        "train_epochs = 30\n"
        "train_lr = 0.05\n"
        "train_batch = 32\n"
        "train_weight_decay = 0\n"
        "train_momentum = 0.9\n"
        "\n"
        "output_dir = out\n"
        "seed = 42\n"
        "parallel = true\n";
}

std::vector<SkeletonSequence> load_dataset(const ExperimentConfig& cfg) {
    std::vector<SkeletonSequence> samples;
    if (cfg.source == ExperimentConfig::Source::Synth) {
        for (int c = 0; c < cfg.synth_classes; ++c)
            for (int i = 0; i < cfg.synth_per_class; ++i) {
                const std::uint64_t sample_seed =
                    rng::derive(cfg.seed, {kTagData, static_cast<std::uint64_t>(c),
                                           static_cast<std::uint64_t>(i)});
                samples.push_back(
                    synth_generate(c, sample_seed, cfg.synth_frames, cfg.synth_noise));
            }
        return samples;
    }

    if (!fs::is_directory(cfg.data_dir))
        throw DataError("data_dir is not a directory: " + cfg.data_dir);
    std::vector<fs::path> files;
    const std::string ext =
        cfg.source == ExperimentConfig::Source::JsonDir ? ".json" : ".skeleton";
    for (const auto& entry : fs::directory_iterator(cfg.data_dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw DataError("no '" + ext + "' files found under " + cfg.data_dir);

    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open sample file: " + path.string());
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        if (cfg.source == ExperimentConfig::Source::JsonDir) {
            samples.push_back(sequence_from_json(text));
        } else {
            samples.push_back(parse_ntu_skeleton(text, path.filename().string()));
        }
    }
    return samples;
}

namespace {

struct RadiusEval {
    FaithfulnessCurves faithfulness;
    StabilityOutcome stability;
};

struct MethodEval {
    Attribution attribution;
    std::vector<RadiusEval> radii;
};

struct SampleEval {
    int class_id = 0;
    int index_in_class = 0;
    const SkeletonSequence* sequence = nullptr;
    int predicted = -1;
    std::vector<MethodEval> methods;
};

nlohmann::ordered_json metric_at_max_json(const MetricAtMax& m) {
    nlohmann::ordered_json j;
    j["value"] = m.value;
    j["den_norm"] = m.den_norm;
    j["den_floored"] = m.den_floored;
    j["draw"] = m.draw;
    return j;
}

nlohmann::ordered_json stability_json(const StabilityOutcome& s) {
    nlohmann::ordered_json j;
    j["excluded"] = s.excluded;
    j["admissible"] = s.admissible_count;
    j["draws"] = s.draw_count;
    if (!s.excluded) {
        j["ris_joint"] = metric_at_max_json(s.ris_joint);
        j["ris_velocity"] = metric_at_max_json(s.ris_velocity);
        j["ris_bone"] = metric_at_max_json(s.ris_bone);
        j["ros"] = metric_at_max_json(s.ros);
        j["rrs"] = metric_at_max_json(s.rrs);
    }
    auto details = nlohmann::ordered_json::array();
    for (const StabilityDraw& d : s.draws) {
        nlohmann::ordered_json dj;
        dj["admissible"] = d.admissible;
        dj["explanation_change"] = d.explanation_change;
        dj["den_joint"] = d.den_joint;
        dj["den_velocity"] = d.den_velocity;
        dj["den_bone"] = d.den_bone;
        dj["den_probs"] = d.den_probs;
        dj["den_logits"] = d.den_logits;
        details.push_back(std::move(dj));
    }
    j["draw_details"] = std::move(details);
    return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const SkeletonGraph graph = build_ntu_graph();

    // Dataset.
    std::vector<SkeletonSequence> dataset = load_dataset(cfg);
    for (const auto& s : dataset)
        if (s.label < 0)
            throw DataError("sample '" + s.sample_id + "' has no class label");

    // Model.
    ModelParams params;
    if (fs::exists(cfg.model_path)) {
        params = load_checkpoint(cfg.model_path);
    } else if (cfg.train_if_missing) {
        std::vector<LabeledSample> train_set;
        for (int c = 0; c < cfg.synth_classes; ++c)
            for (int i = 0; i < cfg.synth_per_class; ++i) {
                const std::uint64_t s = rng::derive(
                    cfg.seed,
                    {kTagTrain, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)});
                SkeletonSequence seq =
                    synth_generate(c, s, cfg.synth_frames, cfg.synth_noise);
                train_set.push_back({preprocess(seq, graph), seq.label});
            }
        Hyperparams hp = cfg.train_hp;
        hp.parallel = cfg.parallel;
        TrainResult tr = train(train_set, hp, rng::derive(cfg.seed, {kTagTrain}), graph);
        params = std::move(tr.params);
        save_checkpoint(params, cfg.model_path);
    } else {
        throw ConfigError("model checkpoint not found: " + cfg.model_path);
    }

    // Predictions and per-class accuracy over the whole dataset.
    const int n = static_cast<int>(dataset.size());
    std::vector<int> predictions(n, -1);
    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i)
            predictions[i] = forward(params, preprocess(dataset[i], graph), graph).predicted_class;
    } else {
        for (int i = 0; i < n; ++i)
            predictions[i] = forward(params, preprocess(dataset[i], graph), graph).predicted_class;
    }

    std::map<int, std::pair<int, int>> per_class;  // class -> (correct, total)
    for (int i = 0; i < n; ++i) {
        auto& [correct, total] = per_class[dataset[i].label];
        ++total;
        if (predictions[i] == dataset[i].label) ++correct;
    }

    ExperimentResult result;
    for (const auto& [cls, counts] : per_class)
        result.class_accuracy.emplace_back(
            cls, static_cast<double>(counts.first) / counts.second);

    // Class selection.
    if (cfg.class_filter == "auto") {
        int best = -1, worst = -1;
        double best_acc = -1.0, worst_acc = 2.0;
        for (const auto& [cls, acc] : result.class_accuracy) {
            if (acc > best_acc) { best_acc = acc; best = cls; }
            if (acc < worst_acc) { worst_acc = acc; worst = cls; }
        }
        result.eval_classes.push_back(best);
        if (worst != best) result.eval_classes.push_back(worst);
        std::sort(result.eval_classes.begin(), result.eval_classes.end());
    } else {
        for (const auto& item : split_list(cfg.class_filter))
            result.eval_classes.push_back(static_cast<int>(parse_int(item, "classes")));
        std::sort(result.eval_classes.begin(), result.eval_classes.end());
        result.eval_classes.erase(
            std::unique(result.eval_classes.begin(), result.eval_classes.end()),
            result.eval_classes.end());
    }

    // Samples to evaluate, indexed per class in dataset order.
    std::vector<SampleEval> evals;
    for (int cls : result.eval_classes) {
        int index_in_class = 0;
        bool found = false;
        for (int i = 0; i < n; ++i) {
            if (dataset[i].label != cls) continue;
            SampleEval e;
            e.class_id = cls;
            e.index_in_class = index_in_class++;
            e.sequence = &dataset[i];
            e.predicted = predictions[i];
            evals.push_back(e);
            found = true;
        }
        if (!found)
            throw DataError("no samples with class " + std::to_string(cls) +
                            " in the dataset");
    }

    // Per-sample evaluation, fanned out over samples. Every result lands in
    // its own slot; aggregation below runs in fixed order, so the output is
    // identical with and without threads.
    const int eval_count = static_cast<int>(evals.size());
    const int method_count = static_cast<int>(cfg.methods.size());
    const int radius_count = static_cast<int>(cfg.radii_cm.size());

    auto evaluate_sample = [&](SampleEval& e) {
        const SkeletonSequence& seq = *e.sequence;
        const MultiBranchInput input = preprocess(seq, graph);
        const ForwardTrace trace = forward(params, input, graph);
        const int predicted = trace.predicted_class;

        e.methods.resize(method_count);
        for (int m = 0; m < method_count; ++m) {
            MethodEval& me = e.methods[m];
            switch (cfg.methods[m]) {
                case Method::CAM:
                    me.attribution = cam(trace, params, predicted);
                    break;
                case Method::GradCAM:
                    me.attribution = gradcam(trace, params, predicted, cfg.gradcam_rectify);
                    break;
                case Method::Random:
                    me.attribution = random_attribution(
                        seq.joints(),
                        rng::derive(cfg.seed,
                                    {kTagRandAttr, static_cast<std::uint64_t>(e.class_id),
                                     static_cast<std::uint64_t>(e.index_in_class)}),
                        trace.feature_maps.frames);
                    break;
            }

            me.radii.resize(radius_count);
            for (int r = 0; r < radius_count; ++r) {
                const double radius_m = cfg.radii_cm[r] * 0.01;

                FaithfulnessConfig fcfg;
                fcfg.k_grid = cfg.k_grid;
                fcfg.radius_m = radius_m;
                fcfg.samples = cfg.faith_samples;
                fcfg.seed = rng::derive(cfg.seed,
                                        {kTagFaith, static_cast<std::uint64_t>(e.class_id),
                                         static_cast<std::uint64_t>(e.index_in_class),
                                         static_cast<std::uint64_t>(r)});
                me.radii[r].faithfulness =
                    faithfulness_curves(params, graph, seq, me.attribution, fcfg);

                StabilityConfig scfg;
                scfg.p = cfg.stab_p;
                scfg.eps_min = cfg.stab_eps_min;
                scfg.radius_m = radius_m;
                scfg.samples = cfg.stab_samples;
                scfg.use_raw_scores = cfg.stab_use_raw;
                // One seed per (sample, radius): every method sees the same
                // perturbed neighborhood.
                scfg.seed = rng::derive(cfg.seed,
                                        {kTagStab, static_cast<std::uint64_t>(e.class_id),
                                         static_cast<std::uint64_t>(e.index_in_class),
                                         static_cast<std::uint64_t>(r)});
                me.radii[r].stability =
                    stability_sweep(params, graph, seq, me.attribution, scfg);
            }
        }
    };

    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < eval_count; ++i) evaluate_sample(evals[i]);
    } else {
        for (int i = 0; i < eval_count; ++i) evaluate_sample(evals[i]);
    }

    // Aggregation: per-class rows plus the class-combined plot series.
    auto stability_values = [](std::span<const SampleEval* const> samples, int m, int r,
                               auto member) {
        std::vector<double> values;
        for (const SampleEval* e : samples) {
            const StabilityOutcome& s = e->methods[m].radii[r].stability;
            if (!s.excluded) values.push_back((s.*member).value);
        }
        return values;
    };

    std::vector<const SampleEval*> all_samples;
    for (const SampleEval& e : evals) all_samples.push_back(&e);

    for (int cls : result.eval_classes) {
        std::vector<const SampleEval*> class_samples;
        for (const SampleEval& e : evals)
            if (e.class_id == cls) class_samples.push_back(&e);

        for (int m = 0; m < method_count; ++m)
            for (int r = 0; r < radius_count; ++r) {
                ReportRow row;
                row.class_id = cls;
                row.method = cfg.methods[m];
                row.radius_cm = cfg.radii_cm[r];
                row.samples = static_cast<int>(class_samples.size());

                std::vector<double> pgi_values, pgu_values;
                for (const SampleEval* e : class_samples) {
                    pgi_values.push_back(e->methods[m].radii[r].faithfulness.pgi_auc);
                    pgu_values.push_back(e->methods[m].radii[r].faithfulness.pgu_auc);
                    if (e->methods[m].radii[r].stability.excluded) ++row.excluded;
                    if (e->methods[m].attribution.degenerate) ++row.degenerate;
                }
                row.pgi = aggregate(pgi_values);
                row.pgu = aggregate(pgu_values);
                row.ris_joint = aggregate(
                    stability_values(class_samples, m, r, &StabilityOutcome::ris_joint));
                row.ris_velocity = aggregate(
                    stability_values(class_samples, m, r, &StabilityOutcome::ris_velocity));
                row.ris_bone = aggregate(
                    stability_values(class_samples, m, r, &StabilityOutcome::ris_bone));
                row.ros =
                    aggregate(stability_values(class_samples, m, r, &StabilityOutcome::ros));
                row.rrs =
                    aggregate(stability_values(class_samples, m, r, &StabilityOutcome::rrs));
                result.report.rows.push_back(std::move(row));
            }
    }

    // Plot series: radius-major, method order as configured.
    std::vector<std::vector<PlotPoint>> plot_points(metric_names().size());
    for (int r = 0; r < radius_count; ++r)
        for (int m = 0; m < method_count; ++m) {
            std::vector<double> pgi_values, pgu_values;
            for (const SampleEval* e : all_samples) {
                pgi_values.push_back(e->methods[m].radii[r].faithfulness.pgi_auc);
                pgu_values.push_back(e->methods[m].radii[r].faithfulness.pgu_auc);
            }
            const std::vector<std::vector<double>> metric_values = {
                pgi_values,
                pgu_values,
                stability_values(all_samples, m, r, &StabilityOutcome::ris_joint),
                stability_values(all_samples, m, r, &StabilityOutcome::ris_velocity),
                stability_values(all_samples, m, r, &StabilityOutcome::ris_bone),
                stability_values(all_samples, m, r, &StabilityOutcome::ros),
                stability_values(all_samples, m, r, &StabilityOutcome::rrs),
            };
            for (std::size_t metric = 0; metric < metric_values.size(); ++metric) {
                PlotPoint p;
                p.radius_cm = cfg.radii_cm[r];
                p.method = cfg.methods[m];
                p.cell = aggregate(metric_values[metric]);
                plot_points[metric].push_back(p);
            }
        }
    for (std::size_t metric = 0; metric < plot_points.size(); ++metric)
        result.plotdata.emplace_back(metric_names()[metric],
                                     plot_series_csv(plot_points[metric]));

    // Detail document.
    nlohmann::ordered_json detail;
    {
        nlohmann::ordered_json config_json;
        config_json["seed"] = cfg.seed;
        config_json["radii_cm"] = cfg.radii_cm;
        std::vector<std::string> method_strings;
        for (Method m : cfg.methods) method_strings.emplace_back(method_name(m));
        config_json["methods"] = method_strings;
        config_json["k_grid"] = cfg.k_grid;
        config_json["faith_samples"] = cfg.faith_samples;
        config_json["stab_samples"] = cfg.stab_samples;
        config_json["stab_p"] = cfg.stab_p;
        config_json["stab_eps_min"] = cfg.stab_eps_min;
        config_json["eval_classes"] = result.eval_classes;
        detail["config"] = std::move(config_json);

        nlohmann::ordered_json acc_json;
        for (const auto& [cls, acc] : result.class_accuracy)
            acc_json[std::to_string(cls)] = acc;
        detail["class_accuracy"] = std::move(acc_json);

        auto samples_json = nlohmann::ordered_json::array();
        for (const SampleEval& e : evals) {
            nlohmann::ordered_json sj;
            sj["sample_id"] = e.sequence->sample_id;
            sj["class"] = e.class_id;
            sj["index_in_class"] = e.index_in_class;
            sj["predicted"] = e.predicted;
            sj["correct"] = e.predicted == e.class_id;
            nlohmann::ordered_json methods_json;
            for (int m = 0; m < method_count; ++m) {
                const MethodEval& me = e.methods[m];
                nlohmann::ordered_json mj;
                mj["degenerate"] = me.attribution.degenerate;
                mj["per_joint"] = me.attribution.per_joint;
                mj["ranking"] = me.attribution.ranking;
                auto radii_json = nlohmann::ordered_json::array();
                for (int r = 0; r < radius_count; ++r) {
                    nlohmann::ordered_json rj;
                    rj["radius_cm"] = cfg.radii_cm[r];
                    rj["pgi_by_k"] = me.radii[r].faithfulness.pgi_values;
                    rj["pgu_by_k"] = me.radii[r].faithfulness.pgu_values;
                    rj["pgi_auc"] = me.radii[r].faithfulness.pgi_auc;
                    rj["pgu_auc"] = me.radii[r].faithfulness.pgu_auc;
                    rj["stability"] = stability_json(me.radii[r].stability);
                    radii_json.push_back(std::move(rj));
                }
                mj["radii"] = std::move(radii_json);
                methods_json[method_name(cfg.methods[m])] = std::move(mj);
            }
            sj["methods"] = std::move(methods_json);
            samples_json.push_back(std::move(sj));
        }
        detail["samples"] = std::move(samples_json);
    }

    result.report_csv = report_to_csv(result.report);
    result.detail_json = detail.dump(2);

    // Artifact files.
    fs::create_directories(fs::path(cfg.output_dir) / "plotdata");
    auto write_file = [](const fs::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write output file: " + path.string());
        out << text;
    };
    write_file(fs::path(cfg.output_dir) / "report.csv", result.report_csv);
    write_file(fs::path(cfg.output_dir) / "detail.json", result.detail_json);
    for (const auto& [stem, text] : result.plotdata)
        write_file(fs::path(cfg.output_dir) / "plotdata" / (stem + ".csv"), text);

    return result;
}

}  // namespace skelxai
