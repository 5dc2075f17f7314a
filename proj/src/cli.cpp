#include "skelxai/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skelxai/errors.hpp"
#include "skelxai/harness.hpp"
#include "skelxai/ntu_parser.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << text;
}

// Loads every sample of a directory (JSON interchange or NTU format by
// extension), sorted by filename.
std::vector<SkeletonSequence> load_sample_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && (entry.path().extension() == ".json" ||
                                        entry.path().extension() == ".skeleton"))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no sample files under " + dir);
    std::vector<SkeletonSequence> samples;
    for (const auto& path : files) {
        const std::string text = read_file(path.string(), "sample");
        samples.push_back(path.extension() == ".json"
                              ? sequence_from_json(text)
                              : parse_ntu_skeleton(text, path.filename().string()));
    }
    return samples;
}

int cmd_gen_data(int classes, int per_class, int frames, double noise, std::uint64_t seed,
                 const std::string& out_dir) {
    if (classes < 1 || classes > synth_class_count())
        throw ConfigError("--classes must be in [1, " + std::to_string(synth_class_count()) +
                          "]");
    fs::create_directories(out_dir);
    char name[64];
    for (int c = 0; c < classes; ++c)
        for (int i = 0; i < per_class; ++i) {
            const std::uint64_t sample_seed =
                rng::derive(seed, {0x47454eULL, static_cast<std::uint64_t>(c),
                                   static_cast<std::uint64_t>(i)});
            SkeletonSequence seq = synth_generate(c, sample_seed, frames, noise);
            std::snprintf(name, sizeof(name), "c%02d_%04d.json", c, i);
            write_file((fs::path(out_dir) / name).string(), sequence_to_json(seq));
        }
    std::cout << "wrote " << classes * per_class << " samples to " << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& data_dir, const std::string& out_path, Hyperparams hp,
              std::uint64_t seed, double val_fraction, bool serial) {
    hp.parallel = !serial;
    const SkeletonGraph graph = build_ntu_graph();
    std::vector<SkeletonSequence> sequences = load_sample_dir(data_dir);

    std::vector<LabeledSample> train_set, val_set;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const auto& seq = sequences[i];
        if (seq.label < 0) throw DataError("sample '" + seq.sample_id + "' has no label");
        LabeledSample sample{preprocess(seq, graph), seq.label};
        // Deterministic split: hash of (seed, index).
        const bool to_val =
            val_fraction > 0.0 &&
            rng::unit_from(rng::derive(seed, {0x53504cULL, i})) < val_fraction;
        (to_val ? val_set : train_set).push_back(std::move(sample));
    }

    TrainResult result = train(train_set, hp, seed, graph, val_set);
    save_checkpoint(result.params, out_path);

    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        std::cout << "epoch " << e << ": loss " << result.loss_history[e] << ", train acc "
                  << result.train_accuracy[e];
        if (!result.val_accuracy.empty()) std::cout << ", val acc " << result.val_accuracy[e];
        std::cout << "\n";
    }
    std::cout << "saved checkpoint to " << out_path << "\n";
    return 0;
}

int cmd_explain(const std::string& model_path, const std::string& sample_path,
                const std::string& method_str, std::uint64_t seed, int class_override,
                const std::string& out_path) {
    const SkeletonGraph graph = build_ntu_graph();
    const ModelParams params = load_checkpoint(model_path);
    const std::string text = read_file(sample_path, "sample");
    const SkeletonSequence seq = fs::path(sample_path).extension() == ".skeleton"
                                     ? parse_ntu_skeleton(text, sample_path)
                                     : sequence_from_json(text);
    const Method method = method_from_string(method_str);

    const ForwardTrace trace = forward(params, preprocess(seq, graph), graph);
    const int class_id = class_override >= 0 ? class_override : trace.predicted_class;

    Attribution attr;
    switch (method) {
        case Method::CAM: attr = cam(trace, params, class_id); break;
        case Method::GradCAM: attr = gradcam(trace, params, class_id); break;
        case Method::Random:
            attr = random_attribution(seq.joints(), seed, trace.feature_maps.frames);
            break;
    }
    const std::string doc = attribution_to_json(attr, seq.sample_id, class_id);
    if (out_path.empty())
        std::cout << doc << "\n";
    else
        write_file(out_path, doc);
    return 0;
}

int cmd_evaluate(const std::string& config_path) {
    const ExperimentConfig cfg = load_config(config_path);
    const ExperimentResult result = run_experiment(cfg);
    std::cout << "evaluated classes:";
    for (int cls : result.eval_classes) std::cout << ' ' << cls;
    std::cout << "\nwrote report.csv, detail.json and plotdata/ under " << cfg.output_dir
              << "\n";
    return 0;
}

int cmd_report(const std::string& dir) {
    const std::string csv = read_file((fs::path(dir) / "report.csv").string(), "report");

    // Rebuild the table from the CSV.
    MetricReport report;
    std::istringstream stream(csv);
    std::string line;
    std::getline(stream, line);  // header
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        ReportRow row;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') { quoted = !quoted; continue; }
            if (ch == ',' && !quoted) { fields.push_back(field); field.clear(); continue; }
            field += ch;
        }
        fields.push_back(field);
        if (fields.size() != 13) throw ParseError("report.csv: malformed row: " + line);
        row.class_id = std::stoi(fields[0]);
        row.method = method_from_string(fields[1]);
        row.radius_cm = std::stod(fields[2]);
        MetricCell* cells[] = {&row.pgi, &row.pgu,      &row.ris_joint, &row.ris_velocity,
                               &row.ris_bone, &row.ros, &row.rrs};
        for (int i = 0; i < 7; ++i) {
            const std::string& cell = fields[3 + i];
            const auto comma = cell.find(',');
            if (comma == std::string::npos)
                throw ParseError("report.csv: malformed cell: " + cell);
            cells[i]->mean = std::stod(cell.substr(0, comma));
            cells[i]->halfwidth = std::stod(cell.substr(comma + 1));
            cells[i]->count = std::isnan(cells[i]->mean) ? 0 : 1;
        }
        row.samples = std::stoi(fields[10]);
        row.excluded = std::stoi(fields[11]);
        row.degenerate = std::stoi(fields[12]);
        report.rows.push_back(row);
    }

    std::cout << format_report_table(report);

    const fs::path plot_dir = fs::path(dir) / "plotdata";
    if (fs::is_directory(plot_dir)) {
        std::cout << "\nplot series:\n";
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(plot_dir))
            if (entry.path().extension() == ".csv") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) std::cout << "  " << f.string() << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"XAI metric evaluation for skeleton-based activity recognition"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate synthetic skeleton samples");
    int gen_classes = synth_class_count();
    int gen_per_class = 50;
    int gen_frames = kSynthDefaultFrames;
    double gen_noise = kSynthDefaultNoiseSigma;
    std::uint64_t gen_seed = 7;
    std::string gen_out = "samples";
    gen->add_option("--classes", gen_classes, "number of action classes");
    gen->add_option("--per-class", gen_per_class, "samples per class");
    gen->add_option("--frames", gen_frames, "frames per sample");
    gen->add_option("--noise", gen_noise, "positional noise sigma (m)");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output directory");

    // train
    auto* tr = app.add_subcommand("train", "train the classifier on a sample directory");
    std::string tr_data, tr_out = "model.json";
    Hyperparams tr_hp;
    std::uint64_t tr_seed = 1;
    double tr_val_fraction = 0.1;
    bool tr_serial = false;
    tr->add_option("--data", tr_data, "sample directory")->required();
    tr->add_option("--out", tr_out, "checkpoint path");
    tr->add_option("--epochs", tr_hp.epochs, "epochs");
    tr->add_option("--lr", tr_hp.lr, "learning rate");
    tr->add_option("--batch", tr_hp.batch, "batch size");
    tr->add_option("--weight-decay", tr_hp.weight_decay, "weight decay");
    tr->add_option("--momentum", tr_hp.momentum, "momentum");
    tr->add_option("--seed", tr_seed, "seed");
    tr->add_option("--val-frac", tr_val_fraction, "validation split fraction");
    tr->add_flag("--serial", tr_serial, "disable the OpenMP batch fan-out");

    // explain
    auto* ex = app.add_subcommand("explain", "write the attribution of one sample");
    std::string ex_model, ex_sample, ex_method = "cam", ex_out;
    std::uint64_t ex_seed = 0;
    int ex_class = -1;
    ex->add_option("--model", ex_model, "checkpoint path")->required();
    ex->add_option("--sample", ex_sample, "sample file (.json or .skeleton)")->required();
    ex->add_option("--method", ex_method, "cam | gradcam | random");
    ex->add_option("--seed", ex_seed, "seed for the random method");
    ex->add_option("--class", ex_class, "explain this class instead of the prediction");
    ex->add_option("--out", ex_out, "output path (stdout when omitted)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "run the metric sweep of a config file");
    std::string ev_config;
    ev->add_option("--config", ev_config, "experiment config file")->required();

    // report
    auto* rep = app.add_subcommand("report", "print the summary table of a finished run");
    std::string rep_dir;
    rep->add_option("--dir", rep_dir, "experiment output directory")->required();

    try {
        // CLI11's vector overload consumes arguments last-first.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed())
            return cmd_gen_data(gen_classes, gen_per_class, gen_frames, gen_noise, gen_seed,
                                gen_out);
        if (tr->parsed())
            return cmd_train(tr_data, tr_out, tr_hp, tr_seed, tr_val_fraction, tr_serial);
        if (ex->parsed())
            return cmd_explain(ex_model, ex_sample, ex_method, ex_seed, ex_class, ex_out);
        if (ev->parsed()) return cmd_evaluate(ev_config);
        if (rep->parsed()) return cmd_report(rep_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace skelxai
