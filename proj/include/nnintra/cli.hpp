#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "nnintra/image_io.hpp"
#include "nnintra/metrics.hpp"
#include "nnintra/train.hpp"

namespace nnintra {

// Exit codes: 0 ok, 2 usage, 3 format, 4 model/digest, 5 internal invariant.
namespace cli {

namespace fs = std::filesystem;

inline std::string hex64(uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> args;
    uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;

    void add_input(const std::string& path) { inputs.emplace_back(path, hex64(fnv1a64(read_file_bytes(path)))); }

    // Written next to the first output as <output>.manifest.json.
    void write() const {
        if (outputs.empty()) return;
        nlohmann::json j;
        j["subcommand"] = subcommand;
        j["args"] = args;
        j["seed"] = seed;
        nlohmann::json in = nlohmann::json::object();
        for (const auto& [path, digest] : inputs) in[path] = digest;
        j["inputs"] = in;
        j["outputs"] = outputs;
        std::string text = j.dump(2) + "\n";
        write_file_bytes(outputs.front() + ".manifest.json", std::vector<uint8_t>(text.begin(), text.end()));
    }
};

inline std::vector<std::string> list_corpus(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pgm" || ext == ".png") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UsageError("no .pgm/.png images in " + dir);
    return files;
}

inline void check_qps(const std::vector<int>& qps) {
    if (qps.empty()) throw UsageError("at least one qp required");
    for (int qp : qps)
        if (qp < 0 || qp > 51) throw UsageError("qp out of [0,51]: " + std::to_string(qp));
}

struct Options {
    // extract-dataset
    std::string corpus_dir, dataset_out;
    std::vector<int> qps{22, 27, 32, 37};
    // train
    std::string dataset_in, models_out, log_name = "train_log.csv";
    std::vector<int> sizes;
    TrainConfig train_cfg;
    std::string norm = "l2";
    // encode/decode
    std::string image_in, bitstream_out, stats_out, rd_append, models_dir, bitstream_in, recon_out;
    int qp = 27;
    std::string predictor = "tm";
    // analyze
    std::vector<std::string> stats_in;
    std::string tables_out;
    // bdrate
    std::string anchor_csv, test_csv;
    // flops
    std::string flops_models;
};

inline int cmd_extract(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    check_qps(o.qps);
    RunManifest man;
    man.subcommand = "extract-dataset";
    man.args = argv;
    std::vector<Plane> corpus;
    for (const auto& f : list_corpus(o.corpus_dir)) {
        man.add_input(f);
        corpus.push_back(load_plane(f));
    }
    Dataset ds = extract_dataset(corpus, o.qps);
    save_dataset(ds, o.dataset_out);
    man.outputs.push_back(o.dataset_out);
    man.write();
    out << "extracted " << ds.size() << " samples from " << corpus.size() << " images at " << o.qps.size()
        << " qps\n";
    return 0;
}

inline int cmd_train(Options o, const std::vector<std::string>& argv, std::ostream& out) {
    if (o.norm == "mse") o.train_cfg.norm = DataNorm::Mse;
    else if (o.norm != "l2") throw UsageError("--norm must be l2 or mse");

    RunManifest man;
    man.subcommand = "train";
    man.args = argv;
    man.seed = o.train_cfg.seed;
    man.add_input(o.dataset_in);
    Dataset ds = load_dataset(o.dataset_in);

    std::vector<int> sizes = o.sizes;
    if (sizes.empty()) {
        for (int n : {4, 8, 16, 32})
            if (std::any_of(ds.begin(), ds.end(), [n](const auto& s) { return s.n == n; })) sizes.push_back(n);
        if (sizes.empty()) throw FormatError("dataset contains no samples");
    }

    TrainReport report;
    ModelRegistry trained = train_all(ds, o.train_cfg, sizes, report);

    // Merge with whatever already lives in the output directory.
    ModelRegistry reg;
    if (fs::exists(fs::path(o.models_out) / "manifest.txt")) reg = load_registry(o.models_out);
    for (auto& [key, m] : trained.entries) reg.insert(std::move(m));
    save_registry(reg, o.models_out);

    std::string log = report.to_csv();
    write_file_bytes((fs::path(o.models_out) / o.log_name).string(), std::vector<uint8_t>(log.begin(), log.end()));

    man.outputs.push_back((fs::path(o.models_out) / "manifest.txt").string());
    man.write();
    for (const auto& sc : report.sizes) {
        uint64_t ft = 0;
        for (auto v : sc.finetune_iters) ft += v;
        out << "size " << sc.n << ": baseline " << sc.baseline_iters << " iters, finetune " << ft << " iters\n";
    }
    return 0;
}

inline int cmd_encode(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest man;
    man.subcommand = "encode";
    man.args = argv;
    man.add_input(o.image_in);
    Plane src = load_plane(o.image_in);

    ModelRegistry reg;
    Predictor pred = Predictor::traditional();
    if (o.predictor == "nm") {
        if (o.models_dir.empty()) throw UsageError("--predictor nm requires --models");
        man.add_input((fs::path(o.models_dir) / "manifest.txt").string());
        reg = load_registry(o.models_dir);
        pred = Predictor::neural(reg);
    } else if (o.predictor != "tm") {
        throw UsageError("--predictor must be tm or nm");
    }

    EncodeResult enc = encode_frame(src, o.qp, pred);
    write_file_bytes(o.bitstream_out, enc.bitstream);
    man.outputs.push_back(o.bitstream_out);
    if (!o.stats_out.empty()) {
        std::string csv = stats_to_csv(enc.stats);
        write_file_bytes(o.stats_out, std::vector<uint8_t>(csv.begin(), csv.end()));
        man.outputs.push_back(o.stats_out);
    }
    double quality = psnr(src, enc.recon);
    if (!o.rd_append.empty()) {
        std::string row;
        if (!fs::exists(o.rd_append)) row = "bitrate,psnr\n";
        std::ostringstream line;
        line.precision(12);
        line << static_cast<double>(enc.stats.total_bits) << "," << quality << "\n";
        row += line.str();
        std::ofstream f(o.rd_append, std::ios::app);
        f << row;
        man.outputs.push_back(o.rd_append);
    }
    man.write();
    out << "bits=" << enc.stats.total_bits << " psnr=" << quality << " blocks=" << enc.stats.blocks.size() << "\n";
    return 0;
}

inline int cmd_decode(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest man;
    man.subcommand = "decode";
    man.args = argv;
    man.add_input(o.bitstream_in);
    ModelRegistry reg;
    const ModelRegistry* reg_ptr = nullptr;
    if (!o.models_dir.empty()) {
        man.add_input((fs::path(o.models_dir) / "manifest.txt").string());
        reg = load_registry(o.models_dir);
        reg_ptr = &reg;
    }
    DecodeResult dec = decode_frame(read_file_bytes(o.bitstream_in), reg_ptr);
    save_plane(dec.plane, o.recon_out);
    man.outputs.push_back(o.recon_out);
    man.write();
    out << "decoded " << dec.plane.width << "x" << dec.plane.height << " qp=" << dec.qp << " predictor="
        << (dec.predictor == PredictorKind::Tm ? "tm" : "nm") << "\n";
    return 0;
}

inline int cmd_analyze(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest man;
    man.subcommand = "analyze";
    man.args = argv;
    ModeStats stats;
    for (const auto& f : o.stats_in) {
        man.add_input(f);
        auto bytes = read_file_bytes(f);
        stats.add(stats_from_csv(std::string(bytes.begin(), bytes.end())));
    }
    ModeProbabilityReport rep;
    try {
        rep = mode_probability_report(stats);
    } catch (const InvariantError& e) {
        throw FormatError(e.what());  // empty stats input, not an internal failure
    }
    fs::create_directories(o.tables_out);
    auto write_text = [&](const std::string& name, const std::string& text) {
        std::string path = (fs::path(o.tables_out) / name).string();
        write_file_bytes(path, std::vector<uint8_t>(text.begin(), text.end()));
        man.outputs.push_back(path);
    };
    write_text("mpm_slots.csv", rep.slots_csv());
    write_text("mode_probability.csv", rep.modes_csv());
    man.write();
    out << "blocks=" << rep.total_blocks << " mpm0=" << rep.slot_pct[0] << "% mpm1=" << rep.slot_pct[1]
        << "% mpm2=" << rep.slot_pct[2] << "% non_mpm=" << rep.slot_pct[3] << "%\n";
    return 0;
}

inline int cmd_bdrate(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest man;
    man.subcommand = "bdrate";
    man.args = argv;
    man.add_input(o.anchor_csv);
    man.add_input(o.test_csv);
    auto read_points = [](const std::string& path) {
        auto bytes = read_file_bytes(path);
        return rd_points_from_csv(std::string(bytes.begin(), bytes.end()));
    };
    double bd;
    try {
        bd = bd_rate(read_points(o.anchor_csv), read_points(o.test_csv));
    } catch (const InvariantError& e) {
        throw FormatError(e.what());  // bad input data, not an internal failure
    }
    out << "BD-rate: " << std::fixed << std::setprecision(2) << bd << "%\n";
    return 0;
}

inline int cmd_flops(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    RunManifest man;
    man.subcommand = "flops";
    man.args = argv;
    man.add_input((fs::path(o.flops_models) / "manifest.txt").string());
    ModelRegistry reg = load_registry(o.flops_models);
    if (reg.entries.empty()) throw ModelError("registry is empty");
    out << "size,arch,mode,flops\n";
    std::map<int, uint64_t> per_size;
    for (const auto& [key, m] : reg.entries) {
        uint64_t f = count_flops(m);
        out << key.first << "," << (model_arch(m) == Arch::Fc ? "fc" : "cnn") << ","
            << (key.second == kBaselineMode ? std::string("baseline") : std::to_string(key.second)) << "," << f
            << "\n";
        per_size[key.first] = f;
    }
    for (const auto& [n, f] : per_size) out << "# size " << n << ": " << f << " flops per prediction\n";
    return 0;
}

}  // namespace cli

inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace cli;
    Options o;
    std::vector<std::string> args(argv + 1, argv + argc);

    CLI::App app{"neural-mode intra image codec"};
    app.require_subcommand(1);

    auto* extract = app.add_subcommand("extract-dataset", "run the TM encoder over a corpus and dump training data");
    extract->add_option("corpus", o.corpus_dir, "directory of .pgm/.png images")->required();
    extract->add_option("-o,--output", o.dataset_out, "output .nmds file")->required();
    extract->add_option("--qps", o.qps, "qp list")->delimiter(',');

    auto* train = app.add_subcommand("train", "train per-mode models from a dataset");
    train->add_option("dataset", o.dataset_in, "input .nmds file")->required();
    train->add_option("-o,--output", o.models_out, "model directory")->required();
    train->add_option("--size", o.sizes, "block sizes to train (default: all present)")->delimiter(',');
    train->add_option("--seed", o.train_cfg.seed, "training seed");
    train->add_option("--epochs-baseline", o.train_cfg.epochs_baseline, "baseline epochs");
    train->add_option("--epochs-finetune", o.train_cfg.epochs_finetune, "fine-tune epochs");
    train->add_option("--lr-fc", o.train_cfg.lr_fc, "FC learning rate");
    train->add_option("--lr-cnn", o.train_cfg.lr_cnn, "CNN learning rate");
    train->add_option("--lambda", o.train_cfg.lambda_reg, "weight regularization");
    train->add_option("--batch", o.train_cfg.batch, "batch size M");
    train->add_option("--fc-width", o.train_cfg.fc_width, "FC hidden width");
    train->add_option("--cnn-filters", o.train_cfg.cnn_filters, "CNN filter count F");
    train->add_option("--norm", o.norm, "data term: l2 or mse");

    auto* encode = app.add_subcommand("encode", "encode one image");
    encode->add_option("image", o.image_in, "input .pgm/.png")->required();
    encode->add_option("--qp", o.qp, "quantization parameter");
    encode->add_option("--predictor", o.predictor, "tm or nm");
    encode->add_option("--models", o.models_dir, "model directory (nm)");
    encode->add_option("-o,--output", o.bitstream_out, "output bitstream")->required();
    encode->add_option("--stats", o.stats_out, "per-block stats csv");
    encode->add_option("--rd-append", o.rd_append, "append a bitrate,psnr row to this csv");

    auto* decode = app.add_subcommand("decode", "decode a bitstream");
    decode->add_option("bitstream", o.bitstream_in, "input .nnic")->required();
    decode->add_option("--models", o.models_dir, "model directory (nm streams)");
    decode->add_option("-o,--output", o.recon_out, "output .pgm")->required();

    auto* analyze = app.add_subcommand("analyze", "aggregate stats csvs into mode reports");
    analyze->add_option("stats", o.stats_in, "stats csv files")->required();
    analyze->add_option("-o,--output", o.tables_out, "output directory")->required();

    auto* bdrate_cmd = app.add_subcommand("bdrate", "BD-rate between two 4-point RD csvs");
    bdrate_cmd->add_option("anchor", o.anchor_csv, "anchor rd csv")->required();
    bdrate_cmd->add_option("test", o.test_csv, "test rd csv")->required();

    auto* flops = app.add_subcommand("flops", "per-model FLOPs report");
    flops->add_option("models", o.flops_models, "model directory")->required();

    try {
        app.parse(argc, argv);
        if (extract->parsed()) return cmd_extract(o, args, out);
        if (train->parsed()) return cmd_train(o, args, out);
        if (encode->parsed()) return cmd_encode(o, args, out);
        if (decode->parsed()) return cmd_decode(o, args, out);
        if (analyze->parsed()) return cmd_analyze(o, args, out);
        if (bdrate_cmd->parsed()) return cmd_bdrate(o, args, out);
        if (flops->parsed()) return cmd_flops(o, args, out);
        err << "no subcommand\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return 3;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace nnintra
