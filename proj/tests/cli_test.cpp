#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "nnintra/cli.hpp"
#include "test_util.hpp"

using namespace nnintra;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"nnintra"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("/tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<uint8_t> slurp(const std::string& p) { return read_file_bytes(p); }

}  // namespace

TEST_CASE("encode/decode pipeline through the cli") {
    TempDir dir("nnintra_cli_codec");
    Plane src = testutil::synthetic_image(64, 48, 7);
    save_plane(src, dir.file("in.pgm"));

    auto enc = run_cli({"encode", dir.file("in.pgm"), "--qp", "27", "-o", dir.file("out.nnic"), "--stats",
                        dir.file("stats.csv")});
    CHECK(enc.code == 0);
    CHECK(enc.out.find("bits=") != std::string::npos);
    CHECK(fs::exists(dir.file("out.nnic")));
    CHECK(fs::exists(dir.file("stats.csv")));
    CHECK(fs::exists(dir.file("out.nnic") + ".manifest.json"));

    auto dec = run_cli({"decode", dir.file("out.nnic"), "-o", dir.file("rec.pgm")});
    CHECK(dec.code == 0);

    // The decoded image must equal the encoder-side reconstruction.
    EncodeResult ref = encode_frame(src, 27, Predictor::traditional());
    CHECK(load_plane(dir.file("rec.pgm")) == ref.recon);
}

TEST_CASE("extract-dataset, train determinism, flops") {
    TempDir dir("nnintra_cli_train");
    fs::create_directories(dir.file("corpus"));
    for (int i = 0; i < 3; ++i)
        save_plane(testutil::synthetic_image(64, 64, 100 + i), dir.file("corpus/img" + std::to_string(i) + ".pgm"));

    auto ex = run_cli({"extract-dataset", dir.file("corpus"), "-o", dir.file("data.nmds"), "--qps", "27,37"});
    CHECK(ex.code == 0);
    CHECK(fs::exists(dir.file("data.nmds")));

    auto train_once = [&] {
        return run_cli({"train", dir.file("data.nmds"), "-o", dir.file("models_a"), "--size", "4", "--seed", "9",
                        "--fc-width", "8", "--epochs-baseline", "1", "--epochs-finetune", "1"});
    };
    CHECK(train_once().code == 0);
    std::map<std::string, std::vector<uint8_t>> first_run;
    for (const auto& e : fs::directory_iterator(dir.file("models_a")))
        first_run[e.path().filename().string()] = slurp(e.path().string());
    fs::remove_all(dir.file("models_a"));
    CHECK(train_once().code == 0);

    // Fixed seed, same command: byte-identical model directory.
    size_t seen = 0;
    for (const auto& e : fs::directory_iterator(dir.file("models_a"))) {
        auto name = e.path().filename().string();
        CAPTURE(name);
        REQUIRE(first_run.count(name) == 1);
        CHECK(slurp(e.path().string()) == first_run[name]);
        ++seen;
    }
    CHECK(seen == first_run.size());

    auto fl = run_cli({"flops", dir.file("models_a")});
    CHECK(fl.code == 0);
    CHECK(fl.out.find("size,arch,mode,flops") != std::string::npos);
    CHECK(fl.out.find("baseline") != std::string::npos);
}

TEST_CASE("bdrate subcommand") {
    TempDir dir("nnintra_cli_bdrate");
    std::vector<RdPoint> pts = {{100, 30}, {200, 33}, {400, 36}, {800, 39}};
    auto csv = rd_points_to_csv(pts);
    write_file_bytes(dir.file("a.csv"), std::vector<uint8_t>(csv.begin(), csv.end()));
    write_file_bytes(dir.file("b.csv"), std::vector<uint8_t>(csv.begin(), csv.end()));

    auto r = run_cli({"bdrate", dir.file("a.csv"), dir.file("b.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.00%") != std::string::npos);

    // Data problems map to the format exit code.
    write_file_bytes(dir.file("short.csv"), {'b', 'i', 't', 'r', 'a', 't', 'e', ',', 'p', 's', 'n', 'r', '\n'});
    CHECK(run_cli({"bdrate", dir.file("a.csv"), dir.file("short.csv")}).code == 3);
}

TEST_CASE("analyze subcommand") {
    TempDir dir("nnintra_cli_analyze");
    Plane src = testutil::synthetic_image(64, 64, 11);
    save_plane(src, dir.file("in.pgm"));
    CHECK(run_cli({"encode", dir.file("in.pgm"), "--qp", "32", "-o", dir.file("o.nnic"), "--stats",
                   dir.file("s.csv")})
              .code == 0);
    auto r = run_cli({"analyze", dir.file("s.csv"), "-o", dir.file("tables")});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.file("tables/mpm_slots.csv")));
    CHECK(fs::exists(dir.file("tables/mode_probability.csv")));
    CHECK(r.out.find("mpm0=") != std::string::npos);

    // A stats file with no block rows is a data problem, not an internal one.
    std::string empty_csv = "# width=0 height=0 qp=0 predictor=tm header_bits=0 split_bins=0 total_bits=0\n"
                            "x,y,n,mode,mpm_slot,mode_bins,res_bits,sse\n";
    write_file_bytes(dir.file("empty.csv"), std::vector<uint8_t>(empty_csv.begin(), empty_csv.end()));
    CHECK(run_cli({"analyze", dir.file("empty.csv"), "-o", dir.file("tables2")}).code == 3);
}

TEST_CASE("cli error paths use distinct exit codes") {
    TempDir dir("nnintra_cli_errors");
    SUBCASE("unknown flag or subcommand is a usage error") {
        CHECK(run_cli({"encode", "--definitely-not-a-flag"}).code == 2);
        CHECK(run_cli({"frobnicate"}).code == 2);
        CHECK(run_cli({}).code == 2);
    }
    SUBCASE("malformed image is a format error") {
        write_file_bytes(dir.file("bad.pgm"), {1, 2, 3});
        CHECK(run_cli({"encode", dir.file("bad.pgm"), "-o", dir.file("x.nnic")}).code == 3);
    }
    SUBCASE("digest mismatch is a model error") {
        Plane src = testutil::synthetic_image(32, 32, 3);
        save_plane(src, dir.file("in.pgm"));
        CHECK(run_cli({"encode", dir.file("in.pgm"), "-o", dir.file("o.nnic")}).code == 0);
        ModelRegistry reg = make_random_registry(4, 8, 1);
        save_registry(reg, dir.file("models"));
        CHECK(run_cli({"decode", dir.file("o.nnic"), "--models", dir.file("models"), "-o", dir.file("r.pgm")})
                  .code == 4);
    }
    SUBCASE("nm encode without models is a usage error") {
        Plane src = testutil::synthetic_image(32, 32, 4);
        save_plane(src, dir.file("in.pgm"));
        CHECK(run_cli({"encode", dir.file("in.pgm"), "--predictor", "nm", "-o", dir.file("o.nnic")}).code == 2);
    }
    SUBCASE("help exits cleanly") { CHECK(run_cli({"--help"}).code == 0); }
}

TEST_CASE("run manifests record seed, config and input digests") {
    TempDir dir("nnintra_cli_manifest");
    Plane src = testutil::synthetic_image(32, 32, 5);
    save_plane(src, dir.file("in.pgm"));
    CHECK(run_cli({"encode", dir.file("in.pgm"), "--qp", "22", "-o", dir.file("o.nnic")}).code == 0);
    auto bytes = slurp(dir.file("o.nnic") + ".manifest.json");
    auto j = nlohmann::json::parse(std::string(bytes.begin(), bytes.end()));
    CHECK(j["subcommand"] == "encode");
    CHECK(j["inputs"].contains(dir.file("in.pgm")));
    std::string digest = j["inputs"][dir.file("in.pgm")];
    CHECK(digest == cli::hex64(fnv1a64(slurp(dir.file("in.pgm")))));
}
