#include <doctest.h>

#include <random>

#include "nnintra/intra_tm.hpp"
#include "test_util.hpp"

using namespace nnintra;

namespace {

TmReferenceLine make_refs(int n, uint8_t fill) {
    TmReferenceLine r;
    r.n = n;
    r.top.assign(2 * n + 1, fill);
    r.left.assign(2 * n, fill);
    return r;
}

TmReferenceLine random_refs(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    TmReferenceLine r = make_refs(n, 0);
    for (auto& v : r.top) v = static_cast<uint8_t>(rng() & 0xFF);
    for (auto& v : r.left) v = static_cast<uint8_t>(rng() & 0xFF);
    return r;
}

// Transposed reference line: left and top swap roles around the shared corner.
TmReferenceLine transpose_refs(const TmReferenceLine& r) {
    TmReferenceLine t;
    t.n = r.n;
    t.top.resize(2 * r.n + 1);
    t.left.resize(2 * r.n);
    t.top[0] = r.top[0];
    for (int i = 0; i < 2 * r.n; ++i) {
        t.top[1 + i] = r.left[i];
        t.left[i] = r.top[1 + i];
    }
    return t;
}

}  // namespace

TEST_CASE("every mode preserves constant references") {
    for (int n : {4, 8, 16, 32}) {
        TmReferenceLine refs = make_refs(n, 90);
        for (int mode = 0; mode < kNumModes; ++mode) {
            PredBlock pred = predict_tm(mode, refs, n);
            for (auto v : pred) CHECK(v == 90);
        }
    }
}

TEST_CASE("vertical mode copies the top references down") {
    TmReferenceLine refs = make_refs(4, 0);
    refs.top = {5, 10, 20, 30, 40, 50, 60, 70, 80};
    PredBlock pred = predict_tm(kModeVertical, refs, 4);
    for (int y = 0; y < 4; ++y) {
        CHECK(pred[y * 4 + 0] == 10);
        CHECK(pred[y * 4 + 1] == 20);
        CHECK(pred[y * 4 + 2] == 30);
        CHECK(pred[y * 4 + 3] == 40);
    }
}

TEST_CASE("horizontal mode copies the left references across") {
    TmReferenceLine refs = make_refs(4, 0);
    refs.left = {11, 22, 33, 44, 55, 66, 77, 88};
    PredBlock pred = predict_tm(kModeHorizontal, refs, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(pred[y * 4 + x] == refs.left[y]);
}

TEST_CASE("dc averages the n top and n left references") {
    TmReferenceLine refs = make_refs(4, 0);
    for (int i = 1; i <= 4; ++i) refs.top[i] = 100;
    for (int i = 0; i < 4; ++i) refs.left[i] = 50;
    PredBlock pred = predict_tm(kModeDc, refs, 4);
    for (auto v : pred) CHECK(v == 75);  // (4*100 + 4*50 + 4) >> 3
}

TEST_CASE("angular modes mirror under transposition (m <-> 36-m)") {
    for (int n : {4, 8, 16, 32}) {
        TmReferenceLine refs = random_refs(n, 1000 + n);
        TmReferenceLine trans = transpose_refs(refs);
        for (int mode = 2; mode <= 34; ++mode) {
            if (mode == 18) continue;
            PredBlock a = predict_tm(mode, trans, n);
            PredBlock b = predict_tm(36 - mode, refs, n);
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) CHECK(a[y * n + x] == b[x * n + y]);
        }
    }
}

TEST_CASE("invalid mode index is rejected") {
    TmReferenceLine refs = make_refs(4, 10);
    CHECK_THROWS_AS(predict_tm(35, refs, 4), InvariantError);
    CHECK_THROWS_AS(predict_tm(-1, refs, 4), InvariantError);
}

TEST_CASE("predictions are deterministic") {
    TmReferenceLine refs = random_refs(8, 42);
    for (int mode = 0; mode < kNumModes; ++mode) CHECK(predict_tm(mode, refs, 8) == predict_tm(mode, refs, 8));
}

TEST_CASE("tm_best_mode picks an exact reproduction when it is cheap") {
    TmReferenceLine refs = random_refs(4, 9);
    std::vector<uint8_t> orig = predict_tm(kModeVertical, refs, 4);
    MpmSet mpms = derive_mpms(kModeVertical, kModeHorizontal);  // 26 is MPM0
    CHECK(tm_best_mode(orig, refs, 27, mpms) == kModeVertical);
}

TEST_CASE("constant content resolves to planar") {
    TmReferenceLine refs = make_refs(8, 120);
    std::vector<uint8_t> orig(64, 120);
    CHECK(tm_best_mode(orig, refs, 27) == kModePlanar);
}

TEST_CASE("a horizontal ramp selects the horizontal mode") {
    TmReferenceLine refs = make_refs(4, 0);
    for (int i = 0; i < 8; ++i) refs.left[i] = static_cast<uint8_t>(40 + 37 * i % 180);
    for (int i = 0; i < 9; ++i) refs.top[i] = 200;
    std::vector<uint8_t> orig(16);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) orig[y * 4 + x] = refs.left[y];

    // Brute-force SATD over all 35 modes confirms mode 10 is the argmin.
    uint64_t best = ~0ull;
    int best_mode = -1;
    for (int mode = 0; mode < kNumModes; ++mode) {
        uint64_t c = satd(block_residual(orig, predict_tm(mode, refs, 4)), 4);
        if (c < best) {
            best = c;
            best_mode = mode;
        }
    }
    CHECK(best_mode == kModeHorizontal);
    CHECK(tm_best_mode(orig, refs, 27) == kModeHorizontal);
}

TEST_CASE("satd matches the dense hadamard oracle") {
    SUBCASE("zero residual") { CHECK(satd(std::vector<int>(16, 0), 4) == 0); }
    SUBCASE("4x4 constant residual c gives 8|c|") {
        CHECK(satd(std::vector<int>(16, 7), 4) == 56);
        CHECK(satd(std::vector<int>(16, -3), 4) == 24);
    }
    SUBCASE("random residuals, all sizes") {
        std::mt19937_64 rng(77);
        for (int n : {4, 8, 16, 32}) {
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<int> res(static_cast<size_t>(n) * n);
                for (auto& v : res) v = static_cast<int>(rng() % 511) - 255;
                CHECK(satd(res, n) == testutil::satd_oracle(res, n));
            }
        }
    }
}

TEST_CASE("mpm derivation") {
    SUBCASE("equal non-angular neighbors give the default set") {
        CHECK(derive_mpms(1, 1).modes == std::array<int, 3>{0, 1, 26});
        CHECK(derive_mpms(0, 0).modes == std::array<int, 3>{0, 1, 26});
    }
    SUBCASE("distinct neighbors take the first free default as MPM2") {
        CHECK(derive_mpms(10, 26).modes == std::array<int, 3>{10, 26, 0});
        CHECK(derive_mpms(0, 1).modes == std::array<int, 3>{0, 1, 26});
        CHECK(derive_mpms(0, 26).modes == std::array<int, 3>{0, 26, 1});
    }
    SUBCASE("equal angular neighbors wrap around the angular ring") {
        CHECK(derive_mpms(2, 2).modes == std::array<int, 3>{2, 33, 3});
        CHECK(derive_mpms(10, 10).modes == std::array<int, 3>{10, 9, 11});
        CHECK(derive_mpms(34, 34).modes == std::array<int, 3>{34, 33, 3});
    }
    SUBCASE("always three distinct modes in range") {
        for (int l = 0; l < kNumModes; ++l)
            for (int a = 0; a < kNumModes; ++a) {
                auto m = derive_mpms(l, a).modes;
                CHECK(m[0] != m[1]);
                CHECK(m[0] != m[2]);
                CHECK(m[1] != m[2]);
                for (int v : m) {
                    CHECK(v >= 0);
                    CHECK(v < kNumModes);
                }
            }
    }
}

TEST_CASE("mode codewords follow the signaling table") {
    MpmSet mpms = derive_mpms(1, 1);  // {0, 1, 26}
    CHECK(mode_codeword(0, mpms).bits == 0b10);
    CHECK(mode_codeword(0, mpms).len == 2);
    CHECK(mode_codeword(1, mpms).bits == 0b110);
    CHECK(mode_codeword(1, mpms).len == 3);
    CHECK(mode_codeword(26, mpms).bits == 0b111);
    CHECK(mode_codeword(26, mpms).len == 3);
    // 2 is the smallest non-MPM: "0" + "00000".
    CHECK(mode_codeword(2, mpms).bits == 0);
    CHECK(mode_codeword(2, mpms).len == 6);

    SUBCASE("lengths by slot for every mode") {
        for (int mode = 0; mode < kNumModes; ++mode) {
            int expect[4] = {2, 3, 3, 6};
            CHECK(mode_bins(mode, mpms) == expect[mpms.slot_of(mode)]);
        }
    }
    SUBCASE("write/read round trip") {
        for (int l : {0, 1, 7, 26}) {
            MpmSet m = derive_mpms(l, 13);
            BitWriter bw;
            for (int mode = 0; mode < kNumModes; ++mode) write_mode(bw, mode, m);
            BitReader br(bw.bytes());
            for (int mode = 0; mode < kNumModes; ++mode) CHECK(read_mode(br, m) == mode);
        }
    }
}

TEST_CASE("rd lambda") {
    CHECK(rd_lambda(12) == doctest::Approx(0.57));
    CHECK(rd_lambda(27) == doctest::Approx(18.24));
    CHECK(rd_lambda(22) == doctest::Approx(0.57 * std::exp2(10.0 / 3.0)));
    CHECK_THROWS_AS(rd_lambda(52), InvariantError);
}
