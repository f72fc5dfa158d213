#include <doctest.h>

#include <random>

#include "nnintra/bitio.hpp"
#include "nnintra/image_io.hpp"
#include "nnintra/plane.hpp"
#include "png_testdata.hpp"
#include "test_util.hpp"

using namespace nnintra;

TEST_CASE("bit writer packs MSB-first with zero padding") {
    BitWriter bw;
    bw.put_bit(1);
    bw.put_bit(0);
    bw.put_bit(1);
    CHECK(bw.bit_count() == 3);
    CHECK(bw.bytes().size() == 1);
    CHECK(bw.bytes()[0] == 0b10100000);

    bw.put_bits(0b110011, 6);
    CHECK(bw.bytes().size() == 2);
    CHECK(bw.bytes()[0] == 0b10111001);
    CHECK(bw.bytes()[1] == 0b10000000);
}

TEST_CASE("bit round trip is the identity for random strings up to 2^20 bits") {
    std::mt19937_64 rng(7);
    for (size_t len : {1u, 7u, 8u, 9u, 63u, 512u, 4097u, 1u << 20}) {
        std::vector<int> bits(len);
        BitWriter bw;
        for (auto& b : bits) {
            b = static_cast<int>(rng() & 1);
            bw.put_bit(b);
        }
        BitReader br(bw.bytes());
        for (size_t i = 0; i < len; ++i) CHECK(br.get_bit() == bits[i]);
    }
}

TEST_CASE("bit reader refuses to read past the end") {
    BitWriter bw;
    bw.put_bits(0x5, 3);
    BitReader br(bw.bytes());
    br.get_bits(8);  // padding bits are readable within the byte
    CHECK_THROWS_AS(br.get_bit(), FormatError);
}

TEST_CASE("bit writer append concatenates at bit granularity") {
    BitWriter a, b;
    a.put_bits(0b101, 3);
    b.put_bits(0b0111, 4);
    a.append(b);
    CHECK(a.bit_count() == 7);
    CHECK(a.bytes()[0] == 0b10101110);
}

TEST_CASE("pgm P5 direct byte copy") {
    std::vector<uint8_t> file = {'P', '5', '\n', '2', ' ', '2', '\n', '2', '5', '5', '\n', 0, 255, 128, 64};
    Plane p = detail::load_pgm(file);
    CHECK(p.width == 2);
    CHECK(p.height == 2);
    CHECK(p.samples == std::vector<uint8_t>{0, 255, 128, 64});
}

TEST_CASE("pgm rejects non-8-bit and truncated input") {
    std::vector<uint8_t> deep = {'P', '5', '\n', '2', ' ', '2', '\n', '6', '5', '5', '3', '5', '\n'};
    CHECK_THROWS_WITH_AS(detail::load_pgm(deep), "PGM: bit depth != 8", FormatError);

    std::vector<uint8_t> trunc = {'P', '5', '\n', '4', ' ', '4', '\n', '2', '5', '5', '\n', 1, 2, 3};
    CHECK_THROWS_AS(detail::load_pgm(trunc), FormatError);
}

TEST_CASE("pgm save/load round trip") {
    Plane p = testutil::random_plane(37, 23, 99);
    Plane q = detail::load_pgm(encode_pgm(p));
    CHECK(p == q);
}

TEST_CASE("pad_to_grid replicates edges and is idempotent") {
    SUBCASE("aligned input unchanged") {
        Plane p = testutil::random_plane(32, 32, 1);
        CHECK(pad_to_grid(p) == p);
    }
    SUBCASE("33x32 pads columns by replication") {
        Plane p = testutil::random_plane(33, 32, 2);
        Plane q = pad_to_grid(p);
        CHECK(q.width == 64);
        CHECK(q.height == 32);
        for (int y = 0; y < 32; ++y) {
            for (int x = 0; x < 33; ++x) CHECK(q.at(x, y) == p.at(x, y));
            for (int x = 33; x < 64; ++x) CHECK(q.at(x, y) == p.at(32, y));
        }
    }
    SUBCASE("constant input stays constant") {
        Plane p(30, 30, 100);
        Plane q = pad_to_grid(p);
        CHECK(q.width == 32);
        CHECK(q.height == 32);
        for (auto s : q.samples) CHECK(s == 100);
    }
    SUBCASE("idempotent") {
        Plane p = testutil::random_plane(45, 17, 3);
        Plane q = pad_to_grid(p);
        CHECK(pad_to_grid(q) == q);
    }
}

TEST_CASE("png grayscale passes luma through") {
    Plane p = detail::load_png(pngdata::white_gray8);
    CHECK(p.width == 8);
    CHECK(p.height == 8);
    for (auto s : p.samples) CHECK(s == 255);
}

TEST_CASE("png color converts via integer BT.601") {
    Plane p = detail::load_png(pngdata::white_rgb8);
    // (66*255 + 129*255 + 25*255 + 128) >> 8 + 16 = 235
    for (auto s : p.samples) CHECK(s == 235);

    Plane g = detail::load_png(pngdata::gradient_rgb16);
    CHECK(g.width == 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            int r = (x * 16) & 255, gg = (y * 16) & 255, b = ((x + y) * 8) & 255;
            int expect = clip_pixel(((66 * r + 129 * gg + 25 * b + 128) >> 8) + 16);
            CHECK(g.at(x, y) == expect);
        }
}

TEST_CASE("png palette and gray+alpha variants") {
    Plane p = detail::load_png(pngdata::palette4);
    const uint8_t lut[4] = {detail::bt601_luma(255, 0, 0), detail::bt601_luma(0, 255, 0),
                            detail::bt601_luma(0, 0, 255), detail::bt601_luma(128, 128, 128)};
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(p.at(x, y) == lut[(x + y) % 4]);

    Plane ga = detail::load_png(pngdata::grayalpha6x5);
    CHECK(ga.width == 6);
    CHECK(ga.height == 5);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 6; ++x) CHECK(ga.at(x, y) == 10 * (x + 1) + y);
}

TEST_CASE("png rejects corruption") {
    auto trunc = pngdata::gradient_rgb16;
    trunc.resize(trunc.size() / 2);
    CHECK_THROWS_AS(detail::load_png(trunc), FormatError);

    auto bad_crc = pngdata::white_gray8;
    bad_crc[bad_crc.size() - 5] ^= 0xFF;  // inside IEND crc
    CHECK_THROWS_AS(detail::load_png(bad_crc), FormatError);
}

TEST_CASE("inflate handles stored and fixed-huffman blocks") {
    std::mt19937_64 rng(11);
    std::vector<uint8_t> payload(300);
    for (auto& b : payload) b = static_cast<uint8_t>(rng() & 0xFF);

    SUBCASE("stored") {
        std::vector<uint8_t> stream;
        stream.push_back(0x01);  // bfinal=1, btype=00
        stream.push_back(static_cast<uint8_t>(payload.size() & 0xFF));
        stream.push_back(static_cast<uint8_t>(payload.size() >> 8));
        stream.push_back(static_cast<uint8_t>(~payload.size() & 0xFF));
        stream.push_back(static_cast<uint8_t>((~payload.size() >> 8) & 0xFF));
        stream.insert(stream.end(), payload.begin(), payload.end());
        CHECK(detail::inflate(stream.data(), stream.size()) == payload);
    }
    SUBCASE("fixed huffman, literals only") {
        // Emit each byte with its fixed literal code (Huffman codes go out
        // MSB-of-code first while the stream itself is LSB-first).
        std::vector<uint8_t> stream;
        uint32_t acc = 0;
        int nbits = 0;
        auto put = [&](uint32_t code, int len) {
            for (int i = len - 1; i >= 0; --i) {
                acc |= ((code >> i) & 1) << nbits;
                if (++nbits == 8) {
                    stream.push_back(static_cast<uint8_t>(acc));
                    acc = 0;
                    nbits = 0;
                }
            }
        };
        auto put_lsb = [&](uint32_t v, int len) {
            for (int i = 0; i < len; ++i) {
                acc |= ((v >> i) & 1) << nbits;
                if (++nbits == 8) {
                    stream.push_back(static_cast<uint8_t>(acc));
                    acc = 0;
                    nbits = 0;
                }
            }
        };
        put_lsb(1, 1);  // bfinal
        put_lsb(1, 2);  // btype = 01 fixed
        for (uint8_t b : payload) {
            if (b < 144) put(0x30 + b, 8);
            else put(0x190 + (b - 144), 9);
        }
        put(0, 7);  // end of block (symbol 256)
        if (nbits) stream.push_back(static_cast<uint8_t>(acc));
        CHECK(detail::inflate(stream.data(), stream.size()) == payload);
    }
}

TEST_CASE("load_plane dispatches by magic and rejects unknown formats") {
    CHECK_THROWS_AS(load_plane("/nonexistent/file.pgm"), FormatError);
    std::string tmp = "/tmp/nnintra_core_test.bin";
    write_file_bytes(tmp, {1, 2, 3, 4});
    CHECK_THROWS_AS(load_plane(tmp), FormatError);

    Plane p = testutil::random_plane(19, 7, 5);
    std::string img = "/tmp/nnintra_core_test.pgm";
    save_plane(p, img);
    CHECK(load_plane(img) == p);
}
