#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nnintra/plane.hpp"

namespace nnintra {

namespace detail {

// ---- PGM (binary P5) ----

inline int pgm_next_int(const std::vector<uint8_t>& b, size_t& pos) {
    // Skips whitespace and '#' comments between header tokens.
    while (pos < b.size()) {
        if (std::isspace(b[pos])) {
            ++pos;
        } else if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    if (pos >= b.size() || !std::isdigit(b[pos])) throw FormatError("PGM: malformed header");
    long v = 0;
    while (pos < b.size() && std::isdigit(b[pos])) {
        v = v * 10 + (b[pos] - '0');
        if (v > 1 << 20) throw FormatError("PGM: header value out of range");
        ++pos;
    }
    return static_cast<int>(v);
}

inline Plane load_pgm(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw FormatError("PGM: not a P5 file");
    size_t pos = 2;
    int w = pgm_next_int(bytes, pos);
    int h = pgm_next_int(bytes, pos);
    int maxval = pgm_next_int(bytes, pos);
    if (w <= 0 || h <= 0) throw FormatError("PGM: bad dimensions");
    if (maxval > 255) throw FormatError("PGM: bit depth != 8");
    if (maxval <= 0) throw FormatError("PGM: bad maxval");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw FormatError("PGM: malformed header");
    ++pos;  // single whitespace before raster
    size_t need = static_cast<size_t>(w) * h;
    if (bytes.size() - pos < need) throw FormatError("PGM: truncated file");
    Plane p(w, h);
    std::memcpy(p.samples.data(), bytes.data() + pos, need);
    return p;
}

// ---- zlib / DEFLATE ----

inline uint32_t adler32(const uint8_t* data, size_t len) {
    uint32_t a = 1, b = 0;
    for (size_t i = 0; i < len; ++i) {
        a = (a + data[i]) % 65521u;
        b = (b + a) % 65521u;
    }
    return (b << 16) | a;
}

inline uint32_t crc32(const uint8_t* data, size_t len, uint32_t crc = 0) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t n = 0; n < 256; ++n) {
            uint32_t c = n;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[n] = c;
        }
        return t;
    }();
    crc ^= 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

// DEFLATE bit order is LSB-first, unlike the codec bitstream.
struct LsbBitReader {
    const uint8_t* data;
    size_t size;
    size_t bitpos = 0;

    int bit() {
        if (bitpos >= size * 8) throw FormatError("deflate: truncated stream");
        int b = (data[bitpos >> 3] >> (bitpos & 7)) & 1;
        ++bitpos;
        return b;
    }
    uint32_t bits(int n) {
        uint32_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<uint32_t>(bit()) << i;
        return v;
    }
    void align_byte() { bitpos = (bitpos + 7) & ~size_t(7); }
};

// Canonical Huffman decoder (puff-style counts/symbols walk).
struct Huffman {
    std::array<uint16_t, 16> count{};
    std::vector<uint16_t> symbol;

    void build(const uint8_t* lengths, int n) {
        count.fill(0);
        for (int i = 0; i < n; ++i) count[lengths[i]]++;
        count[0] = 0;
        int left = 1;
        for (int len = 1; len <= 15; ++len) {
            left <<= 1;
            left -= count[len];
            if (left < 0) throw FormatError("deflate: over-subscribed code");
        }
        std::array<uint16_t, 16> offs{};
        for (int len = 1; len < 15; ++len) offs[len + 1] = static_cast<uint16_t>(offs[len] + count[len]);
        symbol.assign(n, 0);
        for (int i = 0; i < n; ++i)
            if (lengths[i]) symbol[offs[lengths[i]]++] = static_cast<uint16_t>(i);
    }

    int decode(LsbBitReader& br) const {
        int code = 0, first = 0, index = 0;
        for (int len = 1; len <= 15; ++len) {
            code |= br.bit();
            int cnt = count[len];
            if (code - first < cnt) return symbol[index + (code - first)];
            index += cnt;
            first = (first + cnt) << 1;
            code <<= 1;
        }
        throw FormatError("deflate: invalid code");
    }
};

inline std::vector<uint8_t> inflate(const uint8_t* data, size_t size) {
    static constexpr uint16_t len_base[29] = {3,  4,  5,  6,  7,  8,  9,  10,  11,  13,  15,  17,  19,  23, 27,
                                              31, 35, 43, 51, 59, 67, 83, 99, 115, 131, 163, 195, 227, 258};
    static constexpr uint8_t len_extra[29] = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                                              2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};
    static constexpr uint16_t dist_base[30] = {1,    2,    3,    4,    5,    7,     9,     13,    17,   25,
                                               33,   49,   65,   97,   129,  193,   257,   385,   513,  769,
                                               1025, 1537, 2049, 3073, 4097, 6145,  8193,  12289, 16385, 24577};
    static constexpr uint8_t dist_extra[30] = {0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4,  4,  5,  5,  6,
                                               6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13};

    LsbBitReader br{data, size};
    std::vector<uint8_t> out;
    bool final_block = false;
    while (!final_block) {
        final_block = br.bit() != 0;
        uint32_t btype = br.bits(2);
        if (btype == 0) {
            br.align_byte();
            size_t byte = br.bitpos >> 3;
            if (byte + 4 > size) throw FormatError("deflate: truncated stored block");
            uint32_t len = data[byte] | (data[byte + 1] << 8);
            uint32_t nlen = data[byte + 2] | (data[byte + 3] << 8);
            if ((len ^ 0xFFFFu) != nlen) throw FormatError("deflate: stored length mismatch");
            byte += 4;
            if (byte + len > size) throw FormatError("deflate: truncated stored block");
            out.insert(out.end(), data + byte, data + byte + len);
            br.bitpos = (byte + len) * 8;
            continue;
        }
        if (btype == 3) throw FormatError("deflate: reserved block type");

        Huffman lit, dist;
        if (btype == 1) {
            uint8_t ll[288];
            for (int i = 0; i < 144; ++i) ll[i] = 8;
            for (int i = 144; i < 256; ++i) ll[i] = 9;
            for (int i = 256; i < 280; ++i) ll[i] = 7;
            for (int i = 280; i < 288; ++i) ll[i] = 8;
            uint8_t dl[30];
            for (auto& d : dl) d = 5;
            lit.build(ll, 288);
            dist.build(dl, 30);
        } else {
            int hlit = static_cast<int>(br.bits(5)) + 257;
            int hdist = static_cast<int>(br.bits(5)) + 1;
            int hclen = static_cast<int>(br.bits(4)) + 4;
            static constexpr int order[19] = {16, 17, 18, 0, 8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15};
            uint8_t cl[19] = {};
            for (int i = 0; i < hclen; ++i) cl[order[i]] = static_cast<uint8_t>(br.bits(3));
            Huffman clh;
            clh.build(cl, 19);
            std::vector<uint8_t> lengths(static_cast<size_t>(hlit) + hdist, 0);
            size_t i = 0;
            while (i < lengths.size()) {
                int sym = clh.decode(br);
                if (sym < 16) {
                    lengths[i++] = static_cast<uint8_t>(sym);
                } else if (sym == 16) {
                    if (i == 0) throw FormatError("deflate: bad length repeat");
                    int rep = 3 + static_cast<int>(br.bits(2));
                    uint8_t prev = lengths[i - 1];
                    while (rep-- && i < lengths.size()) lengths[i++] = prev;
                } else {
                    int rep = sym == 17 ? 3 + static_cast<int>(br.bits(3)) : 11 + static_cast<int>(br.bits(7));
                    while (rep-- && i < lengths.size()) lengths[i++] = 0;
                }
            }
            lit.build(lengths.data(), hlit);
            dist.build(lengths.data() + hlit, hdist);
        }

        for (;;) {
            int sym = lit.decode(br);
            if (sym < 256) {
                out.push_back(static_cast<uint8_t>(sym));
            } else if (sym == 256) {
                break;
            } else {
                sym -= 257;
                if (sym >= 29) throw FormatError("deflate: bad length code");
                size_t length = len_base[sym] + br.bits(len_extra[sym]);
                int dsym = dist.decode(br);
                if (dsym >= 30) throw FormatError("deflate: bad distance code");
                size_t distance = dist_base[dsym] + br.bits(dist_extra[dsym]);
                if (distance > out.size()) throw FormatError("deflate: distance too far back");
                size_t start = out.size() - distance;
                for (size_t k = 0; k < length; ++k) out.push_back(out[start + k]);
            }
        }
    }
    return out;
}

inline std::vector<uint8_t> zlib_inflate(const uint8_t* data, size_t size) {
    if (size < 6) throw FormatError("zlib: truncated stream");
    uint8_t cmf = data[0], flg = data[1];
    if ((cmf & 0x0F) != 8) throw FormatError("zlib: unsupported compression method");
    if (((cmf << 8) | flg) % 31 != 0) throw FormatError("zlib: bad header check");
    if (flg & 0x20) throw FormatError("zlib: preset dictionary unsupported");
    auto out = inflate(data + 2, size - 2 - 4);
    uint32_t stored = (static_cast<uint32_t>(data[size - 4]) << 24) | (static_cast<uint32_t>(data[size - 3]) << 16) |
                      (static_cast<uint32_t>(data[size - 2]) << 8) | data[size - 1];
    if (adler32(out.data(), out.size()) != stored) throw FormatError("zlib: checksum mismatch");
    return out;
}

// ---- PNG ----

inline uint32_t be32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

inline bool is_png(const std::vector<uint8_t>& b) {
    static constexpr uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

inline uint8_t paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<uint8_t>(a);
    if (pb <= pc) return static_cast<uint8_t>(b);
    return static_cast<uint8_t>(c);
}

inline uint8_t bt601_luma(int r, int g, int b) {
    return static_cast<uint8_t>(clip_pixel(((66 * r + 129 * g + 25 * b + 128) >> 8) + 16));
}

inline Plane load_png(const std::vector<uint8_t>& bytes) {
    if (!is_png(bytes)) throw FormatError("PNG: bad signature");
    size_t pos = 8;
    int w = 0, h = 0, depth = 0, color = 0;
    bool seen_ihdr = false, seen_iend = false;
    std::vector<uint8_t> idat;
    std::vector<std::array<uint8_t, 3>> palette;

    while (pos + 8 <= bytes.size() && !seen_iend) {
        uint32_t len = be32(&bytes[pos]);
        if (pos + 12 + static_cast<size_t>(len) > bytes.size()) throw FormatError("PNG: truncated file");
        const uint8_t* type = &bytes[pos + 4];
        const uint8_t* data = &bytes[pos + 8];
        uint32_t want = be32(&bytes[pos + 8 + len]);
        if (crc32(type, 4 + len) != want) throw FormatError("PNG: chunk CRC mismatch");
        std::string name(reinterpret_cast<const char*>(type), 4);
        if (name == "IHDR") {
            if (len != 13) throw FormatError("PNG: bad IHDR");
            w = static_cast<int>(be32(data));
            h = static_cast<int>(be32(data + 4));
            depth = data[8];
            color = data[9];
            if (data[10] != 0 || data[11] != 0) throw FormatError("PNG: unsupported compression/filter method");
            if (data[12] != 0) throw FormatError("PNG: interlaced images unsupported");
            if (depth != 8) throw FormatError("PNG: bit depth != 8");
            if (color != 0 && color != 2 && color != 3 && color != 4 && color != 6)
                throw FormatError("PNG: unsupported color type");
            seen_ihdr = true;
        } else if (name == "PLTE") {
            for (uint32_t i = 0; i + 2 < len; i += 3) palette.push_back({data[i], data[i + 1], data[i + 2]});
        } else if (name == "IDAT") {
            idat.insert(idat.end(), data, data + len);
        } else if (name == "IEND") {
            seen_iend = true;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr || !seen_iend || idat.empty()) throw FormatError("PNG: truncated file");
    if (w <= 0 || h <= 0) throw FormatError("PNG: bad dimensions");

    int channels = color == 2 ? 3 : color == 4 ? 2 : color == 6 ? 4 : 1;
    auto raw = zlib_inflate(idat.data(), idat.size());
    size_t stride = static_cast<size_t>(w) * channels;
    if (raw.size() != (stride + 1) * static_cast<size_t>(h)) throw FormatError("PNG: decompressed size mismatch");

    std::vector<uint8_t> img(stride * h);
    for (int y = 0; y < h; ++y) {
        uint8_t filter = raw[(stride + 1) * y];
        const uint8_t* src = &raw[(stride + 1) * y + 1];
        uint8_t* dst = &img[stride * y];
        const uint8_t* up = y > 0 ? &img[stride * (y - 1)] : nullptr;
        for (size_t i = 0; i < stride; ++i) {
            int a = i >= static_cast<size_t>(channels) ? dst[i - channels] : 0;
            int b = up ? up[i] : 0;
            int c = (up && i >= static_cast<size_t>(channels)) ? up[i - channels] : 0;
            int x = src[i];
            switch (filter) {
                case 0: dst[i] = static_cast<uint8_t>(x); break;
                case 1: dst[i] = static_cast<uint8_t>(x + a); break;
                case 2: dst[i] = static_cast<uint8_t>(x + b); break;
                case 3: dst[i] = static_cast<uint8_t>(x + ((a + b) >> 1)); break;
                case 4: dst[i] = static_cast<uint8_t>(x + paeth(a, b, c)); break;
                default: throw FormatError("PNG: bad filter type");
            }
        }
    }

    // Grayscale passes through; color converts to luma with the integer
    // BT.601 weights.
    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const uint8_t* px = &img[stride * y + static_cast<size_t>(x) * channels];
            uint8_t v;
            switch (color) {
                case 0:
                case 4: v = px[0]; break;
                case 3: {
                    if (px[0] >= palette.size()) throw FormatError("PNG: palette index out of range");
                    const auto& e = palette[px[0]];
                    v = bt601_luma(e[0], e[1], e[2]);
                    break;
                }
                default: v = bt601_luma(px[0], px[1], px[2]); break;
            }
            p.at(x, y) = v;
        }
    }
    return p;
}

}  // namespace detail

inline Plane load_plane(const std::string& path) {
    auto bytes = read_file_bytes(path);
    if (detail::is_png(bytes)) return detail::load_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return detail::load_pgm(bytes);
    throw FormatError("unsupported image format: " + path);
}

inline std::vector<uint8_t> encode_pgm(const Plane& p) {
    std::string header = "P5\n" + std::to_string(p.width) + " " + std::to_string(p.height) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), p.samples.begin(), p.samples.end());
    return out;
}

inline void save_plane(const Plane& p, const std::string& path) { write_file_bytes(path, encode_pgm(p)); }

}  // namespace nnintra
