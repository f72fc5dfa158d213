#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nnintra/plane.hpp"

namespace nnintra {

constexpr int kCtuSize = 32;
constexpr int kMinBlockSize = 4;
constexpr uint8_t kUnavailableFill = 128;  // 2^(bit_depth-1)

constexpr float normalize_sample(int v) { return static_cast<float>(v) / 255.0f - 0.5f; }
inline uint8_t denormalize_sample(float v) {
    return static_cast<uint8_t>(clip_pixel(std::lround((static_cast<double>(v) + 0.5) * 255.0)));
}

namespace detail {

// Morton index of a 4x4 unit inside its CTU (8x8 units, 3 bits per axis).
inline uint32_t zorder_in_ctu(int ux, int uy) {
    uint32_t z = 0;
    for (int b = 0; b < 3; ++b) {
        z |= static_cast<uint32_t>((ux >> b) & 1) << (2 * b);
        z |= static_cast<uint32_t>((uy >> b) & 1) << (2 * b + 1);
    }
    return z;
}

}  // namespace detail

// A sample is available iff it is inside the (padded) frame and its 4x4 unit
// precedes the current block in coding order: raster CTUs, Z-order inside a
// CTU. Aligned power-of-two blocks occupy a contiguous Z range starting at
// their top-left unit, so comparing against that unit is exact for any
// quadtree partition.
inline bool sample_available(const Plane& frame, const BlockRect& cur, int x, int y) {
    if (!frame.contains(x, y)) return false;
    int ctu_x = x / kCtuSize, ctu_y = y / kCtuSize;
    int cur_ctu_x = cur.x / kCtuSize, cur_ctu_y = cur.y / kCtuSize;
    if (ctu_y != cur_ctu_y) return ctu_y < cur_ctu_y;
    if (ctu_x != cur_ctu_x) return ctu_x < cur_ctu_x;
    uint32_t z = detail::zorder_in_ctu((x / kMinBlockSize) & 7, (y / kMinBlockSize) & 7);
    uint32_t cur_z = detail::zorder_in_ctu((cur.x / kMinBlockSize) & 7, (cur.y / kMinBlockSize) & 7);
    return z < cur_z;
}

// L-shaped context for the small-block predictors: an 8-sample-thick top
// strip over columns [-8, 3n) and an 8-wide left strip over rows [0, n),
// flattened row-major in that order. Values are normalized to [-0.5, 0.5].
struct FcContext {
    int n = 0;
    std::vector<float> values;  // (4n+8)*8 entries
};

// Two rectangular regions for the large-block predictors: `above` covers the
// three blocks over rows [-n, 0) x columns [-n, 2n); `left` covers the two
// blocks over rows [0, 2n) x columns [-n, 0). The above-left corner block
// belongs to `above`.
struct CnnContext {
    int n = 0;
    std::vector<float> above;  // 3n^2, row-major
    std::vector<float> left;   // 2n^2, row-major
};

// Raw 8-bit reference line for the traditional modes: top row holds the
// corner plus 2n above/above-right samples, left column holds 2n
// left/below-left samples.
struct TmReferenceLine {
    int n = 0;
    std::vector<uint8_t> top;   // 2n+1: [corner, (x, y-1) for x = bx..bx+2n-1]
    std::vector<uint8_t> left;  // 2n:   [(x-1, y) for y = by..by+2n-1]
};

namespace detail {

inline int context_sample(const Plane& recon, const BlockRect& b, int x, int y) {
    return sample_available(recon, b, x, y) ? recon.at(x, y) : kUnavailableFill;
}

}  // namespace detail

inline FcContext extract_fc_context(const Plane& recon, const BlockRect& b) {
    if (b.n != 4 && b.n != 8) throw InvariantError("FC context requires block size 4 or 8");
    FcContext ctx;
    ctx.n = b.n;
    ctx.values.reserve(static_cast<size_t>(4 * b.n + 8) * 8);
    for (int y = -8; y < 0; ++y)
        for (int x = -8; x < 3 * b.n; ++x)
            ctx.values.push_back(normalize_sample(detail::context_sample(recon, b, b.x + x, b.y + y)));
    for (int y = 0; y < b.n; ++y)
        for (int x = -8; x < 0; ++x)
            ctx.values.push_back(normalize_sample(detail::context_sample(recon, b, b.x + x, b.y + y)));
    return ctx;
}

inline CnnContext extract_cnn_context(const Plane& recon, const BlockRect& b) {
    if (b.n != 16 && b.n != 32) throw InvariantError("CNN context requires block size 16 or 32");
    CnnContext ctx;
    ctx.n = b.n;
    ctx.above.reserve(static_cast<size_t>(3) * b.n * b.n);
    ctx.left.reserve(static_cast<size_t>(2) * b.n * b.n);
    for (int y = -b.n; y < 0; ++y)
        for (int x = -b.n; x < 2 * b.n; ++x)
            ctx.above.push_back(normalize_sample(detail::context_sample(recon, b, b.x + x, b.y + y)));
    for (int y = 0; y < 2 * b.n; ++y)
        for (int x = -b.n; x < 0; ++x)
            ctx.left.push_back(normalize_sample(detail::context_sample(recon, b, b.x + x, b.y + y)));
    return ctx;
}

// HEVC-style reference substitution: when nothing is available the line is
// filled with 128; otherwise the line is scanned bottom-left to top-right and
// each hole takes the value of the nearest previously available sample.
inline TmReferenceLine extract_tm_refline(const Plane& recon, const BlockRect& b) {
    if (!block_size_supported(b.n)) throw InvariantError("unsupported block size");
    int n = b.n;
    // Scan order: left bottom-up, corner, top left-to-right.
    int total = 4 * n + 1;
    std::vector<int> vals(total, -1);
    for (int i = 0; i < 2 * n; ++i) {
        int y = b.y + (2 * n - 1 - i);
        if (sample_available(recon, b, b.x - 1, y)) vals[i] = recon.at(b.x - 1, y);
    }
    if (sample_available(recon, b, b.x - 1, b.y - 1)) vals[2 * n] = recon.at(b.x - 1, b.y - 1);
    for (int i = 0; i < 2 * n; ++i) {
        int x = b.x + i;
        if (sample_available(recon, b, x, b.y - 1)) vals[2 * n + 1 + i] = recon.at(x, b.y - 1);
    }

    int first = 0;
    while (first < total && vals[first] < 0) ++first;
    if (first == total) {
        std::fill(vals.begin(), vals.end(), kUnavailableFill);
    } else {
        for (int i = first - 1; i >= 0; --i) vals[i] = vals[i + 1];
        for (int i = first + 1; i < total; ++i)
            if (vals[i] < 0) vals[i] = vals[i - 1];
    }

    TmReferenceLine line;
    line.n = n;
    line.left.resize(2 * n);
    line.top.resize(2 * n + 1);
    for (int i = 0; i < 2 * n; ++i) line.left[2 * n - 1 - i] = static_cast<uint8_t>(vals[i]);
    line.top[0] = static_cast<uint8_t>(vals[2 * n]);
    for (int i = 0; i < 2 * n; ++i) line.top[1 + i] = static_cast<uint8_t>(vals[2 * n + 1 + i]);
    return line;
}

}  // namespace nnintra
