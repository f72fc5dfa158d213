#pragma once

#include <cstdint>
#include <vector>

#include "nnintra/common.hpp"

namespace nnintra {

// 8-bit luma grid, row-major. Immutable by convention once loaded; the coder
// works on its own copies.
struct Plane {
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::vector<uint8_t> samples;

    Plane() = default;
    Plane(int w, int h, uint8_t fill = 0)
        : width(w), height(h), samples(static_cast<size_t>(w) * h, fill) {}

    uint8_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

    bool operator==(const Plane& o) const = default;
};

// Square coding block. x/y are n-aligned inside the padded grid.
struct BlockRect {
    int x = 0;
    int y = 0;
    int n = 0;
};

using PredBlock = std::vector<uint8_t>;  // n*n predicted samples, row-major

inline bool block_size_supported(int n) { return n == 4 || n == 8 || n == 16 || n == 32; }

// Edge replication up to the next multiple of `ctu`, HM-style, so the CTU
// grid tiles the frame. Idempotent.
inline Plane pad_to_grid(const Plane& p, int ctu = 32) {
    int pw = (p.width + ctu - 1) / ctu * ctu;
    int ph = (p.height + ctu - 1) / ctu * ctu;
    if (pw == p.width && ph == p.height) return p;
    Plane out(pw, ph);
    for (int y = 0; y < ph; ++y) {
        int sy = std::min(y, p.height - 1);
        for (int x = 0; x < pw; ++x) {
            int sx = std::min(x, p.width - 1);
            out.at(x, y) = p.at(sx, sy);
        }
    }
    return out;
}

inline Plane crop(const Plane& p, int w, int h) {
    if (w > p.width || h > p.height) throw InvariantError("crop larger than plane");
    if (w == p.width && h == p.height) return p;
    Plane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = p.at(x, y);
    return out;
}

}  // namespace nnintra
