#pragma once

#include <array>
#include <cmath>

#include "nnintra/bitio.hpp"
#include "nnintra/common.hpp"

namespace nnintra {

constexpr int kNumModes = 35;
constexpr int kModePlanar = 0;
constexpr int kModeDc = 1;
constexpr int kModeHorizontal = 10;
constexpr int kModeVertical = 26;

struct MpmSet {
    std::array<int, 3> modes{};

    int slot_of(int mode) const {
        for (int i = 0; i < 3; ++i)
            if (modes[i] == mode) return i;
        return 3;  // non-MPM
    }
    bool contains(int mode) const { return slot_of(mode) < 3; }
};

// Unavailable neighbors substitute DC before calling this.
inline MpmSet derive_mpms(int left_mode, int above_mode) {
    MpmSet s;
    if (left_mode != above_mode) {
        s.modes[0] = left_mode;
        s.modes[1] = above_mode;
        for (int cand : {kModePlanar, kModeDc, kModeVertical}) {
            if (cand != left_mode && cand != above_mode) {
                s.modes[2] = cand;
                break;
            }
        }
    } else if (left_mode < 2) {
        s.modes = {kModePlanar, kModeDc, kModeVertical};
    } else {
        s.modes[0] = left_mode;
        s.modes[1] = 2 + ((left_mode + 29) % 32);
        s.modes[2] = 2 + ((left_mode - 2 + 1) % 32);
    }
    return s;
}

// Table-I codeword: MPM0 "10", MPM1 "110", MPM2 "111",
// non-MPM "0" + 5-bit rank among the 32 remaining modes in ascending order.
struct ModeCodeword {
    uint32_t bits = 0;
    int len = 0;
};

inline ModeCodeword mode_codeword(int mode, const MpmSet& mpms) {
    switch (mpms.slot_of(mode)) {
        case 0: return {0b10u, 2};
        case 1: return {0b110u, 3};
        case 2: return {0b111u, 3};
        default: {
            uint32_t rank = 0;
            for (int m = 0; m < mode; ++m)
                if (!mpms.contains(m)) ++rank;
            return {rank, 6};  // leading 0 is implicit: rank < 32
        }
    }
}

inline int mode_bins(int mode, const MpmSet& mpms) { return mode_codeword(mode, mpms).len; }

inline void write_mode(BitWriter& bw, int mode, const MpmSet& mpms) {
    auto cw = mode_codeword(mode, mpms);
    bw.put_bits(cw.bits, cw.len);
}

inline int read_mode(BitReader& br, const MpmSet& mpms) {
    if (br.get_bit()) {
        if (!br.get_bit()) return mpms.modes[0];
        return br.get_bit() ? mpms.modes[2] : mpms.modes[1];
    }
    int rank = static_cast<int>(br.get_bits(5));
    for (int m = 0; m < kNumModes; ++m) {
        if (mpms.contains(m)) continue;
        if (rank-- == 0) return m;
    }
    throw FormatError("mode rank out of range");
}

// HM-style Lagrangian for the SSE-domain RD stage; the SATD stage uses its
// square root.
inline double rd_lambda(int qp) {
    if (qp < 0 || qp > 51) throw InvariantError("qp out of [0,51]");
    return 0.57 * std::exp2((qp - 12) / 3.0);
}

}  // namespace nnintra
