#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nnintra/context.hpp"
#include "nnintra/satd.hpp"
#include "nnintra/signaling.hpp"

namespace nnintra {

namespace detail {

inline int log2_size(int n) {
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

inline PredBlock predict_planar(const TmReferenceLine& r) {
    int n = r.n;
    int shift = log2_size(n) + 1;
    int tr = r.top[n + 1];   // p(n, -1)
    int bl = r.left[n];      // p(-1, n)
    PredBlock out(static_cast<size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            int v = (n - 1 - x) * r.left[y] + (x + 1) * tr + (n - 1 - y) * r.top[x + 1] + (y + 1) * bl + n;
            out[y * n + x] = static_cast<uint8_t>(v >> shift);
        }
    }
    return out;
}

inline PredBlock predict_dc(const TmReferenceLine& r) {
    int n = r.n;
    int sum = 0;
    for (int i = 0; i < n; ++i) sum += r.top[1 + i] + r.left[i];
    uint8_t dc = static_cast<uint8_t>((sum + n) >> (log2_size(n) + 1));
    return PredBlock(static_cast<size_t>(n) * n, dc);
}

// Projected reference with 1/32-pel interpolation; the horizontal family is
// the transpose of the vertical one over swapped references.
inline PredBlock predict_angular(int mode, const TmReferenceLine& r) {
    static constexpr int kAngTable[9] = {0, 2, 5, 9, 13, 17, 21, 26, 32};
    static constexpr int kInvAngTable[9] = {0, 4096, 1638, 910, 630, 482, 390, 315, 256};

    int n = r.n;
    bool hor = mode < 18;
    int param = hor ? -(mode - kModeHorizontal) : mode - kModeVertical;
    int abs_idx = std::abs(param);
    int angle = (param < 0 ? -1 : 1) * kAngTable[abs_idx];
    int inv_angle = kInvAngTable[abs_idx];

    // main[i]/side[i]: i = 0 is the corner, i >= 1 runs along the axis.
    auto main_ref = [&](int i) -> int { return hor ? (i == 0 ? r.top[0] : r.left[i - 1]) : r.top[i]; };
    auto side_ref = [&](int i) -> int { return hor ? r.top[i] : (i == 0 ? r.top[0] : r.left[i - 1]); };

    // ref covers indices [-n, 2n] with a base offset of n.
    std::vector<int> ref(static_cast<size_t>(3) * n + 1, 0);
    int* rm = ref.data() + n;
    if (angle < 0) {
        for (int k = 0; k <= n; ++k) rm[k] = main_ref(k);
        int inv_sum = 128;
        for (int k = -1; k > (n * angle) >> 5; --k) {
            inv_sum += inv_angle;
            rm[k] = side_ref(inv_sum >> 8);
        }
    } else {
        for (int k = 0; k <= 2 * n; ++k) rm[k] = main_ref(k);
    }

    PredBlock out(static_cast<size_t>(n) * n);
    int delta_pos = 0;
    for (int k = 0; k < n; ++k) {
        delta_pos += angle;
        int delta_int = delta_pos >> 5;
        int frac = delta_pos & 31;
        for (int l = 0; l < n; ++l) {
            int v;
            if (frac) {
                v = ((32 - frac) * rm[l + delta_int + 1] + frac * rm[l + delta_int + 2] + 16) >> 5;
            } else {
                v = rm[l + delta_int + 1];
            }
            v = clip_pixel(v);
            if (hor) {
                out[l * n + k] = static_cast<uint8_t>(v);
            } else {
                out[k * n + l] = static_cast<uint8_t>(v);
            }
        }
    }
    return out;
}

}  // namespace detail

inline PredBlock predict_tm(int mode, const TmReferenceLine& refs, int n) {
    if (mode < 0 || mode >= kNumModes) throw InvariantError("invalid intra mode index");
    if (refs.n != n || static_cast<int>(refs.top.size()) != 2 * n + 1 ||
        static_cast<int>(refs.left.size()) != 2 * n)
        throw InvariantError("reference line does not match block size");
    if (mode == kModePlanar) return detail::predict_planar(refs);
    if (mode == kModeDc) return detail::predict_dc(refs);
    return detail::predict_angular(mode, refs);
}

inline std::vector<int> block_residual(const std::vector<uint8_t>& orig, const PredBlock& pred) {
    std::vector<int> res(orig.size());
    for (size_t i = 0; i < orig.size(); ++i) res[i] = static_cast<int>(orig[i]) - static_cast<int>(pred[i]);
    return res;
}

// SATD + signaling-cost argmin over the 35 traditional modes; ties go to the
// smaller index. This is the labeling rule for training-set construction.
inline int tm_best_mode(const std::vector<uint8_t>& orig, const TmReferenceLine& refs, int qp,
                        const MpmSet& mpms = derive_mpms(kModeDc, kModeDc)) {
    double lambda_pred = std::sqrt(rd_lambda(qp));
    int best_mode = 0;
    double best_cost = 0;
    for (int mode = 0; mode < kNumModes; ++mode) {
        PredBlock pred = predict_tm(mode, refs, refs.n);
        double cost = static_cast<double>(satd(block_residual(orig, pred), refs.n)) +
                      lambda_pred * mode_bins(mode, mpms);
        if (mode == 0 || cost < best_cost) {
            best_cost = cost;
            best_mode = mode;
        }
    }
    return best_mode;
}

}  // namespace nnintra
