#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nnintra/bitio.hpp"
#include "nnintra/common.hpp"
#include "nnintra/plane.hpp"

namespace nnintra {

namespace detail {

// Orthonormal DCT-II basis rows, cached per block size.
inline const std::vector<double>& dct_basis(int n) {
    static const auto make = [](int m) {
        const double pi = 3.14159265358979323846;
        std::vector<double> d(static_cast<size_t>(m) * m);
        for (int u = 0; u < m; ++u) {
            double a = u == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
            for (int x = 0; x < m; ++x) d[u * m + x] = a * std::cos(pi * (2 * x + 1) * u / (2.0 * m));
        }
        return d;
    };
    static const std::vector<double> b4 = make(4), b8 = make(8), b16 = make(16), b32 = make(32);
    switch (n) {
        case 4: return b4;
        case 8: return b8;
        case 16: return b16;
        default: return b32;
    }
}

// Up-right diagonal scan positions, cached per block size.
inline const std::vector<int>& diag_scan(int n) {
    static const auto make = [](int m) {
        std::vector<int> scan;
        scan.reserve(static_cast<size_t>(m) * m);
        for (int d = 0; d <= 2 * m - 2; ++d)
            for (int y = std::min(d, m - 1); y >= std::max(0, d - m + 1); --y) scan.push_back(y * m + (d - y));
        return scan;
    };
    static const std::vector<int> s4 = make(4), s8 = make(8), s16 = make(16), s32 = make(32);
    switch (n) {
        case 4: return s4;
        case 8: return s8;
        case 16: return s16;
        default: return s32;
    }
}

}  // namespace detail

inline double quant_step(int qp) { return std::exp2((qp - 4) / 6.0); }

// Floating orthonormal DCT with HM's intra rounding offset of 1/3. The
// encoder and decoder share the inverse path, so reconstructions agree
// bit-exactly by construction.
inline std::vector<int> transform_quant(const std::vector<int>& residual, int n, int qp) {
    if (!block_size_supported(n) || static_cast<int>(residual.size()) != n * n)
        throw InvariantError("transform: bad residual");
    const auto& d = detail::dct_basis(n);
    std::vector<double> tmp(static_cast<size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u)
        for (int x = 0; x < n; ++x) {
            double acc = 0;
            for (int y = 0; y < n; ++y) acc += d[u * n + y] * residual[y * n + x];
            tmp[u * n + x] = acc;
        }
    double qs = quant_step(qp);
    std::vector<int> q(static_cast<size_t>(n) * n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            double acc = 0;
            for (int x = 0; x < n; ++x) acc += tmp[u * n + x] * d[v * n + x];
            double mag = std::floor(std::abs(acc) / qs + 1.0 / 3.0);
            q[u * n + v] = acc < 0 ? -static_cast<int>(mag) : static_cast<int>(mag);
        }
    return q;
}

inline std::vector<int> dequant_itransform(const std::vector<int>& coeffs, int n, int qp) {
    if (!block_size_supported(n) || static_cast<int>(coeffs.size()) != n * n)
        throw InvariantError("itransform: bad coefficients");
    const auto& d = detail::dct_basis(n);
    double qs = quant_step(qp);
    std::vector<double> tmp(static_cast<size_t>(n) * n, 0.0);
    for (int y = 0; y < n; ++y)
        for (int v = 0; v < n; ++v) {
            double acc = 0;
            for (int u = 0; u < n; ++u) acc += d[u * n + y] * (coeffs[u * n + v] * qs);
            tmp[y * n + v] = acc;
        }
    std::vector<int> res(static_cast<size_t>(n) * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double acc = 0;
            for (int v = 0; v < n; ++v) acc += tmp[y * n + v] * d[v * n + x];
            res[y * n + x] = static_cast<int>(std::lround(acc));
        }
    return res;
}

// ---- coefficient entropy coding ----
// Layout: coded-block flag; if set, EG0 of the last significant position in
// diagonal scan order, significance flags for the positions before it, then
// per significant coefficient EG0(|q|-1) and a sign bit (1 = negative).

namespace detail {

inline int eg0_len(uint32_t v) {
    int k = 0;
    while ((v + 1) >> (k + 1)) ++k;
    return 2 * k + 1;
}

inline void eg0_write(BitWriter& bw, uint32_t v) {
    uint32_t n = v + 1;
    int k = 0;
    while (n >> (k + 1)) ++k;
    bw.put_bits(0, k);
    bw.put_bits(n, k + 1);
}

inline uint32_t eg0_read(BitReader& br) {
    int k = 0;
    while (br.get_bit() == 0) {
        if (++k > 32) throw FormatError("exp-golomb code too long");
    }
    uint32_t n = 1;
    for (int i = 0; i < k; ++i) n = (n << 1) | static_cast<uint32_t>(br.get_bit());
    return n - 1;
}

}  // namespace detail

inline void write_residual(BitWriter& bw, const std::vector<int>& coeffs, int n) {
    const auto& scan = detail::diag_scan(n);
    int last = -1;
    for (int i = 0; i < n * n; ++i)
        if (coeffs[scan[i]] != 0) last = i;
    bw.put_bit(last >= 0);
    if (last < 0) return;
    detail::eg0_write(bw, static_cast<uint32_t>(last));
    for (int i = 0; i < last; ++i) bw.put_bit(coeffs[scan[i]] != 0);
    for (int i = 0; i <= last; ++i) {
        int q = coeffs[scan[i]];
        if (q == 0) continue;
        detail::eg0_write(bw, static_cast<uint32_t>(std::abs(q) - 1));
        bw.put_bit(q < 0);
    }
}

inline std::vector<int> read_residual(BitReader& br, int n) {
    std::vector<int> coeffs(static_cast<size_t>(n) * n, 0);
    if (!br.get_bit()) return coeffs;
    const auto& scan = detail::diag_scan(n);
    int last = static_cast<int>(detail::eg0_read(br));
    if (last >= n * n) throw FormatError("last position out of range");
    std::vector<bool> sig(last + 1, false);
    for (int i = 0; i < last; ++i) sig[i] = br.get_bit() != 0;
    sig[last] = true;
    for (int i = 0; i <= last; ++i) {
        if (!sig[i]) continue;
        int mag = static_cast<int>(detail::eg0_read(br)) + 1;
        coeffs[scan[i]] = br.get_bit() ? -mag : mag;
    }
    return coeffs;
}

// Closed-form count of exactly the bits write_residual emits.
inline uint64_t residual_bits(const std::vector<int>& coeffs, int n) {
    const auto& scan = detail::diag_scan(n);
    int last = -1;
    for (int i = 0; i < n * n; ++i)
        if (coeffs[scan[i]] != 0) last = i;
    if (last < 0) return 1;
    uint64_t bits = 1 + detail::eg0_len(static_cast<uint32_t>(last)) + last;
    for (int i = 0; i <= last; ++i) {
        int q = coeffs[scan[i]];
        if (q != 0) bits += detail::eg0_len(static_cast<uint32_t>(std::abs(q) - 1)) + 1;
    }
    return bits;
}

}  // namespace nnintra
