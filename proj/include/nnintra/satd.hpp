#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "nnintra/common.hpp"

namespace nnintra {

namespace detail {

// Walsh-Hadamard on an m x m tile (m = 4 or 8), HM normalization:
// sum|coef| >> 1 for 4x4, >> 2 for 8x8.
inline uint64_t satd_tile(const int* res, int stride, int m) {
    int buf[64];
    for (int y = 0; y < m; ++y)
        for (int x = 0; x < m; ++x) buf[y * m + x] = res[y * stride + x];
    for (int y = 0; y < m; ++y) {
        int* row = buf + y * m;
        for (int len = 1; len < m; len <<= 1) {
            for (int i = 0; i < m; i += len << 1) {
                for (int j = i; j < i + len; ++j) {
                    int a = row[j], b = row[j + len];
                    row[j] = a + b;
                    row[j + len] = a - b;
                }
            }
        }
    }
    for (int x = 0; x < m; ++x) {
        for (int len = 1; len < m; len <<= 1) {
            for (int i = 0; i < m; i += len << 1) {
                for (int j = i; j < i + len; ++j) {
                    int a = buf[j * m + x], b = buf[(j + len) * m + x];
                    buf[j * m + x] = a + b;
                    buf[(j + len) * m + x] = a - b;
                }
            }
        }
    }
    uint64_t sum = 0;
    for (int i = 0; i < m * m; ++i) sum += static_cast<uint64_t>(std::abs(buf[i]));
    return sum >> (m == 4 ? 1 : 2);
}

}  // namespace detail

// SATD of an n x n residual; blocks larger than 8 are summed over 8x8
// Hadamard tiles as HM does.
inline uint64_t satd(const std::vector<int>& residual, int n) {
    if (!block_size_supported(n)) throw InvariantError("satd: unsupported block size");
    if (static_cast<int>(residual.size()) != n * n) throw InvariantError("satd: bad residual size");
    if (n <= 8) return detail::satd_tile(residual.data(), n, n);
    uint64_t sum = 0;
    for (int ty = 0; ty < n; ty += 8)
        for (int tx = 0; tx < n; tx += 8) sum += detail::satd_tile(residual.data() + ty * n + tx, n, 8);
    return sum;
}

}  // namespace nnintra
