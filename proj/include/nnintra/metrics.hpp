#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nnintra/coder.hpp"
#include "nnintra/dataset.hpp"

namespace nnintra {

inline double psnr(const Plane& a, const Plane& b) {
    if (a.width != b.width || a.height != b.height) throw InvariantError("psnr: dimension mismatch");
    uint64_t se = 0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        int d = static_cast<int>(a.samples[i]) - static_cast<int>(b.samples[i]);
        se += static_cast<uint64_t>(d) * d;
    }
    if (se == 0) return std::numeric_limits<double>::infinity();
    double mse = static_cast<double>(se) / static_cast<double>(a.samples.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

struct RdPoint {
    double bitrate = 0;  // bits for the frame (any consistent unit)
    double psnr = 0;     // dB
};

namespace detail {

// Cubic through four points: solve the Vandermonde system by Gaussian
// elimination with partial pivoting. Returns c0..c3.
inline std::array<double, 4> cubic_fit(const std::vector<double>& x, const std::vector<double>& y) {
    double a[4][5];
    for (int r = 0; r < 4; ++r) {
        double v = 1;
        for (int c = 0; c < 4; ++c) {
            a[r][c] = v;
            v *= x[r];
        }
        a[r][4] = y[r];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) throw InvariantError("bd_rate: degenerate fit (repeated PSNR?)");
        if (piv != col)
            for (int c = 0; c <= 4; ++c) std::swap(a[piv][c], a[col][c]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c <= 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return {a[0][4] / a[0][0], a[1][4] / a[1][1], a[2][4] / a[2][2], a[3][4] / a[3][3]};
}

inline double cubic_integral(const std::array<double, 4>& c, double lo, double hi) {
    auto antideriv = [&](double x) {
        return c[0] * x + c[1] * x * x / 2 + c[2] * x * x * x / 3 + c[3] * x * x * x * x / 4;
    };
    return antideriv(hi) - antideriv(lo);
}

}  // namespace detail

// Classic Bjontegaard delta-rate: cubic fit of log10(rate) against PSNR per
// curve, integrate the difference over the common PSNR interval, convert the
// average log offset back to a percentage. Negative means the test curve
// saves rate.
inline double bd_rate(const std::vector<RdPoint>& anchor, const std::vector<RdPoint>& test) {
    if (anchor.size() != 4 || test.size() != 4) throw InvariantError("bd_rate: expected 4 RD points per curve");
    std::vector<double> ax, ay, tx, ty;
    double a_lo = 1e300, a_hi = -1e300, t_lo = 1e300, t_hi = -1e300;
    for (int i = 0; i < 4; ++i) {
        if (anchor[i].bitrate <= 0 || test[i].bitrate <= 0) throw InvariantError("bd_rate: bitrate must be positive");
        if (!std::isfinite(anchor[i].psnr) || !std::isfinite(test[i].psnr))
            throw InvariantError("bd_rate: lossless sentinel PSNR cannot enter a rate curve");
        ax.push_back(anchor[i].psnr);
        ay.push_back(std::log10(anchor[i].bitrate));
        tx.push_back(test[i].psnr);
        ty.push_back(std::log10(test[i].bitrate));
        a_lo = std::min(a_lo, anchor[i].psnr);
        a_hi = std::max(a_hi, anchor[i].psnr);
        t_lo = std::min(t_lo, test[i].psnr);
        t_hi = std::max(t_hi, test[i].psnr);
    }
    double lo = std::max(a_lo, t_lo), hi = std::min(a_hi, t_hi);
    if (!(hi > lo)) throw InvariantError("bd_rate: no PSNR overlap between the curves");
    auto ca = detail::cubic_fit(ax, ay);
    auto ct = detail::cubic_fit(tx, ty);
    double avg = (detail::cubic_integral(ct, lo, hi) - detail::cubic_integral(ca, lo, hi)) / (hi - lo);
    return 100.0 * (std::pow(10.0, avg) - 1.0);
}

inline std::string rd_points_to_csv(const std::vector<RdPoint>& pts) {
    std::ostringstream out;
    out << "bitrate,psnr\n";
    out.precision(12);
    for (const auto& p : pts) out << p.bitrate << "," << p.psnr << "\n";
    return out.str();
}

inline std::vector<RdPoint> rd_points_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<RdPoint> pts;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("bitrate", 0) == 0) continue;
        RdPoint p;
        char comma;
        std::istringstream row(line);
        if (!(row >> p.bitrate >> comma >> p.psnr)) throw FormatError("rd csv: malformed row");
        pts.push_back(p);
    }
    return pts;
}

// ---- best-mode statistics (MPM slots and per-mode probabilities) ----

struct ModeStats {
    struct Counts {
        std::array<uint64_t, kNumModes> mode_counts{};
        std::array<uint64_t, 4> slot_counts{};
        uint64_t total = 0;
    };
    std::map<int, Counts> by_size;

    void add(const EncodeStats& stats) {
        for (const auto& b : stats.blocks) {
            Counts& c = by_size[b.n];
            c.mode_counts[b.mode] += 1;
            c.slot_counts[b.mpm_slot] += 1;
            c.total += 1;
        }
    }

    Counts overall() const {
        Counts sum;
        for (const auto& [n, c] : by_size) {
            for (int m = 0; m < kNumModes; ++m) sum.mode_counts[m] += c.mode_counts[m];
            for (int s = 0; s < 4; ++s) sum.slot_counts[s] += c.slot_counts[s];
            sum.total += c.total;
        }
        return sum;
    }
};

struct ModeProbabilityReport {
    std::array<double, 4> slot_pct{};                 // MPM0, MPM1, MPM2, non-MPM
    std::map<int, std::array<double, 4>> slot_pct_by_size;
    std::array<double, kNumModes> mode_pct{};         // P(mode = best), percent
    uint64_t total_blocks = 0;

    std::string slots_csv() const {
        std::ostringstream out;
        out << "size,mpm0,mpm1,mpm2,non_mpm\n";
        out.precision(6);
        out << "all," << slot_pct[0] << "," << slot_pct[1] << "," << slot_pct[2] << "," << slot_pct[3] << "\n";
        for (const auto& [n, p] : slot_pct_by_size)
            out << n << "," << p[0] << "," << p[1] << "," << p[2] << "," << p[3] << "\n";
        return out.str();
    }

    std::string modes_csv() const {
        std::ostringstream out;
        out << "mode,probability_pct\n";
        out.precision(6);
        for (int m = 0; m < kNumModes; ++m) out << m << "," << mode_pct[m] << "\n";
        return out.str();
    }
};

inline ModeProbabilityReport mode_probability_report(const ModeStats& stats) {
    ModeStats::Counts all = stats.overall();
    if (all.total == 0) throw InvariantError("mode statistics are empty");
    ModeProbabilityReport rep;
    rep.total_blocks = all.total;
    for (int s = 0; s < 4; ++s) rep.slot_pct[s] = 100.0 * all.slot_counts[s] / all.total;
    for (int m = 0; m < kNumModes; ++m) rep.mode_pct[m] = 100.0 * all.mode_counts[m] / all.total;
    for (const auto& [n, c] : stats.by_size) {
        if (c.total == 0) continue;
        std::array<double, 4> p{};
        for (int s = 0; s < 4; ++s) p[s] = 100.0 * c.slot_counts[s] / c.total;
        rep.slot_pct_by_size[n] = p;
    }
    return rep;
}

// ---- per-mode predictor quality (neural vs traditional on held-out blocks) ----

struct PerModePsnr {
    int mode = 0;
    uint64_t samples = 0;  // 0 marks a skipped (empty) partition
    double nm_psnr = 0;
    double tm_psnr = 0;
};

namespace detail {

// Rebuilds the traditional-mode reference line from a stored context. The
// context already carries the 128 fill for anything that was unavailable;
// the FC geometry lacks the below-left samples, which replicate the last
// left reference.
inline TmReferenceLine refline_from_sample(const TrainingSample& s) {
    int n = s.n;
    TmReferenceLine line;
    line.n = n;
    line.top.resize(2 * n + 1);
    line.left.resize(2 * n);
    if (n <= 8) {
        int w = 3 * n + 8;                 // top strip width
        size_t top_row = static_cast<size_t>(7) * w;  // y = -1
        line.top[0] = denormalize_sample(s.context[top_row + 7]);  // x = -1
        for (int x = 0; x < 2 * n; ++x) line.top[1 + x] = denormalize_sample(s.context[top_row + 8 + x]);
        size_t left_base = static_cast<size_t>(8) * w;
        for (int y = 0; y < n; ++y) line.left[y] = denormalize_sample(s.context[left_base + y * 8 + 7]);
        for (int y = n; y < 2 * n; ++y) line.left[y] = line.left[n - 1];
    } else {
        int w = 3 * n;  // above region width
        size_t top_row = (static_cast<size_t>(n) - 1) * w;
        line.top[0] = denormalize_sample(s.context[top_row + n - 1]);
        for (int x = 0; x < 2 * n; ++x) line.top[1 + x] = denormalize_sample(s.context[top_row + n + x]);
        size_t left_base = static_cast<size_t>(3) * n * n;
        for (int y = 0; y < 2 * n; ++y)
            line.left[y] = denormalize_sample(s.context[left_base + static_cast<size_t>(y) * n + (n - 1)]);
    }
    return line;
}

inline PredBlock nm_predict_sample(const Model& m, const TrainingSample& s) {
    if (const auto* fc = std::get_if<FcModel>(&m)) {
        FcContext ctx;
        ctx.n = s.n;
        ctx.values = s.context;
        return fc_forward(*fc, ctx);
    }
    CnnContext ctx;
    ctx.n = s.n;
    ctx.above.assign(s.context.begin(), s.context.begin() + static_cast<size_t>(3) * s.n * s.n);
    ctx.left.assign(s.context.begin() + static_cast<size_t>(3) * s.n * s.n, s.context.end());
    return cnn_forward(std::get<CnnModel>(m), ctx);
}

inline double pooled_psnr(uint64_t se, uint64_t count) {
    if (count == 0) return 0;
    if (se == 0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 * static_cast<double>(count) / static_cast<double>(se));
}

}  // namespace detail

// Mean prediction PSNR per labeled mode at size n: the fine-tuned neural
// model against the traditional mode run on the same contexts.
inline std::vector<PerModePsnr> per_mode_psnr(const ModelRegistry& reg, const Dataset& eval, int n) {
    std::array<uint64_t, kNumModes> nm_se{}, tm_se{}, count{};
    for (const auto& s : eval) {
        if (s.n != n) continue;
        const Model* m = reg.find(n, s.mode);
        if (!m) throw ModelError("registry is missing an entry for the evaluated mode");
        PredBlock target(s.target.size());
        for (size_t i = 0; i < s.target.size(); ++i) target[i] = denormalize_sample(s.target[i]);
        PredBlock nm = detail::nm_predict_sample(*m, s);
        PredBlock tm = predict_tm(s.mode, detail::refline_from_sample(s), n);
        for (size_t i = 0; i < target.size(); ++i) {
            int dn = static_cast<int>(nm[i]) - static_cast<int>(target[i]);
            int dt = static_cast<int>(tm[i]) - static_cast<int>(target[i]);
            nm_se[s.mode] += static_cast<uint64_t>(dn) * dn;
            tm_se[s.mode] += static_cast<uint64_t>(dt) * dt;
        }
        count[s.mode] += target.size();
    }
    std::vector<PerModePsnr> rows;
    for (int mode = 0; mode < kNumModes; ++mode) {
        PerModePsnr r;
        r.mode = mode;
        r.samples = count[mode];
        if (count[mode] > 0) {
            r.nm_psnr = detail::pooled_psnr(nm_se[mode], count[mode]);
            r.tm_psnr = detail::pooled_psnr(tm_se[mode], count[mode]);
        }
        rows.push_back(r);
    }
    return rows;
}

inline std::string per_mode_psnr_csv(const std::vector<PerModePsnr>& rows) {
    std::ostringstream out;
    out << "mode,samples,nm_psnr,tm_psnr\n";
    out.precision(6);
    for (const auto& r : rows) {
        out << r.mode << "," << r.samples << ",";
        if (r.samples == 0) {
            out << "skipped,skipped\n";
        } else {
            out << r.nm_psnr << "," << r.tm_psnr << "\n";
        }
    }
    return out.str();
}

}  // namespace nnintra
