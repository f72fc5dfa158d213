#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nnintra/context.hpp"
#include "nnintra/intra_tm.hpp"
#include "nnintra/model.hpp"
#include "nnintra/transform.hpp"

namespace nnintra {

enum class PredictorKind : uint8_t { Tm = 0, Nm = 1 };

struct Predictor {
    PredictorKind kind = PredictorKind::Tm;
    const ModelRegistry* registry = nullptr;

    static Predictor traditional() { return {}; }
    static Predictor neural(const ModelRegistry& reg) {
        if (!reg.complete()) throw ModelError("neural predictor requires a complete registry (35 modes x 4 sizes)");
        return {PredictorKind::Nm, &reg};
    }
};

inline PredBlock predict_block(const Predictor& p, const Plane& recon, const BlockRect& b, int mode) {
    if (p.kind == PredictorKind::Tm) return predict_tm(mode, extract_tm_refline(recon, b), b.n);
    const Model* m = p.registry->find(b.n, mode);
    if (!m) throw ModelError("registry is missing an entry");
    return nm_predict(*m, recon, b);
}

struct BlockStat {
    int x = 0, y = 0, n = 0, mode = 0, mpm_slot = 0;
    uint64_t mode_bins = 0, res_bits = 0, sse = 0;
};

struct SplitDecision {
    int x = 0, y = 0, n = 0;
    double j_split = 0, j_nosplit = 0;
    bool chose_split = false;
};

struct EncodeStats {
    int width = 0, height = 0, qp = 0;
    PredictorKind predictor = PredictorKind::Tm;
    uint64_t header_bits = 0, split_bins = 0, total_bits = 0;
    std::vector<BlockStat> blocks;
};

struct ModeDecision {
    std::vector<int> candidates;
    std::vector<uint64_t> satd_costs;
    int mode = 0;
    ModeCodeword codeword;
    double rd_cost = 0;
    std::vector<int> coeffs;
    PredBlock recon;
    uint64_t sse = 0, res_bits = 0;
};

inline std::vector<uint8_t> block_from_plane(const Plane& p, const BlockRect& b) {
    std::vector<uint8_t> out(static_cast<size_t>(b.n) * b.n);
    for (int y = 0; y < b.n; ++y)
        for (int x = 0; x < b.n; ++x) out[y * b.n + x] = p.at(b.x + x, b.y + y);
    return out;
}

namespace detail {

inline uint64_t block_sse(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    uint64_t sse = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        sse += static_cast<uint64_t>(d) * d;
    }
    return sse;
}

inline PredBlock reconstruct(const PredBlock& pred, const std::vector<int>& res) {
    PredBlock rec(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) rec[i] = static_cast<uint8_t>(clip_pixel(pred[i] + res[i]));
    return rec;
}

}  // namespace detail

// Two-stage mode decision: a SATD sweep over all 35 modes picks the rough
// candidates (8 for 4x4/8x8, 3 otherwise), the MPMs are appended, and full
// residual coding decides by SSE + lambda * bits. Ties go to the smaller
// mode index.
inline ModeDecision choose_mode(const std::vector<uint8_t>& orig, const Plane& recon, const BlockRect& b, int qp,
                                const Predictor& pred, const MpmSet& mpms) {
    double lambda = rd_lambda(qp);
    double lambda_pred = std::sqrt(lambda);

    // Traditional predictions are microseconds each; threads only pay off
    // for the network forward passes.
    int workers = pred.kind == PredictorKind::Nm ? -1 : 1;

    std::vector<PredBlock> preds(kNumModes);
    std::vector<uint64_t> satds(kNumModes);
    std::vector<double> costs(kNumModes);
    parallel_for(
        kNumModes,
        [&](size_t m) {
            preds[m] = predict_block(pred, recon, b, static_cast<int>(m));
            satds[m] = satd(block_residual(orig, preds[m]), b.n);
            costs[m] = static_cast<double>(satds[m]) + lambda_pred * mode_bins(static_cast<int>(m), mpms);
        },
        workers);

    std::vector<int> order(kNumModes);
    for (int m = 0; m < kNumModes; ++m) order[m] = m;
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return costs[a] < costs[c]; });

    ModeDecision d;
    int keep = b.n <= 8 ? 8 : 3;
    d.candidates.assign(order.begin(), order.begin() + keep);
    for (int m : mpms.modes)
        if (std::find(d.candidates.begin(), d.candidates.end(), m) == d.candidates.end()) d.candidates.push_back(m);
    d.satd_costs.reserve(d.candidates.size());
    for (int m : d.candidates) d.satd_costs.push_back(satds[m]);

    struct Trial {
        double j = 0;
        uint64_t sse = 0, res_bits = 0;
        std::vector<int> coeffs;
        PredBlock rec;
    };
    std::vector<Trial> trials(d.candidates.size());
    parallel_for(
        d.candidates.size(),
        [&](size_t i) {
            int mode = d.candidates[i];
            Trial& t = trials[i];
            t.coeffs = transform_quant(block_residual(orig, preds[mode]), b.n, qp);
            t.rec = detail::reconstruct(preds[mode], dequant_itransform(t.coeffs, b.n, qp));
            t.sse = detail::block_sse(orig, t.rec);
            t.res_bits = residual_bits(t.coeffs, b.n);
            t.j = static_cast<double>(t.sse) + lambda * (mode_bins(mode, mpms) + t.res_bits);
        },
        workers);

    size_t best = 0;
    for (size_t i = 1; i < trials.size(); ++i) {
        if (trials[i].j < trials[best].j ||
            (trials[i].j == trials[best].j && d.candidates[i] < d.candidates[best]))
            best = i;
    }
    d.mode = d.candidates[best];
    d.codeword = mode_codeword(d.mode, mpms);
    d.rd_cost = trials[best].j;
    d.coeffs = std::move(trials[best].coeffs);
    d.recon = std::move(trials[best].rec);
    d.sse = trials[best].sse;
    d.res_bits = trials[best].res_bits;
    return d;
}

namespace detail {

struct CodingState {
    const Plane* orig = nullptr;  // padded source
    Plane recon;
    int units_w = 0, units_h = 0;
    std::vector<uint8_t> mode_map;  // best mode per 4x4 unit
    int qp = 0;
    const Predictor* pred = nullptr;
    double lambda = 0;

    void init(const Plane& padded, int qp_, const Predictor& p) {
        orig = &padded;
        recon = Plane(padded.width, padded.height, 0);
        units_w = padded.width / kMinBlockSize;
        units_h = padded.height / kMinBlockSize;
        mode_map.assign(static_cast<size_t>(units_w) * units_h, kModeDc);
        qp = qp_;
        pred = &p;
        lambda = rd_lambda(qp_);
    }

    int unit_mode(int ux, int uy) const {
        if (ux < 0 || uy < 0 || ux >= units_w || uy >= units_h) return kModeDc;
        return mode_map[static_cast<size_t>(uy) * units_w + ux];
    }

    MpmSet mpms_for(const BlockRect& b) const {
        int ux = b.x / kMinBlockSize, uy = b.y / kMinBlockSize;
        return derive_mpms(unit_mode(ux - 1, uy), unit_mode(ux, uy - 1));
    }

    void set_block_mode(const BlockRect& b, int mode) {
        for (int uy = b.y / kMinBlockSize; uy < (b.y + b.n) / kMinBlockSize; ++uy)
            for (int ux = b.x / kMinBlockSize; ux < (b.x + b.n) / kMinBlockSize; ++ux)
                mode_map[static_cast<size_t>(uy) * units_w + ux] = static_cast<uint8_t>(mode);
    }

    void apply_recon(const BlockRect& b, const PredBlock& rec) {
        for (int y = 0; y < b.n; ++y)
            for (int x = 0; x < b.n; ++x) recon.at(b.x + x, b.y + y) = rec[y * b.n + x];
    }
};

struct RegionSnapshot {
    BlockRect rect;
    std::vector<uint8_t> recon;
    std::vector<uint8_t> modes;
};

inline RegionSnapshot snapshot(const CodingState& s, const BlockRect& b) {
    RegionSnapshot snap;
    snap.rect = b;
    snap.recon = block_from_plane(s.recon, b);
    for (int uy = b.y / kMinBlockSize; uy < (b.y + b.n) / kMinBlockSize; ++uy)
        for (int ux = b.x / kMinBlockSize; ux < (b.x + b.n) / kMinBlockSize; ++ux)
            snap.modes.push_back(s.mode_map[static_cast<size_t>(uy) * s.units_w + ux]);
    return snap;
}

inline void restore(CodingState& s, const RegionSnapshot& snap) {
    const BlockRect& b = snap.rect;
    for (int y = 0; y < b.n; ++y)
        for (int x = 0; x < b.n; ++x) s.recon.at(b.x + x, b.y + y) = snap.recon[y * b.n + x];
    size_t i = 0;
    for (int uy = b.y / kMinBlockSize; uy < (b.y + b.n) / kMinBlockSize; ++uy)
        for (int ux = b.x / kMinBlockSize; ux < (b.x + b.n) / kMinBlockSize; ++ux)
            s.mode_map[static_cast<size_t>(uy) * s.units_w + ux] = snap.modes[i++];
}

struct NodeResult {
    double j = 0;
    BitWriter bits;
    std::vector<BlockStat> stats;
    uint64_t split_bins = 0;
    std::vector<SplitDecision> log;
};

inline NodeResult code_leaf(CodingState& s, const BlockRect& b) {
    MpmSet mpms = s.mpms_for(b);
    auto orig_block = block_from_plane(*s.orig, b);
    ModeDecision d = choose_mode(orig_block, s.recon, b, s.qp, *s.pred, mpms);

    NodeResult r;
    write_mode(r.bits, d.mode, mpms);
    write_residual(r.bits, d.coeffs, b.n);
    s.apply_recon(b, d.recon);
    s.set_block_mode(b, d.mode);

    BlockStat stat;
    stat.x = b.x;
    stat.y = b.y;
    stat.n = b.n;
    stat.mode = d.mode;
    stat.mpm_slot = mpms.slot_of(d.mode);
    stat.mode_bins = d.codeword.len;
    stat.res_bits = d.res_bits;
    stat.sse = d.sse;
    r.stats.push_back(stat);
    r.j = d.rd_cost;
    return r;
}

inline NodeResult code_node(CodingState& s, const BlockRect& b) {
    if (b.n == kMinBlockSize) return code_leaf(s, b);

    RegionSnapshot before = snapshot(s, b);
    NodeResult leaf = code_leaf(s, b);
    RegionSnapshot after_leaf = snapshot(s, b);
    restore(s, before);

    NodeResult split;
    int half = b.n / 2;
    for (int q = 0; q < 4; ++q) {
        BlockRect child{b.x + (q & 1) * half, b.y + (q >> 1) * half, half};
        NodeResult c = code_node(s, child);
        split.j += c.j;
        split.bits.append(c.bits);
        split.stats.insert(split.stats.end(), c.stats.begin(), c.stats.end());
        split.split_bins += c.split_bins;
        split.log.insert(split.log.end(), c.log.begin(), c.log.end());
    }

    double j_nosplit = s.lambda * 1 + leaf.j;  // split flag costs one bin either way
    double j_split = s.lambda * 1 + split.j;
    bool choose_split = j_split < j_nosplit;

    NodeResult r;
    r.log.push_back({b.x, b.y, b.n, j_split, j_nosplit, choose_split});
    if (choose_split) {
        r.j = j_split;
        r.bits.put_bit(1);
        r.bits.append(split.bits);
        r.stats = std::move(split.stats);
        r.split_bins = 1 + split.split_bins;
        r.log.insert(r.log.end(), split.log.begin(), split.log.end());
        // state already holds the split reconstruction
    } else {
        restore(s, after_leaf);
        r.j = j_nosplit;
        r.bits.put_bit(0);
        r.bits.append(leaf.bits);
        r.stats = std::move(leaf.stats);
        r.split_bins = 1;
    }
    return r;
}

constexpr uint8_t kBitstreamVersion = 1;

}  // namespace detail

struct EncodeResult {
    std::vector<uint8_t> bitstream;
    Plane recon;         // cropped to the source dimensions
    Plane recon_padded;  // full coding grid
    EncodeStats stats;
    std::vector<SplitDecision> split_log;
};

inline EncodeResult encode_frame(const Plane& src, int qp, const Predictor& pred) {
    if (src.width < 1 || src.height < 1) throw InvariantError("empty plane");
    if (src.width > 0xFFFF || src.height > 0xFFFF) throw InvariantError("plane too large for the header");
    uint64_t digest = pred.kind == PredictorKind::Nm ? pred.registry->digest() : 0;

    Plane padded = pad_to_grid(src, kCtuSize);
    detail::CodingState state;
    state.init(padded, qp, pred);

    BitWriter out;
    for (char c : {'N', 'N', 'I', 'C'}) out.put_byte(static_cast<uint8_t>(c));
    out.put_byte(detail::kBitstreamVersion);
    out.put_bits(static_cast<uint64_t>(src.width), 16);
    out.put_bits(static_cast<uint64_t>(src.height), 16);
    out.put_byte(static_cast<uint8_t>(qp));
    out.put_byte(static_cast<uint8_t>(pred.kind));
    out.put_bits(digest, 64);

    EncodeResult res;
    res.stats.width = src.width;
    res.stats.height = src.height;
    res.stats.qp = qp;
    res.stats.predictor = pred.kind;
    res.stats.header_bits = out.bit_count();

    for (int cy = 0; cy < padded.height; cy += kCtuSize) {
        for (int cx = 0; cx < padded.width; cx += kCtuSize) {
            detail::NodeResult node = detail::code_node(state, {cx, cy, kCtuSize});
            out.append(node.bits);
            res.stats.split_bins += node.split_bins;
            res.stats.blocks.insert(res.stats.blocks.end(), node.stats.begin(), node.stats.end());
            res.split_log.insert(res.split_log.end(), node.log.begin(), node.log.end());
        }
    }

    res.stats.total_bits = out.bit_count();
    res.bitstream = out.bytes();
    res.recon_padded = std::move(state.recon);
    res.recon = crop(res.recon_padded, src.width, src.height);
    return res;
}

struct DecodeResult {
    Plane plane;         // cropped to the coded dimensions
    Plane recon_padded;  // full coding grid
    int qp = 0;
    PredictorKind predictor = PredictorKind::Tm;
};

// Called for every decoded leaf after its reconstruction lands in `recon`.
using BlockObserver = std::function<void(const BlockRect&, int mode, const Plane& recon)>;

namespace detail {

inline void decode_node(CodingState& s, const BlockRect& b, BitReader& br, const BlockObserver& obs) {
    if (b.n > kMinBlockSize && br.get_bit()) {
        int half = b.n / 2;
        for (int q = 0; q < 4; ++q) decode_node(s, {b.x + (q & 1) * half, b.y + (q >> 1) * half, half}, br, obs);
        return;
    }
    MpmSet mpms = s.mpms_for(b);
    int mode = read_mode(br, mpms);
    PredBlock pred = predict_block(*s.pred, s.recon, b, mode);
    std::vector<int> coeffs = read_residual(br, b.n);
    s.apply_recon(b, reconstruct(pred, dequant_itransform(coeffs, b.n, s.qp)));
    s.set_block_mode(b, mode);
    if (obs) obs(b, mode, s.recon);
}

}  // namespace detail

inline DecodeResult decode_frame(const std::vector<uint8_t>& bytes, const ModelRegistry* registry = nullptr,
                                 const BlockObserver& obs = nullptr) {
    BitReader br(bytes);
    for (char c : {'N', 'N', 'I', 'C'})
        if (br.get_bits(8) != static_cast<uint8_t>(c)) throw FormatError("bad bitstream magic");
    if (br.get_bits(8) != detail::kBitstreamVersion) throw FormatError("unsupported bitstream version");
    int w = static_cast<int>(br.get_bits(16));
    int h = static_cast<int>(br.get_bits(16));
    int qp = static_cast<int>(br.get_bits(8));
    auto kind = static_cast<PredictorKind>(br.get_bits(8));
    uint64_t digest = br.get_bits(64);
    if (w < 1 || h < 1 || qp > 51) throw FormatError("bad bitstream header");
    if (kind != PredictorKind::Tm && kind != PredictorKind::Nm) throw FormatError("bad predictor tag");

    uint64_t have = registry ? registry->digest() : 0;
    if (have != digest) throw ModelError("registry digest mismatch");
    Predictor pred = kind == PredictorKind::Nm ? Predictor::neural(*registry) : Predictor::traditional();

    Plane padded_dims(((w + kCtuSize - 1) / kCtuSize) * kCtuSize, ((h + kCtuSize - 1) / kCtuSize) * kCtuSize, 0);
    detail::CodingState state;
    state.init(padded_dims, qp, pred);

    for (int cy = 0; cy < padded_dims.height; cy += kCtuSize)
        for (int cx = 0; cx < padded_dims.width; cx += kCtuSize)
            detail::decode_node(state, {cx, cy, kCtuSize}, br, obs);

    if (br.bits_available() >= 8) throw FormatError("trailing data after frame payload");
    while (br.bits_available() > 0)
        if (br.get_bit() != 0) throw FormatError("non-zero padding bits");

    DecodeResult res;
    res.recon_padded = std::move(state.recon);
    res.plane = crop(res.recon_padded, w, h);
    res.qp = qp;
    res.predictor = kind;
    return res;
}

// ---- stats sidecar ----

inline std::string stats_to_csv(const EncodeStats& s) {
    std::ostringstream out;
    out << "# width=" << s.width << " height=" << s.height << " qp=" << s.qp
        << " predictor=" << (s.predictor == PredictorKind::Tm ? "tm" : "nm") << " header_bits=" << s.header_bits
        << " split_bins=" << s.split_bins << " total_bits=" << s.total_bits << "\n";
    out << "x,y,n,mode,mpm_slot,mode_bins,res_bits,sse\n";
    for (const auto& b : s.blocks)
        out << b.x << "," << b.y << "," << b.n << "," << b.mode << "," << b.mpm_slot << "," << b.mode_bins << ","
            << b.res_bits << "," << b.sse << "\n";
    return out.str();
}

inline EncodeStats stats_from_csv(const std::string& text) {
    EncodeStats s;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw FormatError("stats csv: missing header comment");
    {
        std::istringstream hdr(line.substr(2));
        std::string tok;
        while (hdr >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "width") s.width = std::stoi(val);
            else if (key == "height") s.height = std::stoi(val);
            else if (key == "qp") s.qp = std::stoi(val);
            else if (key == "predictor") s.predictor = val == "nm" ? PredictorKind::Nm : PredictorKind::Tm;
            else if (key == "header_bits") s.header_bits = std::stoull(val);
            else if (key == "split_bins") s.split_bins = std::stoull(val);
            else if (key == "total_bits") s.total_bits = std::stoull(val);
        }
    }
    if (!std::getline(in, line)) throw FormatError("stats csv: missing column header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BlockStat b;
        char comma;
        std::istringstream row(line);
        if (!(row >> b.x >> comma >> b.y >> comma >> b.n >> comma >> b.mode >> comma >> b.mpm_slot >> comma >>
              b.mode_bins >> comma >> b.res_bits >> comma >> b.sse))
            throw FormatError("stats csv: malformed row");
        s.blocks.push_back(b);
    }
    return s;
}

}  // namespace nnintra
