#pragma once

#include <cstdint>
#include <vector>

#include "nnintra/coder.hpp"

namespace nnintra {

// One labeled block: the context seen by the predictor and the original
// samples, both normalized. The label is the traditional mode the encoder
// committed for this block.
struct TrainingSample {
    uint8_t n = 0;
    uint8_t mode = 0;
    uint8_t qp = 0;
    std::vector<float> context;  // FC: (4n+8)*8; CNN: 3n^2 above then 2n^2 left
    std::vector<float> target;   // n^2

    bool operator==(const TrainingSample&) const = default;
};

using Dataset = std::vector<TrainingSample>;

inline size_t context_size(int n) {
    return n <= 8 ? static_cast<size_t>(fc_input_size(n)) : static_cast<size_t>(5) * n * n;
}

// Runs the traditional-mode encoder over the corpus at every qp and replays
// each bitstream through the decoder, capturing per-leaf contexts against
// the exact reconstruction state the predictor saw. (image, qp) jobs run in
// parallel; samples are concatenated in job order, so the result does not
// depend on the worker count.
inline Dataset extract_dataset(const std::vector<Plane>& corpus, const std::vector<int>& qps) {
    if (corpus.empty()) throw InvariantError("extract_dataset: empty corpus");
    std::vector<Dataset> per_job(corpus.size() * qps.size());
    parallel_for(per_job.size(), [&](size_t job) {
        const Plane& src = corpus[job / qps.size()];
        int qp = qps[job % qps.size()];
        Plane padded = pad_to_grid(src, kCtuSize);
        Dataset& out = per_job[job];
        EncodeResult enc = encode_frame(src, qp, Predictor::traditional());
        decode_frame(enc.bitstream, nullptr, [&](const BlockRect& b, int mode, const Plane& recon) {
            TrainingSample s;
            s.n = static_cast<uint8_t>(b.n);
            s.mode = static_cast<uint8_t>(mode);
            s.qp = static_cast<uint8_t>(qp);
            if (b.n <= 8) {
                s.context = extract_fc_context(recon, b).values;
            } else {
                CnnContext ctx = extract_cnn_context(recon, b);
                s.context = std::move(ctx.above);
                s.context.insert(s.context.end(), ctx.left.begin(), ctx.left.end());
            }
            s.target.reserve(static_cast<size_t>(b.n) * b.n);
            for (int y = 0; y < b.n; ++y)
                for (int x = 0; x < b.n; ++x) s.target.push_back(normalize_sample(padded.at(b.x + x, b.y + y)));
            out.push_back(std::move(s));
        });
    });
    Dataset out;
    for (auto& job : per_job)
        for (auto& s : job) out.push_back(std::move(s));
    return out;
}

// ---- "NMDS" dataset container ----

inline std::vector<uint8_t> serialize_dataset(const Dataset& ds) {
    std::vector<uint8_t> bytes = {'N', 'M', 'D', 'S'};
    for (const auto& s : ds) {
        bytes.push_back(s.n);
        bytes.push_back(s.mode);
        bytes.push_back(s.qp);
        size_t off = bytes.size();
        bytes.resize(off + (s.context.size() + s.target.size()) * 4);
        std::memcpy(bytes.data() + off, s.context.data(), s.context.size() * 4);
        std::memcpy(bytes.data() + off + s.context.size() * 4, s.target.data(), s.target.size() * 4);
    }
    return bytes;
}

inline Dataset deserialize_dataset(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 4 || bytes[0] != 'N' || bytes[1] != 'M' || bytes[2] != 'D' || bytes[3] != 'S')
        throw FormatError("bad dataset magic");
    Dataset ds;
    size_t pos = 4;
    while (pos < bytes.size()) {
        if (pos + 3 > bytes.size()) throw FormatError("dataset truncated");
        TrainingSample s;
        s.n = bytes[pos];
        s.mode = bytes[pos + 1];
        s.qp = bytes[pos + 2];
        pos += 3;
        if (!block_size_supported(s.n) || s.mode >= kNumModes || s.qp > 51)
            throw FormatError("dataset record header out of range");
        size_t ctx_len = context_size(s.n);
        size_t tgt_len = static_cast<size_t>(s.n) * s.n;
        if (pos + (ctx_len + tgt_len) * 4 > bytes.size()) throw FormatError("dataset truncated");
        s.context.resize(ctx_len);
        s.target.resize(tgt_len);
        std::memcpy(s.context.data(), bytes.data() + pos, ctx_len * 4);
        std::memcpy(s.target.data(), bytes.data() + pos + ctx_len * 4, tgt_len * 4);
        pos += (ctx_len + tgt_len) * 4;
        ds.push_back(std::move(s));
    }
    return ds;
}

inline void save_dataset(const Dataset& ds, const std::string& path) { write_file_bytes(path, serialize_dataset(ds)); }
inline Dataset load_dataset(const std::string& path) { return deserialize_dataset(read_file_bytes(path)); }

// Sample inputs in network form.
inline std::vector<double> sample_fc_input(const TrainingSample& s) {
    return std::vector<double>(s.context.begin(), s.context.end());
}

inline nn::Tensor sample_cnn_above(const TrainingSample& s) {
    nn::Tensor t(1, s.n, 3 * s.n);
    for (size_t i = 0; i < t.size(); ++i) t.v[i] = s.context[i];
    return t;
}

inline nn::Tensor sample_cnn_left(const TrainingSample& s) {
    size_t off = static_cast<size_t>(3) * s.n * s.n;
    nn::Tensor t(1, 2 * s.n, s.n);
    for (size_t i = 0; i < t.size(); ++i) t.v[i] = s.context[off + i];
    return t;
}

}  // namespace nnintra
