#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nnintra/dataset.hpp"
#include "nnintra/model.hpp"

namespace nnintra {

// Loss data term convention: the formula writes an unsquared per-sample L2
// norm while the prose says MSE, so both are supported; L2 is the default.
enum class DataNorm { L2, Mse };

struct TrainConfig {
    double lambda_reg = 0.0005;
    int batch = 16;
    double lr_fc = 0.0001;
    double lr_cnn = 0.0004;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int epochs_baseline = 1;
    int epochs_finetune = 1;
    uint64_t seed = 1;
    DataNorm norm = DataNorm::L2;
    int fc_width = kDefaultFcWidth;
    int cnn_filters = kDefaultCnnFilters;
};

// Gradient buffers aligned with param_blocks() order.
struct Gradients {
    std::vector<std::vector<double>> blocks;

    static Gradients zeros_like(Model& m) {
        Gradients g;
        for (auto& b : param_blocks(m)) g.blocks.emplace_back(b.data->size(), 0.0);
        return g;
    }
    void clear() {
        for (auto& b : blocks)
            std::fill(b.begin(), b.end(), 0.0);
    }
    void add(const Gradients& o) {
        for (size_t i = 0; i < blocks.size(); ++i)
            for (size_t j = 0; j < blocks[i].size(); ++j) blocks[i][j] += o.blocks[i][j];
    }
};

namespace detail {

inline void check_batch(const Model& m, const std::vector<const TrainingSample*>& batch) {
    if (batch.empty()) throw InvariantError("empty batch");
    int n = model_n(m);
    for (const auto* s : batch)
        if (s->n != n) throw InvariantError("mixed batch: sample size does not match model");
}

// Data-term value and d(term)/d(out) for one sample, both divided by M.
inline double data_term(const std::vector<double>& out, const std::vector<float>& target, DataNorm norm,
                        size_t batch_size, std::vector<double>* dout) {
    std::vector<double> e(out.size());
    double sq = 0;
    for (size_t i = 0; i < out.size(); ++i) {
        e[i] = out[i] - target[i];
        sq += e[i] * e[i];
    }
    double inv_m = 1.0 / static_cast<double>(batch_size);
    if (norm == DataNorm::Mse) {
        if (dout) {
            dout->resize(e.size());
            for (size_t i = 0; i < e.size(); ++i) (*dout)[i] = 2.0 * e[i] * inv_m;
        }
        return sq * inv_m;
    }
    double l2 = std::sqrt(sq);
    if (dout) {
        dout->resize(e.size());
        if (l2 > 0) {
            for (size_t i = 0; i < e.size(); ++i) (*dout)[i] = e[i] / l2 * inv_m;
        } else {
            std::fill(dout->begin(), dout->end(), 0.0);
        }
    }
    return l2 * inv_m;
}

inline double weight_penalty(Model& m, double lambda) {
    double sum = 0;
    for (auto& b : param_blocks(m)) {
        if (!b.is_weight) continue;
        for (float w : *b.data) sum += static_cast<double>(w) * w;
    }
    return lambda * sum;
}

inline void add_weight_penalty_grads(Model& m, double lambda, Gradients& g) {
    auto blocks = param_blocks(m);
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (!blocks[i].is_weight) continue;
        auto& dst = g.blocks[i];
        const auto& w = *blocks[i].data;
        for (size_t j = 0; j < w.size(); ++j) dst[j] += 2.0 * lambda * w[j];
    }
}

inline double fc_sample_backward(const FcModel& m, const TrainingSample& s, DataNorm norm, size_t batch_size,
                                 Gradients& g) {
    FcTrace tr;
    auto out = fc_forward_raw(m, sample_fc_input(s), &tr);
    std::vector<double> dout;
    double term = data_term(out, s.target, norm, batch_size, &dout);

    // Block order: l1.w l1.b p1 | l2.w l2.b p2 | l3.w l3.b p3 | l4.w l4.b
    std::vector<double> da3, dz3, da2, dz2, da1, dz1, dx;
    m.l4.backward(tr.a3, dout, da3, g.blocks[9], g.blocks[10]);
    m.p3.backward(tr.z3, da3, dz3, g.blocks[8]);
    m.l3.backward(tr.a2, dz3, da2, g.blocks[6], g.blocks[7]);
    m.p2.backward(tr.z2, da2, dz2, g.blocks[5]);
    m.l2.backward(tr.a1, dz2, da1, g.blocks[3], g.blocks[4]);
    m.p1.backward(tr.z1, da1, dz1, g.blocks[2]);
    m.l1.backward(tr.x0, dz1, dx, g.blocks[0], g.blocks[1]);
    return term;
}

inline double cnn_sample_backward(const CnnModel& m, const TrainingSample& s, DataNorm norm, size_t batch_size,
                                  Gradients& g) {
    CnnTrace tr;
    auto out = cnn_forward_raw(m, sample_cnn_above(s), sample_cnn_left(s), &tr);
    std::vector<double> dout_v;
    double term = data_term(out, s.target, norm, batch_size, &dout_v);

    // Gradient block layout mirrors param_blocks(CnnModel&).
    size_t above_blocks = m.above.size() * 3;
    size_t left_blocks = m.left.size() * 3;
    size_t merge_base = above_blocks + left_blocks;
    size_t deconv_base = merge_base + 3;

    // Deconv stack, last to first.
    nn::Tensor d_cur = nn::unflatten(dout_v, 1, m.n, m.n);
    size_t gi = g.blocks.size();
    for (size_t i = m.deconv.size(); i-- > 0;) {
        const auto& st = m.deconv[i];
        nn::Tensor d_pre;
        if (st.activated) {
            gi -= 1;  // slope block
            st.act.backward(tr.de_pre[i], d_cur, d_pre, g.blocks[gi]);
        } else {
            d_pre = std::move(d_cur);
        }
        const nn::Tensor& input = i == 0 ? tr.seed : tr.de_post[i - 1];
        nn::Tensor d_in;
        gi -= 2;
        st.de.backward(input, d_pre, d_in, g.blocks[gi], g.blocks[gi + 1]);
        d_cur = std::move(d_in);
    }
    if (gi != deconv_base) throw InvariantError("gradient block bookkeeping error");

    // Bottleneck.
    std::vector<double> d_merge_post = d_cur.v;
    std::vector<double> d_merge_pre, d_concat;
    m.merge_act.backward(tr.merge_pre, d_merge_post, d_merge_pre, g.blocks[merge_base + 2]);
    m.merge.backward(tr.concat, d_merge_pre, d_concat, g.blocks[merge_base], g.blocks[merge_base + 1]);

    // Split the concat gradient back into the two paths.
    auto path_backward = [&](const std::vector<CnnModel::ConvStage>& path, const nn::Tensor& input,
                             const std::vector<nn::Tensor>& pre, const std::vector<nn::Tensor>& post,
                             nn::Tensor d_out, size_t block_base) {
        for (size_t i = path.size(); i-- > 0;) {
            const auto& st = path[i];
            nn::Tensor d_pre;
            st.act.backward(pre[i], d_out, d_pre, g.blocks[block_base + i * 3 + 2]);
            const nn::Tensor& x = i == 0 ? input : post[i - 1];
            nn::Tensor d_in;
            st.conv.backward(x, d_pre, d_in, g.blocks[block_base + i * 3], g.blocks[block_base + i * 3 + 1]);
            d_out = std::move(d_in);
        }
    };
    const nn::Tensor& a_last = tr.above_post.back();
    const nn::Tensor& l_last = tr.left_post.back();
    nn::Tensor d_above = a_last;
    nn::Tensor d_left = l_last;
    std::copy(d_concat.begin(), d_concat.begin() + a_last.size(), d_above.v.begin());
    std::copy(d_concat.begin() + a_last.size(), d_concat.end(), d_left.v.begin());
    path_backward(m.above, tr.above_in, tr.above_pre, tr.above_post, std::move(d_above), 0);
    path_backward(m.left, tr.left_in, tr.left_pre, tr.left_post, std::move(d_left), above_blocks);
    return term;
}

inline double sample_forward_term(const Model& m, const TrainingSample& s, DataNorm norm, size_t batch_size) {
    if (const auto* fc = std::get_if<FcModel>(&m))
        return data_term(fc_forward_raw(*fc, sample_fc_input(s)), s.target, norm, batch_size, nullptr);
    const auto& cnn = std::get<CnnModel>(m);
    return data_term(cnn_forward_raw(cnn, sample_cnn_above(s), sample_cnn_left(s)), s.target, norm, batch_size,
                     nullptr);
}

}  // namespace detail

// J = (1/M) sum_m ||F(R_m) - Y_m||_2 + lambda * ||theta_w||_2^2, on the
// normalized (pre-denormalization) outputs.
inline double loss(const Model& m, const std::vector<const TrainingSample*>& batch, const TrainConfig& cfg) {
    detail::check_batch(m, batch);
    double j = 0;
    for (const auto* s : batch) j += detail::sample_forward_term(m, *s, cfg.norm, batch.size());
    return j + detail::weight_penalty(const_cast<Model&>(m), cfg.lambda_reg);
}

// Exact reverse-mode gradients of the loss above. Per-sample gradients are
// computed in parallel waves but always reduced in sample order, so results
// do not depend on the worker count.
inline double backward(const Model& m, const std::vector<const TrainingSample*>& batch, const TrainConfig& cfg,
                       Gradients& grads) {
    detail::check_batch(m, batch);
    Model& mut = const_cast<Model&>(m);
    grads = Gradients::zeros_like(mut);

    size_t wave = std::min<size_t>(std::max(worker_count(), 1), batch.size());
    std::vector<Gradients> partial(wave);
    std::vector<double> terms(batch.size(), 0.0);
    for (auto& p : partial) p = Gradients::zeros_like(mut);

    for (size_t base = 0; base < batch.size(); base += wave) {
        size_t count = std::min(wave, batch.size() - base);
        parallel_for(count, [&](size_t i) {
            const TrainingSample& s = *batch[base + i];
            if (const auto* fc = std::get_if<FcModel>(&m))
                terms[base + i] = detail::fc_sample_backward(*fc, s, cfg.norm, batch.size(), partial[i]);
            else
                terms[base + i] =
                    detail::cnn_sample_backward(std::get<CnnModel>(m), s, cfg.norm, batch.size(), partial[i]);
        });
        for (size_t i = 0; i < count; ++i) {
            grads.add(partial[i]);
            partial[i].clear();
        }
    }

    double j = 0;
    for (double t : terms) j += t;
    j += detail::weight_penalty(mut, cfg.lambda_reg);
    detail::add_weight_penalty_grads(mut, cfg.lambda_reg, grads);
    return j;
}

// ---- ADAM ----

struct AdamState {
    std::vector<std::vector<double>> m, v;
    int64_t t = 0;

    static AdamState zeros_like(Model& model) {
        AdamState s;
        for (auto& b : param_blocks(model)) {
            s.m.emplace_back(b.data->size(), 0.0);
            s.v.emplace_back(b.data->size(), 0.0);
        }
        return s;
    }
};

inline void adam_step(AdamState& st, Model& model, const Gradients& grads, double lr, const TrainConfig& cfg) {
    auto blocks = param_blocks(model);
    if (blocks.size() != grads.blocks.size()) throw InvariantError("adam: gradient shape mismatch");
    st.t += 1;
    double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
    double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
    for (size_t i = 0; i < blocks.size(); ++i) {
        auto& p = *blocks[i].data;
        if (grads.blocks[i].size() != p.size()) throw InvariantError("adam: gradient shape mismatch");
        for (size_t j = 0; j < p.size(); ++j) {
            double g = grads.blocks[i][j];
            st.m[i][j] = cfg.beta1 * st.m[i][j] + (1.0 - cfg.beta1) * g;
            st.v[i][j] = cfg.beta2 * st.v[i][j] + (1.0 - cfg.beta2) * g * g;
            double mhat = st.m[i][j] / bc1;
            double vhat = st.v[i][j] / bc2;
            p[j] = static_cast<float>(static_cast<double>(p[j]) - lr * mhat / (std::sqrt(vhat) + cfg.eps));
        }
    }
}

// ---- the two-phase schedule ----

struct TrainReport {
    struct Row {
        std::string phase;  // "baseline" or "finetune"
        int size = 0;
        int mode = -1;  // -1 for baseline
        int iter = 0;
        double loss = 0;
    };
    struct SizeCounts {
        int n = 0;
        uint64_t baseline_iters = 0;
        std::array<uint64_t, kNumModes> finetune_iters{};
    };
    std::vector<Row> rows;
    std::vector<SizeCounts> sizes;

    std::string to_csv() const {
        std::ostringstream out;
        out << "phase,mode,iter,loss\n";
        for (const auto& r : rows) out << r.phase << "," << r.mode << "," << r.iter << "," << r.loss << "\n";
        return out.str();
    }
};

namespace detail {

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    uint64_t x = seed ^ (a * 0x9E3779B97F4A7C15ull) ^ (b * 0xC2B2AE3D27D4EB4Full) ^ (c * 0x165667B19E3779F9ull);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

// One training phase over the given sample indices: per epoch, shuffle and
// run floor(card/M) minibatch updates.
inline uint64_t run_phase(Model& model, const Dataset& ds, std::vector<size_t> indices, int epochs,
                          const TrainConfig& cfg, double lr, const std::string& phase, int mode,
                          TrainReport& report) {
    AdamState adam = AdamState::zeros_like(model);
    Gradients grads;
    uint64_t total_iters = 0;
    int n = model_n(model);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<uint64_t>(n) << 8 | static_cast<uint8_t>(mode + 1),
                                     phase == "baseline" ? 1 : 2, static_cast<uint64_t>(epoch)));
        seeded_shuffle(indices, rng);
        size_t iters = indices.size() / static_cast<size_t>(cfg.batch);
        for (size_t it = 0; it < iters; ++it) {
            std::vector<const TrainingSample*> batch(cfg.batch);
            for (int k = 0; k < cfg.batch; ++k) batch[k] = &ds[indices[it * cfg.batch + k]];
            double j = backward(model, batch, cfg, grads);
            adam_step(adam, model, grads, lr, cfg);
            report.rows.push_back({phase, n, mode, static_cast<int>(total_iters), j});
            ++total_iters;
        }
    }
    return total_iters;
}

}  // namespace detail

struct SizeTrainResult {
    Model baseline;
    std::vector<Model> per_mode;  // 35 entries
};

// Algorithm: train one per-size baseline over the whole partition, then
// fine-tune a clone per mode over its own samples. An empty (or sub-batch)
// mode partition leaves the clone bit-identical to the baseline.
inline SizeTrainResult train_size(const Dataset& ds, int n, const TrainConfig& cfg, TrainReport& report) {
    if (cfg.batch < 1 || cfg.epochs_baseline < 1 || cfg.epochs_finetune < 1 || cfg.lr_fc <= 0 || cfg.lr_cnn <= 0 ||
        cfg.lambda_reg < 0)
        throw InvariantError("train config values must be positive");
    std::vector<size_t> all;
    std::array<std::vector<size_t>, kNumModes> per_mode;
    for (size_t i = 0; i < ds.size(); ++i) {
        if (ds[i].n != n) continue;
        all.push_back(i);
        per_mode[ds[i].mode].push_back(i);
    }
    if (all.empty()) throw InvariantError("no training samples for size " + std::to_string(n));

    bool fc = n <= 8;
    double lr = fc ? cfg.lr_fc : cfg.lr_cnn;
    Model baseline = fc ? Model(make_fc_model(n, kBaselineMode, cfg.fc_width))
                        : Model(make_cnn_model(n, kBaselineMode, cfg.cnn_filters));
    init_params(baseline, detail::mix_seed(cfg.seed, static_cast<uint64_t>(n), 0, 0));

    TrainReport::SizeCounts counts;
    counts.n = n;
    counts.baseline_iters = detail::run_phase(baseline, ds, all, cfg.epochs_baseline, cfg, lr, "baseline", -1, report);

    SizeTrainResult res;
    res.baseline = baseline;
    res.per_mode.reserve(kNumModes);
    for (int mode = 0; mode < kNumModes; ++mode) {
        Model tuned = baseline;
        std::visit([&](auto& v) { v.mode = mode; }, tuned);
        counts.finetune_iters[mode] =
            detail::run_phase(tuned, ds, per_mode[mode], cfg.epochs_finetune, cfg, lr, "finetune", mode, report);
        res.per_mode.push_back(std::move(tuned));
    }
    report.sizes.push_back(counts);
    return res;
}

inline ModelRegistry train_all(const Dataset& ds, const TrainConfig& cfg, const std::vector<int>& sizes,
                               TrainReport& report) {
    ModelRegistry reg;
    for (int n : sizes) {
        SizeTrainResult r = train_size(ds, n, cfg, report);
        reg.insert(std::move(r.baseline));
        for (auto& m : r.per_mode) reg.insert(std::move(m));
    }
    return reg;
}

}  // namespace nnintra
