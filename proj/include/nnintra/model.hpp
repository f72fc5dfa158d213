#pragma once

#include <bit>
#include <cstring>
#include <filesystem>
#include <map>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nnintra/context.hpp"
#include "nnintra/nn.hpp"

namespace nnintra {

static_assert(std::endian::native == std::endian::little, "model format assumes little-endian floats");

enum class Arch : uint8_t { Fc = 0, Cnn = 1 };

constexpr int kBaselineMode = 255;
constexpr int kDefaultFcWidth = 128;
constexpr int kDefaultCnnFilters = 16;

// Four affine layers with PReLU between them; the last layer projects to the
// n x n block and stays linear.
struct FcModel {
    int n = 0;
    int mode = kBaselineMode;
    int width = kDefaultFcWidth;
    nn::Affine l1, l2, l3, l4;
    nn::Prelu p1, p2, p3;
};

struct CnnModel {
    struct ConvStage {
        nn::Conv conv;
        nn::Prelu act;
    };
    struct DeconvStage {
        nn::Deconv de;
        nn::Prelu act;
        bool activated = true;
    };

    int n = 0;
    int mode = kBaselineMode;
    int filters = kDefaultCnnFilters;
    std::vector<ConvStage> above, left;
    nn::Affine merge;
    nn::Prelu merge_act;
    std::vector<DeconvStage> deconv;
    int seed_c = 0, seed_h = 0, seed_w = 0;
};

using Model = std::variant<FcModel, CnnModel>;

inline int fc_input_size(int n) { return (4 * n + 8) * 8; }

inline FcModel make_fc_model(int n, int mode, int width = kDefaultFcWidth) {
    if (n != 4 && n != 8) throw ModelError("FC architecture requires block size 4 or 8");
    FcModel m;
    m.n = n;
    m.mode = mode;
    m.width = width;
    m.l1 = nn::Affine(fc_input_size(n), width);
    m.l2 = nn::Affine(width, width);
    m.l3 = nn::Affine(width, width);
    m.l4 = nn::Affine(width, n * n);
    m.p1 = nn::Prelu(1);
    m.p2 = nn::Prelu(1);
    m.p3 = nn::Prelu(1);
    return m;
}

// Two strided convolutional paths, a 1/5 bottleneck FC, and a mirrored
// transposed-convolution stack back up to n x n.
inline CnnModel make_cnn_model(int n, int mode, int filters = kDefaultCnnFilters) {
    if (n != 16 && n != 32) throw ModelError("CNN architecture requires block size 16 or 32");
    CnnModel m;
    m.n = n;
    m.mode = mode;
    m.filters = filters;
    int f = filters;

    auto stage = [](int in_c, int out_c, int k, int s) {
        CnnModel::ConvStage st;
        st.conv = nn::Conv(in_c, out_c, k, s);
        st.act = nn::Prelu(out_c);
        return st;
    };
    if (n == 16) {
        for (auto* path : {&m.above, &m.left}) {
            path->push_back(stage(1, f, 5, 2));
            path->push_back(stage(f, f, 3, 1));
            path->push_back(stage(f, 2 * f, 5, 2));
            path->push_back(stage(2 * f, 2 * f, 3, 1));
        }
        m.seed_c = 2 * f;
        m.seed_h = 4;
        m.seed_w = 4;
    } else {
        for (auto* path : {&m.above, &m.left}) {
            path->push_back(stage(1, f, 5, 2));
            path->push_back(stage(f, 2 * f, 5, 2));
            path->push_back(stage(2 * f, 4 * f, 5, 2));
            path->push_back(stage(4 * f, 8 * f, 5, 2));
            path->push_back(stage(8 * f, 8 * f, 3, 1));
        }
        m.seed_c = 8 * f;
        m.seed_h = 2;
        m.seed_w = 2;
    }

    // Path output sizes: above starts at n x 3n, left at 2n x n.
    int concat = 0;
    {
        int h = n, w = 3 * n;
        int c = 1;
        for (const auto& st : m.above) {
            h = st.conv.out_h(h);
            w = st.conv.out_h(w);
            c = st.conv.out_c;
        }
        concat += c * h * w;
        h = 2 * n;
        w = n;
        c = 1;
        for (const auto& st : m.left) {
            h = st.conv.out_h(h);
            w = st.conv.out_h(w);
            c = st.conv.out_c;
        }
        concat += c * h * w;
    }
    if (concat % 5 != 0) throw ModelError("CNN geometry violates the 1/5 bottleneck rule");
    int bottleneck = concat / 5;
    if (bottleneck != m.seed_c * m.seed_h * m.seed_w) throw ModelError("CNN bottleneck does not match seed grid");
    m.merge = nn::Affine(concat, bottleneck);
    m.merge_act = nn::Prelu(1);

    auto destage = [](int in_c, int out_c, bool activated) {
        CnnModel::DeconvStage st;
        st.de = nn::Deconv(in_c, out_c, 5, 2);
        st.act = nn::Prelu(out_c);
        st.activated = activated;
        return st;
    };
    if (n == 16) {
        m.deconv.push_back(destage(2 * f, f, true));
        m.deconv.push_back(destage(f, 1, false));
    } else {
        m.deconv.push_back(destage(8 * f, 4 * f, true));
        m.deconv.push_back(destage(4 * f, 2 * f, true));
        m.deconv.push_back(destage(2 * f, f, true));
        m.deconv.push_back(destage(f, 1, false));
    }
    return m;
}

inline int model_n(const Model& m) {
    return std::visit([](const auto& v) { return v.n; }, m);
}
inline int model_mode(const Model& m) {
    return std::visit([](const auto& v) { return v.mode; }, m);
}
inline Arch model_arch(const Model& m) { return std::holds_alternative<FcModel>(m) ? Arch::Fc : Arch::Cnn; }

// ---- parameter enumeration (canonical order shared by init, gradients,
// ---- the optimizer and serialization) ----

struct ParamBlock {
    std::vector<float>* data = nullptr;
    bool is_weight = false;  // regularized? biases and PReLU slopes are not
};

inline std::vector<ParamBlock> param_blocks(FcModel& m) {
    return {
        {&m.l1.w, true}, {&m.l1.b, false}, {&m.p1.slopes, false},
        {&m.l2.w, true}, {&m.l2.b, false}, {&m.p2.slopes, false},
        {&m.l3.w, true}, {&m.l3.b, false}, {&m.p3.slopes, false},
        {&m.l4.w, true}, {&m.l4.b, false},
    };
}

inline std::vector<ParamBlock> param_blocks(CnnModel& m) {
    std::vector<ParamBlock> blocks;
    for (auto* path : {&m.above, &m.left}) {
        for (auto& st : *path) {
            blocks.push_back({&st.conv.w, true});
            blocks.push_back({&st.conv.b, false});
            blocks.push_back({&st.act.slopes, false});
        }
    }
    blocks.push_back({&m.merge.w, true});
    blocks.push_back({&m.merge.b, false});
    blocks.push_back({&m.merge_act.slopes, false});
    for (auto& st : m.deconv) {
        blocks.push_back({&st.de.w, true});
        blocks.push_back({&st.de.b, false});
        if (st.activated) blocks.push_back({&st.act.slopes, false});
    }
    return blocks;
}

inline std::vector<ParamBlock> param_blocks(Model& m) {
    return std::visit([](auto& v) { return param_blocks(v); }, m);
}

namespace detail {

// Stdlib-independent uniform in [0,1): distributions are not portable across
// standard libraries, and model init must be reproducible from the seed.
template <typename Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int block_fan_in(const FcModel& m, size_t block_idx) {
    const int fans[] = {m.l1.in, 0, 0, m.l2.in, 0, 0, m.l3.in, 0, 0, m.l4.in, 0};
    return fans[block_idx];
}

}  // namespace detail

// Kaiming-style fan-in uniform init for weights; biases zero, slopes 0.25.
template <typename ModelT>
void init_params(ModelT& m, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto blocks = param_blocks(m);
    size_t idx = 0;
    auto fill = [&](std::vector<float>& w, int fan_in) {
        double bound = std::sqrt(6.0 / fan_in);
        for (auto& v : w) v = static_cast<float>((2.0 * detail::uniform01(rng) - 1.0) * bound);
    };
    if constexpr (std::is_same_v<ModelT, FcModel>) {
        for (auto& b : blocks) {
            if (b.is_weight) fill(*b.data, detail::block_fan_in(m, idx));
            ++idx;
        }
    } else {
        for (auto* path : {&m.above, &m.left})
            for (auto& st : *path) fill(st.conv.w, st.conv.in_c * st.conv.k * st.conv.k);
        fill(m.merge.w, m.merge.in);
        for (auto& st : m.deconv) fill(st.de.w, st.de.in_c * st.de.k * st.de.k);
    }
}

inline void init_params(Model& m, uint64_t seed) {
    std::visit([&](auto& v) { init_params(v, seed); }, m);
}

// ---- forward passes ----

struct FcTrace {
    std::vector<double> x0, z1, a1, z2, a2, z3, a3;
};

inline std::vector<double> fc_forward_raw(const FcModel& m, const std::vector<double>& x, FcTrace* tr = nullptr) {
    if (static_cast<int>(x.size()) != m.l1.in) throw ModelError("FC input dimension mismatch");
    auto z1 = m.l1.forward(x);
    auto a1 = m.p1.forward(z1);
    auto z2 = m.l2.forward(a1);
    auto a2 = m.p2.forward(z2);
    auto z3 = m.l3.forward(a2);
    auto a3 = m.p3.forward(z3);
    auto out = m.l4.forward(a3);
    if (tr) {
        tr->x0 = x;
        tr->z1 = std::move(z1);
        tr->a1 = std::move(a1);
        tr->z2 = std::move(z2);
        tr->a2 = std::move(a2);
        tr->z3 = std::move(z3);
        tr->a3 = std::move(a3);
    }
    return out;
}

struct CnnTrace {
    nn::Tensor above_in, left_in;
    std::vector<nn::Tensor> above_pre, above_post, left_pre, left_post;
    std::vector<double> concat, merge_pre, merge_post;
    nn::Tensor seed;
    std::vector<nn::Tensor> de_pre, de_post;
};

namespace detail {

inline nn::Tensor run_path(const std::vector<CnnModel::ConvStage>& path, nn::Tensor x,
                           std::vector<nn::Tensor>* pre, std::vector<nn::Tensor>* post) {
    for (const auto& st : path) {
        nn::Tensor z = st.conv.forward(x);
        nn::Tensor a = st.act.forward(z);
        if (pre) pre->push_back(z);
        if (post) post->push_back(a);
        x = std::move(a);
    }
    return x;
}

}  // namespace detail

inline std::vector<double> cnn_forward_raw(const CnnModel& m, const nn::Tensor& above, const nn::Tensor& left,
                                           CnnTrace* tr = nullptr) {
    if (above.h != m.n || above.w != 3 * m.n || left.h != 2 * m.n || left.w != m.n || above.c != 1 || left.c != 1)
        throw ModelError("CNN input dimension mismatch");
    auto a_out = detail::run_path(m.above, above, tr ? &tr->above_pre : nullptr, tr ? &tr->above_post : nullptr);
    auto l_out = detail::run_path(m.left, left, tr ? &tr->left_pre : nullptr, tr ? &tr->left_post : nullptr);

    std::vector<double> concat;
    concat.reserve(a_out.size() + l_out.size());
    concat.insert(concat.end(), a_out.v.begin(), a_out.v.end());
    concat.insert(concat.end(), l_out.v.begin(), l_out.v.end());

    auto merge_pre = m.merge.forward(concat);
    auto merge_post = m.merge_act.forward(merge_pre);
    nn::Tensor x = nn::unflatten(merge_post, m.seed_c, m.seed_h, m.seed_w);

    if (tr) {
        tr->above_in = above;
        tr->left_in = left;
        tr->concat = concat;
        tr->merge_pre = merge_pre;
        tr->merge_post = merge_post;
        tr->seed = x;
    }

    for (const auto& st : m.deconv) {
        nn::Tensor z = st.de.forward(x);
        nn::Tensor a = st.activated ? st.act.forward(z) : z;
        if (tr) {
            tr->de_pre.push_back(z);
            tr->de_post.push_back(a);
        }
        x = std::move(a);
    }
    if (x.c != 1 || x.h != m.n || x.w != m.n) throw ModelError("CNN output geometry mismatch");
    return x.v;
}

inline std::vector<double> context_to_input(const FcContext& ctx) {
    return std::vector<double>(ctx.values.begin(), ctx.values.end());
}

inline nn::Tensor region_to_tensor(const std::vector<float>& region, int h, int w) {
    nn::Tensor t(1, h, w);
    for (size_t i = 0; i < region.size(); ++i) t.v[i] = region[i];
    return t;
}

inline PredBlock denormalize_block(const std::vector<double>& out) {
    PredBlock block(out.size());
    for (size_t i = 0; i < out.size(); ++i)
        block[i] = static_cast<uint8_t>(clip_pixel(std::lround((out[i] + 0.5) * 255.0)));
    return block;
}

inline PredBlock fc_forward(const FcModel& m, const FcContext& ctx) {
    if (ctx.n != m.n) throw ModelError("context size does not match model");
    return denormalize_block(fc_forward_raw(m, context_to_input(ctx)));
}

inline PredBlock cnn_forward(const CnnModel& m, const CnnContext& ctx) {
    if (ctx.n != m.n) throw ModelError("context size does not match model");
    return denormalize_block(cnn_forward_raw(m, region_to_tensor(ctx.above, m.n, 3 * m.n),
                                             region_to_tensor(ctx.left, 2 * m.n, m.n)));
}

// Prediction through the registry-facing interface: extracts the context
// matching the block size and runs the corresponding network.
inline PredBlock nm_predict(const Model& m, const Plane& recon, const BlockRect& b) {
    if (model_n(m) != b.n) throw ModelError("model size does not match block");
    if (const auto* fc = std::get_if<FcModel>(&m)) return fc_forward(*fc, extract_fc_context(recon, b));
    return cnn_forward(std::get<CnnModel>(m), extract_cnn_context(recon, b));
}

// ---- FLOPs accounting ----
// Affine: 2*in*out. Convolution: 2*outH*outW*k^2*inC*outC. Transposed
// convolution: 2*inH*inW*k^2*inC*outC (each input position scatters k^2*outC
// multiply-adds). PReLU: one op per activation.

inline uint64_t count_flops(const FcModel& m) {
    uint64_t f = 0;
    for (const auto* l : {&m.l1, &m.l2, &m.l3, &m.l4}) f += 2ull * l->in * l->out;
    f += static_cast<uint64_t>(m.l1.out) + m.l2.out + m.l3.out;  // PReLU
    return f;
}

inline uint64_t count_flops(const CnnModel& m) {
    uint64_t f = 0;
    auto walk_path = [&](const std::vector<CnnModel::ConvStage>& path, int h, int w) {
        for (const auto& st : path) {
            int oh = st.conv.out_h(h), ow = st.conv.out_h(w);
            f += 2ull * oh * ow * st.conv.k * st.conv.k * st.conv.in_c * st.conv.out_c;
            f += static_cast<uint64_t>(oh) * ow * st.conv.out_c;  // PReLU
            h = oh;
            w = ow;
        }
    };
    walk_path(m.above, m.n, 3 * m.n);
    walk_path(m.left, 2 * m.n, m.n);
    f += 2ull * m.merge.in * m.merge.out + m.merge.out;
    int h = m.seed_h, w = m.seed_w;
    for (const auto& st : m.deconv) {
        f += 2ull * h * w * st.de.k * st.de.k * st.de.in_c * st.de.out_c;
        h *= st.de.stride;
        w *= st.de.stride;
        if (st.activated) f += static_cast<uint64_t>(h) * w * st.de.out_c;
    }
    return f;
}

inline uint64_t count_flops(const Model& m) {
    return std::visit([](const auto& v) { return count_flops(v); }, m);
}

// ---- serialization: the "NMIP" container ----

namespace detail {

enum class LayerTag : uint8_t { Affine = 0, Conv = 1, Deconv = 2, Prelu = 3 };

struct ByteWriter {
    std::vector<uint8_t> bytes;
    void u8(uint8_t v) { bytes.push_back(v); }
    void u16(uint16_t v) {
        bytes.push_back(static_cast<uint8_t>(v & 0xFF));
        bytes.push_back(static_cast<uint8_t>(v >> 8));
    }
    void f32s(const std::vector<float>& v) {
        size_t off = bytes.size();
        bytes.resize(off + v.size() * 4);
        std::memcpy(bytes.data() + off, v.data(), v.size() * 4);
    }
};

struct ByteReader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;
    uint8_t u8() {
        if (pos >= bytes.size()) throw ModelError("model file truncated");
        return bytes[pos++];
    }
    uint16_t u16() {
        uint16_t lo = u8();
        return static_cast<uint16_t>(lo | (u8() << 8));
    }
    void f32s(std::vector<float>& v) {
        if (pos + v.size() * 4 > bytes.size()) throw ModelError("model file truncated");
        std::memcpy(v.data(), bytes.data() + pos, v.size() * 4);
        pos += v.size() * 4;
    }
};

struct LayerRecord {
    LayerTag tag;
    std::vector<uint16_t> shape;
    std::vector<std::vector<float>*> params;
};

inline std::vector<LayerRecord> layer_records(FcModel& m) {
    std::vector<LayerRecord> recs;
    auto affine = [&](nn::Affine& l) {
        recs.push_back({LayerTag::Affine,
                        {static_cast<uint16_t>(l.out), static_cast<uint16_t>(l.in)},
                        {&l.w, &l.b}});
    };
    auto prelu = [&](nn::Prelu& p) {
        recs.push_back({LayerTag::Prelu, {static_cast<uint16_t>(p.slopes.size())}, {&p.slopes}});
    };
    affine(m.l1);
    prelu(m.p1);
    affine(m.l2);
    prelu(m.p2);
    affine(m.l3);
    prelu(m.p3);
    affine(m.l4);
    return recs;
}

inline std::vector<LayerRecord> layer_records(CnnModel& m) {
    std::vector<LayerRecord> recs;
    auto prelu = [&](nn::Prelu& p) {
        recs.push_back({LayerTag::Prelu, {static_cast<uint16_t>(p.slopes.size())}, {&p.slopes}});
    };
    for (auto* path : {&m.above, &m.left}) {
        for (auto& st : *path) {
            recs.push_back({LayerTag::Conv,
                            {static_cast<uint16_t>(st.conv.out_c), static_cast<uint16_t>(st.conv.in_c),
                             static_cast<uint16_t>(st.conv.k), static_cast<uint16_t>(st.conv.stride)},
                            {&st.conv.w, &st.conv.b}});
            prelu(st.act);
        }
    }
    recs.push_back({LayerTag::Affine,
                    {static_cast<uint16_t>(m.merge.out), static_cast<uint16_t>(m.merge.in)},
                    {&m.merge.w, &m.merge.b}});
    prelu(m.merge_act);
    for (auto& st : m.deconv) {
        recs.push_back({LayerTag::Deconv,
                        {static_cast<uint16_t>(st.de.out_c), static_cast<uint16_t>(st.de.in_c),
                         static_cast<uint16_t>(st.de.k), static_cast<uint16_t>(st.de.stride)},
                        {&st.de.w, &st.de.b}});
        if (st.activated) prelu(st.act);
    }
    return recs;
}

inline std::vector<LayerRecord> layer_records(Model& m) {
    return std::visit([](auto& v) { return layer_records(v); }, m);
}

}  // namespace detail

inline std::vector<uint8_t> serialize_model(const Model& m) {
    detail::ByteWriter w;
    w.u8('N');
    w.u8('M');
    w.u8('I');
    w.u8('P');
    w.u8(1);  // format version
    w.u8(static_cast<uint8_t>(model_arch(m)));
    w.u8(static_cast<uint8_t>(model_n(m)));
    w.u8(static_cast<uint8_t>(model_mode(m)));
    w.u8(0);  // normalization tag: x/255 - 0.5
    Model& mut = const_cast<Model&>(m);
    auto recs = detail::layer_records(mut);
    w.u8(static_cast<uint8_t>(recs.size()));
    for (auto& r : recs) {
        w.u8(static_cast<uint8_t>(r.tag));
        w.u8(static_cast<uint8_t>(r.shape.size()));
        for (uint16_t s : r.shape) w.u16(s);
        for (auto* p : r.params) w.f32s(*p);
    }
    return w.bytes;
}

inline Model deserialize_model(const std::vector<uint8_t>& bytes) {
    detail::ByteReader r{bytes};
    if (r.u8() != 'N' || r.u8() != 'M' || r.u8() != 'I' || r.u8() != 'P') throw ModelError("bad model magic");
    if (r.u8() != 1) throw ModelError("unsupported model format version");
    uint8_t arch = r.u8();
    int n = r.u8();
    int mode = r.u8();
    if (r.u8() != 0) throw ModelError("unknown normalization tag");
    int layer_count = r.u8();
    if (layer_count < 1) throw ModelError("model has no layers");

    // Peek the first record to recover width/filter count, then validate the
    // whole layer list against the canonical architecture.
    size_t peek = r.pos;
    uint8_t tag0 = r.u8();
    uint8_t nshape0 = r.u8();
    if (nshape0 < 1) throw ModelError("bad layer shape");
    uint16_t first_out = r.u16();
    r.pos = peek;

    Model m;
    if (arch == static_cast<uint8_t>(Arch::Fc)) {
        if (tag0 != static_cast<uint8_t>(detail::LayerTag::Affine)) throw ModelError("FC model must start with an affine layer");
        m = make_fc_model(n, mode, first_out);
    } else if (arch == static_cast<uint8_t>(Arch::Cnn)) {
        if (tag0 != static_cast<uint8_t>(detail::LayerTag::Conv)) throw ModelError("CNN model must start with a conv layer");
        m = make_cnn_model(n, mode, first_out);
    } else {
        throw ModelError("unknown architecture tag");
    }

    auto recs = detail::layer_records(m);
    if (static_cast<int>(recs.size()) != layer_count) throw ModelError("layer count does not match architecture");
    for (auto& rec : recs) {
        if (r.u8() != static_cast<uint8_t>(rec.tag)) throw ModelError("layer type does not match architecture");
        if (r.u8() != rec.shape.size()) throw ModelError("layer shape rank mismatch");
        for (uint16_t s : rec.shape)
            if (r.u16() != s) throw ModelError("layer shape does not match architecture");
        for (auto* p : rec.params) r.f32s(*p);
    }
    if (r.pos != bytes.size()) throw ModelError("trailing bytes in model file");
    return m;
}

inline void save_model(const Model& m, const std::string& path) { write_file_bytes(path, serialize_model(m)); }
inline Model load_model(const std::string& path) { return deserialize_model(read_file_bytes(path)); }

// ---- registry ----

struct ModelRegistry {
    std::map<std::pair<int, int>, Model> entries;  // (n, mode); mode 255 = baseline

    const Model* find(int n, int mode) const {
        auto it = entries.find({n, mode});
        return it == entries.end() ? nullptr : &it->second;
    }

    void insert(Model m) {
        auto key = std::make_pair(model_n(m), model_mode(m));
        entries.insert_or_assign(key, std::move(m));
    }

    // All 35 modes for all four sizes; baselines are optional.
    bool complete() const {
        for (int n : {4, 8, 16, 32})
            for (int mode = 0; mode < 35; ++mode)
                if (!find(n, mode)) return false;
        return true;
    }

    // Digest over the serialized mode entries in key order. Baselines are
    // excluded: they never participate in coding.
    uint64_t digest() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (const auto& [key, m] : entries) {
            if (key.second == kBaselineMode) continue;
            h = fnv1a64(serialize_model(m), h);
        }
        return h;
    }
};

inline std::string model_file_name(int n, int mode) {
    char buf[32];
    if (mode == kBaselineMode)
        std::snprintf(buf, sizeof buf, "m%02d_base.nmip", n);
    else
        std::snprintf(buf, sizeof buf, "m%02d_%02d.nmip", n, mode);
    return buf;
}

inline void save_registry(const ModelRegistry& reg, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ostringstream manifest;
    for (const auto& [key, m] : reg.entries) {
        std::string name = model_file_name(key.first, key.second);
        save_model(m, (fs::path(dir) / name).string());
        manifest << key.first << " " << key.second << " " << name << "\n";
    }
    std::string text = manifest.str();
    write_file_bytes((fs::path(dir) / "manifest.txt").string(), std::vector<uint8_t>(text.begin(), text.end()));
}

inline ModelRegistry load_registry(const std::string& dir) {
    namespace fs = std::filesystem;
    auto manifest_path = fs::path(dir) / "manifest.txt";
    auto bytes = read_file_bytes(manifest_path.string());
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    ModelRegistry reg;
    int n, mode;
    std::string rel;
    while (in >> n >> mode >> rel) {
        Model m = load_model((fs::path(dir) / rel).string());
        if (model_n(m) != n || (model_mode(m) != mode))
            throw ModelError("manifest entry does not match model header: " + rel);
        reg.insert(std::move(m));
    }
    return reg;
}

// Seeded random-init registry; round-trip and signaling behavior do not need
// trained weights.
inline ModelRegistry make_random_registry(uint64_t seed, int fc_width = kDefaultFcWidth,
                                          int cnn_filters = kDefaultCnnFilters) {
    ModelRegistry reg;
    for (int n : {4, 8}) {
        for (int mode = 0; mode < 35; ++mode) {
            FcModel m = make_fc_model(n, mode, fc_width);
            init_params(m, seed ^ (static_cast<uint64_t>(n) << 32) ^ mode);
            reg.insert(Model(std::move(m)));
        }
    }
    for (int n : {16, 32}) {
        for (int mode = 0; mode < 35; ++mode) {
            CnnModel m = make_cnn_model(n, mode, cnn_filters);
            init_params(m, seed ^ (static_cast<uint64_t>(n) << 32) ^ mode);
            reg.insert(Model(std::move(m)));
        }
    }
    return reg;
}

}  // namespace nnintra
