#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nnintra/common.hpp"

// Minimal layer zoo for the predictors. Parameters are float32 (the on-disk
// precision); activations and gradients are double.
namespace nnintra::nn {

struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int c_, int h_, int w_) : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, 0.0) {}
    double& at(int ci, int y, int x) { return v[(static_cast<size_t>(ci) * h + y) * w + x]; }
    double at(int ci, int y, int x) const { return v[(static_cast<size_t>(ci) * h + y) * w + x]; }
    size_t size() const { return v.size(); }
};

struct Affine {
    int in = 0, out = 0;
    std::vector<float> w;  // out x in, row-major
    std::vector<float> b;  // out

    Affine() = default;
    Affine(int in_, int out_) : in(in_), out(out_), w(static_cast<size_t>(in_) * out_, 0.0f), b(out_, 0.0f) {}

    std::vector<double> forward(const std::vector<double>& x) const {
        std::vector<double> y(out);
        for (int o = 0; o < out; ++o) {
            const float* row = w.data() + static_cast<size_t>(o) * in;
            double acc = b[o];
            for (int i = 0; i < in; ++i) acc += static_cast<double>(row[i]) * x[i];
            y[o] = acc;
        }
        return y;
    }

    void backward(const std::vector<double>& x, const std::vector<double>& dy, std::vector<double>& dx,
                  std::vector<double>& dw, std::vector<double>& db) const {
        dx.assign(in, 0.0);
        for (int o = 0; o < out; ++o) {
            const float* row = w.data() + static_cast<size_t>(o) * in;
            double g = dy[o];
            db[o] += g;
            double* dwrow = dw.data() + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) {
                dx[i] += static_cast<double>(row[i]) * g;
                dwrow[i] += x[i] * g;
            }
        }
    }
};

// Strided convolution with same-padding: pad = (k-1)/2 on both axes, output
// spatial size = ceil(in/stride). Weights are (outC, inC, kH, kW).
struct Conv {
    int in_c = 0, out_c = 0, k = 0, stride = 1;
    std::vector<float> w;
    std::vector<float> b;

    Conv() = default;
    Conv(int in_c_, int out_c_, int k_, int stride_)
        : in_c(in_c_), out_c(out_c_), k(k_), stride(stride_),
          w(static_cast<size_t>(out_c_) * in_c_ * k_ * k_, 0.0f), b(out_c_, 0.0f) {}

    int out_h(int in_h) const { return (in_h + stride - 1) / stride; }

    float wt(int oc, int ic, int ky, int kx) const {
        return w[((static_cast<size_t>(oc) * in_c + ic) * k + ky) * k + kx];
    }

    Tensor forward(const Tensor& x) const {
        int p = (k - 1) / 2;
        Tensor y(out_c, out_h(x.h), out_h(x.w));
        for (int oc = 0; oc < out_c; ++oc) {
            for (int oy = 0; oy < y.h; ++oy) {
                for (int ox = 0; ox < y.w; ++ox) {
                    double acc = b[oc];
                    for (int ic = 0; ic < in_c; ++ic) {
                        for (int ky = 0; ky < k; ++ky) {
                            int iy = oy * stride + ky - p;
                            if (iy < 0 || iy >= x.h) continue;
                            for (int kx = 0; kx < k; ++kx) {
                                int ix = ox * stride + kx - p;
                                if (ix < 0 || ix >= x.w) continue;
                                acc += static_cast<double>(wt(oc, ic, ky, kx)) * x.at(ic, iy, ix);
                            }
                        }
                    }
                    y.at(oc, oy, ox) = acc;
                }
            }
        }
        return y;
    }

    void backward(const Tensor& x, const Tensor& dy, Tensor& dx, std::vector<double>& dw,
                  std::vector<double>& db) const {
        int p = (k - 1) / 2;
        dx = Tensor(x.c, x.h, x.w);
        for (int oc = 0; oc < out_c; ++oc) {
            for (int oy = 0; oy < dy.h; ++oy) {
                for (int ox = 0; ox < dy.w; ++ox) {
                    double g = dy.at(oc, oy, ox);
                    db[oc] += g;
                    for (int ic = 0; ic < in_c; ++ic) {
                        for (int ky = 0; ky < k; ++ky) {
                            int iy = oy * stride + ky - p;
                            if (iy < 0 || iy >= x.h) continue;
                            for (int kx = 0; kx < k; ++kx) {
                                int ix = ox * stride + kx - p;
                                if (ix < 0 || ix >= x.w) continue;
                                dx.at(ic, iy, ix) += static_cast<double>(wt(oc, ic, ky, kx)) * g;
                                dw[((static_cast<size_t>(oc) * in_c + ic) * k + ky) * k + kx] +=
                                    x.at(ic, iy, ix) * g;
                            }
                        }
                    }
                }
            }
        }
    }
};

// Transposed convolution, the exact adjoint of Conv with the same kernel,
// stride and padding. Output spatial size = in * stride. Weights stay in
// (outC, inC, kH, kW) order.
struct Deconv {
    int in_c = 0, out_c = 0, k = 0, stride = 1;
    std::vector<float> w;
    std::vector<float> b;

    Deconv() = default;
    Deconv(int in_c_, int out_c_, int k_, int stride_)
        : in_c(in_c_), out_c(out_c_), k(k_), stride(stride_),
          w(static_cast<size_t>(out_c_) * in_c_ * k_ * k_, 0.0f), b(out_c_, 0.0f) {}

    float wt(int oc, int ic, int ky, int kx) const {
        return w[((static_cast<size_t>(oc) * in_c + ic) * k + ky) * k + kx];
    }

    Tensor forward(const Tensor& x) const {
        int p = (k - 1) / 2;
        Tensor y(out_c, x.h * stride, x.w * stride);
        for (int oc = 0; oc < out_c; ++oc)
            for (size_t i = 0; i < y.v.size() / out_c; ++i) y.v[oc * (y.v.size() / out_c) + i] = b[oc];
        for (int ic = 0; ic < in_c; ++ic) {
            for (int iy = 0; iy < x.h; ++iy) {
                for (int ix = 0; ix < x.w; ++ix) {
                    double xv = x.at(ic, iy, ix);
                    for (int ky = 0; ky < k; ++ky) {
                        int oy = iy * stride + ky - p;
                        if (oy < 0 || oy >= y.h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            int ox = ix * stride + kx - p;
                            if (ox < 0 || ox >= y.w) continue;
                            for (int oc = 0; oc < out_c; ++oc)
                                y.at(oc, oy, ox) += static_cast<double>(wt(oc, ic, ky, kx)) * xv;
                        }
                    }
                }
            }
        }
        return y;
    }

    void backward(const Tensor& x, const Tensor& dy, Tensor& dx, std::vector<double>& dw,
                  std::vector<double>& db) const {
        int p = (k - 1) / 2;
        dx = Tensor(x.c, x.h, x.w);
        for (int oc = 0; oc < out_c; ++oc)
            for (int oy = 0; oy < dy.h; ++oy)
                for (int ox = 0; ox < dy.w; ++ox) db[oc] += dy.at(oc, oy, ox);
        for (int ic = 0; ic < in_c; ++ic) {
            for (int iy = 0; iy < x.h; ++iy) {
                for (int ix = 0; ix < x.w; ++ix) {
                    double xv = x.at(ic, iy, ix);
                    double acc = 0;
                    for (int ky = 0; ky < k; ++ky) {
                        int oy = iy * stride + ky - p;
                        if (oy < 0 || oy >= dy.h) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            int ox = ix * stride + kx - p;
                            if (ox < 0 || ox >= dy.w) continue;
                            for (int oc = 0; oc < out_c; ++oc) {
                                double g = dy.at(oc, oy, ox);
                                acc += static_cast<double>(wt(oc, ic, ky, kx)) * g;
                                dw[((static_cast<size_t>(oc) * in_c + ic) * k + ky) * k + kx] += xv * g;
                            }
                        }
                    }
                    dx.at(ic, iy, ix) = acc;
                }
            }
        }
    }
};

// PReLU: identity for x >= 0, learnable slope otherwise. One slope total for
// vector activations, one per channel for tensors.
struct Prelu {
    std::vector<float> slopes;

    Prelu() = default;
    explicit Prelu(int n) : slopes(n, 0.25f) {}

    std::vector<double> forward(const std::vector<double>& x) const {
        double a = slopes[0];
        std::vector<double> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] >= 0 ? x[i] : a * x[i];
        return y;
    }

    Tensor forward(const Tensor& x) const {
        Tensor y(x.c, x.h, x.w);
        size_t plane = static_cast<size_t>(x.h) * x.w;
        for (int c = 0; c < x.c; ++c) {
            double a = slopes[static_cast<size_t>(c) % slopes.size()];
            for (size_t i = 0; i < plane; ++i) {
                double v = x.v[c * plane + i];
                y.v[c * plane + i] = v >= 0 ? v : a * v;
            }
        }
        return y;
    }

    void backward(const std::vector<double>& x, const std::vector<double>& dy, std::vector<double>& dx,
                  std::vector<double>& dslopes) const {
        double a = slopes[0];
        dx.resize(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            if (x[i] >= 0) {
                dx[i] = dy[i];
            } else {
                dx[i] = a * dy[i];
                dslopes[0] += dy[i] * x[i];
            }
        }
    }

    void backward(const Tensor& x, const Tensor& dy, Tensor& dx, std::vector<double>& dslopes) const {
        dx = Tensor(x.c, x.h, x.w);
        size_t plane = static_cast<size_t>(x.h) * x.w;
        for (int c = 0; c < x.c; ++c) {
            size_t si = static_cast<size_t>(c) % slopes.size();
            double a = slopes[si];
            for (size_t i = 0; i < plane; ++i) {
                double v = x.v[c * plane + i];
                double g = dy.v[c * plane + i];
                if (v >= 0) {
                    dx.v[c * plane + i] = g;
                } else {
                    dx.v[c * plane + i] = a * g;
                    dslopes[si] += g * v;
                }
            }
        }
    }
};

inline std::vector<double> flatten(const Tensor& t) { return t.v; }  // (c, y, x) order

inline Tensor unflatten(const std::vector<double>& v, int c, int h, int w) {
    if (v.size() != static_cast<size_t>(c) * h * w) throw InvariantError("unflatten: size mismatch");
    Tensor t(c, h, w);
    t.v = v;
    return t;
}

}  // namespace nnintra::nn
