#include "motifbench/ai_kernels.hpp"

#include "motifbench/error.hpp"
#include "motifbench/parallel.hpp"
#include "motifbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace motifbench::kernels {

ConvParams make_conv_params(std::uint32_t kh, std::uint32_t kw, std::uint32_t in_c, std::uint32_t out_c,
                            std::uint64_t seed) {
    if (kh < 1 || kw < 1 || in_c < 1 || out_c < 1) throw ParamError("conv kernel dimensions must be >= 1");
    ConvParams p;
    p.kh = kh;
    p.kw = kw;
    p.in_c = in_c;
    p.out_c = out_c;
    p.weights.resize(std::size_t{kh} * kw * in_c * out_c);
    const CounterRng rng(seed);
    for (std::size_t i = 0; i < p.weights.size(); ++i) p.weights[i] = rng.uniform_f32(0, i) - 0.5f;
    return p;
}

std::uint32_t output_extent(std::uint32_t extent, std::uint32_t pad, std::uint32_t window, std::uint32_t stride) {
    if (stride < 1) throw ParamError("stride must be >= 1");
    if (window < 1) throw ParamError("window must be >= 1");
    const std::uint64_t padded = std::uint64_t{extent} + pad;
    if (window > padded) {
        throw ParamError("window " + std::to_string(window) + " larger than padded input extent " +
                         std::to_string(padded));
    }
    return static_cast<std::uint32_t>((padded - window) / stride + 1);
}

namespace {

template <typename Acc>
void conv_rows(const Tensor4& in, const ConvParams& p, Tensor4& out, std::size_t row_begin, std::size_t row_end) {
    std::vector<Acc> acc(p.out_c);
    const auto top = static_cast<std::int64_t>(p.padding.top);
    const auto left = static_cast<std::int64_t>(p.padding.left);
    for (std::size_t row = row_begin; row < row_end; ++row) {
        const std::size_t b = row / out.h;
        const std::size_t y = row % out.h;
        for (std::size_t x = 0; x < out.w; ++x) {
            std::fill(acc.begin(), acc.end(), Acc{0});
            for (std::size_t dy = 0; dy < p.kh; ++dy) {
                const std::int64_t iy = static_cast<std::int64_t>(y * p.sh + dy) - top;
                if (iy < 0 || iy >= static_cast<std::int64_t>(in.h)) continue;
                for (std::size_t dx = 0; dx < p.kw; ++dx) {
                    const std::int64_t ix = static_cast<std::int64_t>(x * p.sw + dx) - left;
                    if (ix < 0 || ix >= static_cast<std::int64_t>(in.w)) continue;
                    const float* src = &in.data[in.index(b, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix), 0)];
                    const float* wrow = &p.weights[(dy * p.kw + dx) * p.in_c * p.out_c];
                    for (std::size_t c = 0; c < p.in_c; ++c) {
                        const Acc v = src[c];
                        const float* wk = wrow + c * p.out_c;
                        for (std::size_t o = 0; o < p.out_c; ++o) acc[o] += v * static_cast<Acc>(wk[o]);
                    }
                }
            }
            float* dst = &out.data[out.index(b, y, x, 0)];
            for (std::size_t o = 0; o < p.out_c; ++o) dst[o] = static_cast<float>(acc[o]);
        }
    }
}

}  // namespace

Tensor4 conv2d(const Tensor4& input, const ConvParams& params, unsigned threads, Accumulation acc) {
    if (params.in_c != input.c) {
        throw ParamError("conv input channels " + std::to_string(input.c) + " do not match kernel in_c " +
                         std::to_string(params.in_c));
    }
    if (params.weights.size() != std::size_t{params.kh} * params.kw * params.in_c * params.out_c) {
        throw ParamError("conv weight count does not match kernel shape");
    }
    const auto oh = output_extent(input.h, params.padding.top + params.padding.bottom, params.kh, params.sh);
    const auto ow = output_extent(input.w, params.padding.left + params.padding.right, params.kw, params.sw);
    Tensor4 out(input.n, oh, ow, params.out_c);
    parallel_chunks(std::size_t{input.n} * oh, threads, [&](std::size_t b, std::size_t e, unsigned) {
        if (acc == Accumulation::Float32) {
            conv_rows<float>(input, params, out, b, e);
        } else {
            conv_rows<double>(input, params, out, b, e);
        }
    });
    return out;
}

Tensor4 pool(const Tensor4& input, const PoolParams& p, unsigned threads) {
    const auto oh = output_extent(input.h, 0, p.kh, p.sh);
    const auto ow = output_extent(input.w, 0, p.kw, p.sw);
    Tensor4 out(input.n, oh, ow, input.c);
    const double inv_count = 1.0 / (static_cast<double>(p.kh) * p.kw);
    parallel_chunks(std::size_t{input.n} * oh, threads, [&](std::size_t rb, std::size_t re, unsigned) {
        std::vector<double> sum(input.c);
        std::vector<float> best(input.c);
        for (std::size_t row = rb; row < re; ++row) {
            const std::size_t b = row / oh, y = row % oh;
            for (std::size_t x = 0; x < ow; ++x) {
                std::fill(sum.begin(), sum.end(), 0.0);
                std::fill(best.begin(), best.end(), -std::numeric_limits<float>::infinity());
                for (std::size_t dy = 0; dy < p.kh; ++dy) {
                    for (std::size_t dx = 0; dx < p.kw; ++dx) {
                        const float* src = &input.data[input.index(b, y * p.sh + dy, x * p.sw + dx, 0)];
                        if (p.kind == PoolKind::Max) {
                            for (std::size_t c = 0; c < input.c; ++c) best[c] = std::max(best[c], src[c]);
                        } else {
                            for (std::size_t c = 0; c < input.c; ++c) sum[c] += src[c];
                        }
                    }
                }
                float* dst = &out.data[out.index(b, y, x, 0)];
                for (std::size_t c = 0; c < input.c; ++c) {
                    dst[c] = p.kind == PoolKind::Max ? best[c] : static_cast<float>(sum[c] * inv_count);
                }
            }
        }
    });
    return out;
}

Tensor4 activation(const Tensor4& input, ActivationKind kind, unsigned threads) {
    Tensor4 out = input;
    parallel_chunks(out.size(), threads, [&](std::size_t b, std::size_t e, unsigned) {
        float* d = out.data.data();
        switch (kind) {
            case ActivationKind::Relu:
                for (std::size_t i = b; i < e; ++i) d[i] = d[i] > 0.0f ? d[i] : 0.0f;
                break;
            case ActivationKind::Sigmoid:
                for (std::size_t i = b; i < e; ++i) d[i] = 1.0f / (1.0f + std::exp(-d[i]));
                break;
            case ActivationKind::Tanh:
                for (std::size_t i = b; i < e; ++i) d[i] = std::tanh(d[i]);
                break;
        }
    });
    return out;
}

FcParams make_fc_params(std::uint32_t in_features, std::uint32_t out_features, std::uint64_t seed) {
    if (in_features < 1 || out_features < 1) throw ParamError("fully connected dimensions must be >= 1");
    FcParams p;
    p.in_features = in_features;
    p.out_features = out_features;
    p.weights.resize(std::size_t{in_features} * out_features);
    p.bias.resize(out_features);
    const CounterRng rng(seed);
    for (std::size_t i = 0; i < p.weights.size(); ++i) p.weights[i] = rng.uniform_f32(0, i) - 0.5f;
    for (std::size_t i = 0; i < p.bias.size(); ++i) p.bias[i] = rng.uniform_f32(1, i) - 0.5f;
    return p;
}

namespace {

template <typename Acc>
void fc_rows(const Tensor4& in, const FcParams& p, Tensor4& out, std::size_t b0, std::size_t b1) {
    std::vector<Acc> acc(p.out_features);
    const std::size_t d = p.in_features, m = p.out_features;
    for (std::size_t b = b0; b < b1; ++b) {
        std::fill(acc.begin(), acc.end(), Acc{0});
        const float* x = in.data.data() + b * d;
        for (std::size_t k = 0; k < d; ++k) {
            const Acc xv = x[k];
            const float* w = p.weights.data() + k * m;
            for (std::size_t j = 0; j < m; ++j) acc[j] += xv * static_cast<Acc>(w[j]);
        }
        float* y = out.data.data() + b * m;
        for (std::size_t j = 0; j < m; ++j) y[j] = static_cast<float>(acc[j] + static_cast<Acc>(p.bias[j]));
    }
}

}  // namespace

Tensor4 fully_connected(const Tensor4& input, const FcParams& params, unsigned threads, Accumulation acc) {
    if (input.features() != params.in_features) {
        throw ParamError("fully connected expects " + std::to_string(params.in_features) +
                         " input features, got " + std::to_string(input.features()));
    }
    if (params.weights.size() != std::size_t{params.in_features} * params.out_features ||
        params.bias.size() != params.out_features) {
        throw ParamError("fully connected weight/bias sizes do not match");
    }
    Tensor4 out(input.n, 1, 1, params.out_features);
    parallel_chunks(input.n, threads, [&](std::size_t b, std::size_t e, unsigned) {
        if (acc == Accumulation::Float32) {
            fc_rows<float>(input, params, out, b, e);
        } else {
            fc_rows<double>(input, params, out, b, e);
        }
    });
    return out;
}

Tensor4 multiply(const Tensor4& a, const Tensor4& b, unsigned threads) {
    if (!a.same_shape(b)) throw ParamError("multiply requires identical tensor shapes");
    Tensor4 out = a;
    parallel_chunks(out.size(), threads, [&](std::size_t s, std::size_t e, unsigned) {
        for (std::size_t i = s; i < e; ++i) out.data[i] *= b.data[i];
    });
    return out;
}

}  // namespace motifbench::kernels
