#pragma once

#include "motifbench/tensor.hpp"

#include <cstdint>
#include <vector>

namespace motifbench::kernels {

struct Padding {
    std::uint32_t top = 0, bottom = 0, left = 0, right = 0;

    static Padding valid() noexcept { return {}; }
    bool operator==(const Padding&) const = default;
};

enum class Accumulation { Float32, Float64 };

struct ConvParams {
    std::uint32_t kh = 3, kw = 3, in_c = 1, out_c = 1;
    std::vector<float> weights;  // [kh][kw][in_c][out_c]
    std::uint32_t sh = 1, sw = 1;
    Padding padding;

    float weight(std::size_t dy, std::size_t dx, std::size_t c, std::size_t o) const noexcept {
        return weights[((dy * kw + dx) * in_c + c) * out_c + o];
    }
};

// Seeded benchmark weights, uniform in [-0.5, 0.5].
ConvParams make_conv_params(std::uint32_t kh, std::uint32_t kw, std::uint32_t in_c, std::uint32_t out_c,
                            std::uint64_t seed);

// floor((extent + pad - window) / stride) + 1; throws when the window does
// not fit the padded extent.
std::uint32_t output_extent(std::uint32_t extent, std::uint32_t pad, std::uint32_t window, std::uint32_t stride);

// Cross-correlation (no kernel flip). Each output element reduces its terms
// sequentially in (dy, dx, c) order.
Tensor4 conv2d(const Tensor4& input, const ConvParams& params, unsigned threads = 1,
               Accumulation acc = Accumulation::Float32);

enum class PoolKind { Max, Avg };

struct PoolParams {
    PoolKind kind = PoolKind::Max;
    std::uint32_t kh = 2, kw = 2;
    std::uint32_t sh = 2, sw = 2;
};

// Valid padding. Averages are accumulated in double and rounded once, so a
// window's average never exceeds its maximum.
Tensor4 pool(const Tensor4& input, const PoolParams& params, unsigned threads = 1);

enum class ActivationKind { Relu, Sigmoid, Tanh };

Tensor4 activation(const Tensor4& input, ActivationKind kind, unsigned threads = 1);

struct FcParams {
    std::uint32_t in_features = 0, out_features = 0;
    std::vector<float> weights;  // [in_features][out_features]
    std::vector<float> bias;     // [out_features]
};

FcParams make_fc_params(std::uint32_t in_features, std::uint32_t out_features, std::uint64_t seed);

// Flattens each sample to in_features values; output shape (N, 1, 1, M).
Tensor4 fully_connected(const Tensor4& input, const FcParams& params, unsigned threads = 1,
                        Accumulation acc = Accumulation::Float32);

Tensor4 multiply(const Tensor4& a, const Tensor4& b, unsigned threads = 1);

}  // namespace motifbench::kernels
