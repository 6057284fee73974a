#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace motifbench {

/// Dense NHWC single-precision tensor.
struct Tensor4 {
    std::uint32_t n = 0, h = 0, w = 0, c = 0;
    std::vector<float> data;

    Tensor4() = default;
    Tensor4(std::uint32_t n_, std::uint32_t h_, std::uint32_t w_, std::uint32_t c_, float fill = 0.0f);

    std::size_t size() const noexcept { return data.size(); }
    std::size_t index(std::size_t b, std::size_t y, std::size_t x, std::size_t ch) const noexcept {
        return ((b * h + y) * w + x) * c + ch;
    }
    float& at(std::size_t b, std::size_t y, std::size_t x, std::size_t ch) noexcept {
        return data[index(b, y, x, ch)];
    }
    float at(std::size_t b, std::size_t y, std::size_t x, std::size_t ch) const noexcept {
        return data[index(b, y, x, ch)];
    }
    bool same_shape(const Tensor4& o) const noexcept {
        return n == o.n && h == o.h && w == o.w && c == o.c;
    }
    // H*W*C, the per-sample feature count.
    std::size_t features() const noexcept { return std::size_t{h} * w * c; }
};

}  // namespace motifbench
