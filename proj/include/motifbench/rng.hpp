#pragma once

#include <cstdint>

namespace motifbench {

// Counter-based generator: the value at (stream, index) is a pure function of
// the seed, so any element of a dataset can be regenerated independently of
// the order or thread that produces it.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const noexcept {
        return mix(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL)) + index);
    }

    // Uniform in [0, 1) with 53 bits of resolution.
    constexpr double uniform(std::uint64_t stream, std::uint64_t index) const noexcept {
        return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, 1) with 24 bits of resolution, exactly representable as float.
    constexpr float uniform_f32(std::uint64_t stream, std::uint64_t index) const noexcept {
        return static_cast<float>(bits(stream, index) >> 40) * 0x1.0p-24f;
    }

    // Uniform integer in [0, bound) by multiply-shift; bound must be > 0.
    std::uint64_t below(std::uint64_t stream, std::uint64_t index, std::uint64_t bound) const noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits(stream, index)) * bound) >> 64);
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace motifbench
