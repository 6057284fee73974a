#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <type_traits>

namespace motifbench {

// 64-bit FNV-1a, used for replay checksums and dataset cache keys.
class Fnv1a {
public:
    static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

    void update(const void* data, std::size_t len) noexcept {
        auto p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= kPrime;
        }
    }
    void update(std::string_view s) noexcept { update(s.data(), s.size()); }

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void update_value(const T& v) noexcept {
        update(&v, sizeof(T));
    }

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void update_span(std::span<const T> v) noexcept {
        update(v.data(), v.size_bytes());
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) noexcept {
    Fnv1a h;
    h.update(s);
    return h.digest();
}

}  // namespace motifbench
