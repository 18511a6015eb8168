#include "compass/core/hash.hpp"

namespace compass {

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace compass
