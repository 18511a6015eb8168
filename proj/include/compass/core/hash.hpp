#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace compass {

// FNV-1a 64-bit over raw bytes. Content keys for the mock providers.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t basis = 0xCBF29CE484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view text,
                      std::uint64_t basis = 0xCBF29CE484222325ULL) noexcept;

// Order-dependent combination of two 64-bit keys.
constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace compass
