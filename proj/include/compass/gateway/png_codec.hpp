#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "compass/gateway/image.hpp"

namespace compass {

std::vector<std::uint8_t> encode_png(const Image& image);
/// Throws Error(invalid_argument) for anything libpng cannot decode.
Image decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

}  // namespace compass
