#pragma once

#include <cstdint>
#include <vector>

namespace compass {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(std::uint32_t w, std::uint32_t h) : width(w), height(h), rgb(std::size_t{w} * h * 3, 0) {}

    bool empty() const noexcept { return width == 0 || height == 0; }
    // Non-empty with a pixel buffer that matches its dimensions.
    bool well_formed() const noexcept {
        return !empty() && rgb.size() == std::size_t{width} * height * 3;
    }

    std::uint8_t* at(std::uint32_t x, std::uint32_t y) noexcept {
        return rgb.data() + (std::size_t{y} * width + x) * 3;
    }
    const std::uint8_t* at(std::uint32_t x, std::uint32_t y) const noexcept {
        return rgb.data() + (std::size_t{y} * width + x) * 3;
    }

    bool operator==(const Image&) const = default;
};

inline constexpr std::uint32_t kMockImageSize = 256;
inline constexpr std::uint32_t kThumbnailSize = 64;

/// Throws Error(invalid_argument, "undecodable image ...") unless well formed.
void require_decodable(const Image& image, const char* what);

/// FNV-1a over width, height and pixel bytes.
std::uint64_t content_hash(const Image& image);

Image resize_nearest(const Image& src, std::uint32_t width, std::uint32_t height);
/// Area-average downsample; used for 64x64 thumbnails.
Image downsample_box(const Image& src, std::uint32_t width, std::uint32_t height);

/// Largest absolute per-channel difference between two same-sized images.
int max_abs_difference(const Image& a, const Image& b);

}  // namespace compass
