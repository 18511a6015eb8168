#include "compass/gateway/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "compass/core/error.hpp"
#include "compass/core/hash.hpp"

namespace compass {

void require_decodable(const Image& image, const char* what) {
    require(image.well_formed(), ErrorKind::invalid_argument,
            std::string("undecodable image: ") + what);
}

std::uint64_t content_hash(const Image& image) {
    const std::uint8_t dims[8] = {
        static_cast<std::uint8_t>(image.width), static_cast<std::uint8_t>(image.width >> 8),
        static_cast<std::uint8_t>(image.width >> 16), static_cast<std::uint8_t>(image.width >> 24),
        static_cast<std::uint8_t>(image.height), static_cast<std::uint8_t>(image.height >> 8),
        static_cast<std::uint8_t>(image.height >> 16), static_cast<std::uint8_t>(image.height >> 24),
    };
    return fnv1a64(image.rgb, fnv1a64(dims));
}

Image resize_nearest(const Image& src, std::uint32_t width, std::uint32_t height) {
    require_decodable(src, "resize source");
    if (src.width == width && src.height == height) return src;
    Image out(width, height);
    for (std::uint32_t y = 0; y < height; ++y) {
        const auto sy = static_cast<std::uint32_t>(std::uint64_t{y} * src.height / height);
        for (std::uint32_t x = 0; x < width; ++x) {
            const auto sx = static_cast<std::uint32_t>(std::uint64_t{x} * src.width / width);
            std::copy_n(src.at(sx, sy), 3, out.at(x, y));
        }
    }
    return out;
}

Image downsample_box(const Image& src, std::uint32_t width, std::uint32_t height) {
    require_decodable(src, "downsample source");
    Image out(width, height);
    for (std::uint32_t y = 0; y < height; ++y) {
        const auto y0 = static_cast<std::uint32_t>(std::uint64_t{y} * src.height / height);
        const auto y1 = std::max(y0 + 1, static_cast<std::uint32_t>(std::uint64_t{y + 1} * src.height / height));
        for (std::uint32_t x = 0; x < width; ++x) {
            const auto x0 = static_cast<std::uint32_t>(std::uint64_t{x} * src.width / width);
            const auto x1 = std::max(x0 + 1, static_cast<std::uint32_t>(std::uint64_t{x + 1} * src.width / width));
            std::uint32_t sum[3] = {0, 0, 0};
            for (auto sy = y0; sy < y1; ++sy) {
                for (auto sx = x0; sx < x1; ++sx) {
                    const auto* p = src.at(sx, sy);
                    sum[0] += p[0];
                    sum[1] += p[1];
                    sum[2] += p[2];
                }
            }
            const std::uint32_t count = (y1 - y0) * (x1 - x0);
            auto* q = out.at(x, y);
            for (int c = 0; c < 3; ++c) q[c] = static_cast<std::uint8_t>((sum[c] + count / 2) / count);
        }
    }
    return out;
}

int max_abs_difference(const Image& a, const Image& b) {
    require(a.width == b.width && a.height == b.height, ErrorKind::invalid_argument,
            "image sizes differ");
    int worst = 0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        worst = std::max(worst, std::abs(int{a.rgb[i]} - int{b.rgb[i]}));
    }
    return worst;
}

}  // namespace compass
