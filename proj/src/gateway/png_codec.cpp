#include "compass/gateway/png_codec.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "compass/core/error.hpp"

namespace compass {

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_nothing(png_structp) {}

}  // namespace

// One pass through libpng's write API. Fast zlib level with up/sub filters:
// the rasters are noise-heavy, so higher levels buy little.
std::vector<std::uint8_t> encode_png(const Image& image) {
    require_decodable(image, "png encode");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png != nullptr, ErrorKind::io, "png encode failed: out of memory");
    png_infop info = png_create_info_struct(png);
    std::vector<std::uint8_t> out;
    out.reserve(image.rgb.size() / 2);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::io, "png encode failed");
    }
    png_set_write_fn(png, &out, append_bytes, flush_nothing);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 1);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB | PNG_FILTER_UP);
    png_write_info(png, info);
    const std::size_t stride = std::size_t{image.width} * 3;
    for (std::uint32_t y = 0; y < image.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(image.rgb.data() + y * stride));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
    png_image desc;
    std::memset(&desc, 0, sizeof desc);
    desc.version = PNG_IMAGE_VERSION;
    if (bytes.empty() || !png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size())) {
        fail(ErrorKind::invalid_argument,
             std::string("undecodable image: ") + (bytes.empty() ? "empty buffer" : desc.message));
    }
    desc.format = PNG_FORMAT_RGB;
    Image out(desc.width, desc.height);
    if (!png_image_finish_read(&desc, nullptr, out.rgb.data(), 0, nullptr)) {
        png_image_free(&desc);
        fail(ErrorKind::invalid_argument, std::string("undecodable image: ") + desc.message);
    }
    return out;
}

void write_png(const std::filesystem::path& path, const Image& image) {
    const auto bytes = encode_png(image);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(f.good(), ErrorKind::io, "cannot write " + path.string());
}

Image read_png(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorKind::io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                          std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

}  // namespace compass
