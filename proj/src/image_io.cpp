#include "darkseg/image_io.hpp"

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include <png.h>

namespace darkseg {

namespace {

struct FileCloser {
    void operator()(std::FILE * f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void throw_decode(const std::filesystem::path & path, const char * what) {
    throw DecodeError(std::string(what) + ": " + path.string());
}

} // namespace

RasterImage read_image(const std::filesystem::path & path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) {
        throw_decode(path, "cannot open file");
    }

    png_byte header[8] = {};
    if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        throw_decode(path, "not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_decode(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_decode(path, "malformed PNG");
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // Normalize every variant to 8-bit gray or RGB.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);

    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_decode(path, "unsupported channel count after normalization");
    }

    std::vector<png_byte> raw(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = raw.data() + static_cast<std::size_t>(y) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage image(width, height, channels);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        image.data[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    return image;
}

void write_image(const RasterImage & image, const std::filesystem::path & path) {
    if (!image.valid()) {
        throw DecodeError("write_image: invalid image for " + path.string());
    }

    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) {
        throw_decode(path, "cannot open file for writing");
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw_decode(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw_decode(path, "PNG write failed");
    }

    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(image.width) * image.channels);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                const float v = image.at(x, y, c);
                row[static_cast<std::size_t>(x) * image.channels + c] =
                    static_cast<png_byte>(std::lround(v * 255.0f));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace darkseg
