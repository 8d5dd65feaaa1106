#include "vizqm/image.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <sys/stat.h>

namespace vizqm {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool file_exists(const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    // Rethrown as DecodeError/io_error at the call sites via longjmp.
    (void)msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

} // namespace

ImageRGB load_image(const std::string& path) {
    if (!file_exists(path))
        throw_error(Errc::file_not_found, "no such file: " + path);

    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp)
        throw_error(Errc::file_not_found, "cannot open: " + path);

    png_byte header[8] = {};
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw_error(Errc::decode_error, "not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_error(Errc::decode_error, "png decoder init failed");
    }

    std::vector<std::uint8_t> rgba;
    png_uint_32 w = 0, h = 0;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw_error(Errc::decode_error, "corrupt or unsupported PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    // Normalize every supported layout to 8-bit RGBA.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
    png_read_update_info(png, info);

    if (w < 1 || h < 1) longjmp(png_jmpbuf(png), 1);

    rgba.resize(static_cast<std::size_t>(w) * h * 4);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = rgba.data() + static_cast<std::size_t>(y) * w * 4;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    // Composite over white: out = (c*a + 255*(255-a)) / 255, rounded.
    ImageRGB out(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
        const std::uint8_t a = rgba[4 * i + 3];
        for (int c = 0; c < 3; ++c) {
            const int v = rgba[4 * i + c];
            out.data[3 * i + c] = a == 255
                ? static_cast<std::uint8_t>(v)
                : quantize8((v * a + 255.0 * (255 - a)) / 255.0);
        }
    }
    return out;
}

namespace {

void write_png_impl(const std::string& path, int width, int height,
                    const std::uint8_t* data, int color_type, int stride) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp)
        throw_error(Errc::io_error, "cannot write: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warning_fn);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw_error(Errc::io_error, "png encoder init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw_error(Errc::io_error, "png write failed: " + path);
    }

    png_init_io(png, fp.get());
    // Fixed settings so identical pixels always produce identical bytes.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, width, height, 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

void save_png(const ImageRGB& img, const std::string& path) {
    write_png_impl(path, img.width, img.height, img.data.data(),
                   PNG_COLOR_TYPE_RGB, img.width * 3);
}

void save_png(const ImageGray& img, const std::string& path) {
    write_png_impl(path, img.width, img.height, img.data.data(),
                   PNG_COLOR_TYPE_GRAY, img.width);
}

} // namespace vizqm
