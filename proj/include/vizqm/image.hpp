#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vizqm/errors.hpp"

namespace vizqm {

/// Round half away from zero, the quantization rule used everywhere a real
/// value becomes an 8-bit sample. Centralized so results are bit-stable
/// across platforms.
inline int round_half_away(double v) {
    return static_cast<int>(v < 0.0 ? std::ceil(v - 0.5) : std::floor(v + 0.5));
}

/// Clamp to [0,255] and quantize with round_half_away.
inline std::uint8_t quantize8(double v) {
    int r = round_half_away(v);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<std::uint8_t>(r);
}

namespace detail {
/// Validated pixel count; run before any allocation so bad dimensions raise
/// invalid_argument rather than a length_error out of std::vector.
inline std::size_t checked_pixels(int w, int h, const char* type_name) {
    if (w < 1 || h < 1)
        throw_error(Errc::invalid_argument, std::string(type_name) + " dimensions must be >= 1");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
}
} // namespace detail

/// Immutable-by-convention row-major 8-bit RGB raster. data()[3*(y*w+x)+c].
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // size = width * height * 3

    ImageRGB() = default;
    ImageRGB(int w, int h)
        : width(w), height(h), data(detail::checked_pixels(w, h, "ImageRGB") * 3, 0) {}
    ImageRGB(int w, int h, std::vector<std::uint8_t> samples)
        : width(w), height(h), data(std::move(samples)) {
        if (data.size() != detail::checked_pixels(w, h, "ImageRGB") * 3)
            throw_error(Errc::invalid_argument, "ImageRGB sample count does not match dimensions");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::uint8_t* p = data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
        p[0] = r; p[1] = g; p[2] = b;
    }
};

/// Row-major 8-bit luminance raster.
struct ImageGray {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // size = width * height

    ImageGray() = default;
    ImageGray(int w, int h)
        : width(w), height(h), data(detail::checked_pixels(w, h, "ImageGray"), 0) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        data[static_cast<std::size_t>(y) * width + x] = v;
    }
};

/// Analysis parameters. Defaults are contractual: corpus scores are only
/// comparable between runs that share a config fingerprint.
struct AnalysisConfig {
    int congestion_distance = 4;  // px, Chebyshev radius for congested edges
    int saliency_threshold = 64;  // I_k, 8-bit level
    int max_dimension = 1280;     // analysis resolution cap, longest side
    double cvd_severity = 1.0;    // fraction of full deficiency, [0,1]

    void validate() const {
        if (congestion_distance < 1)
            throw_error(Errc::invalid_argument, "congestion_distance must be >= 1");
        if (saliency_threshold < 0 || saliency_threshold > 255)
            throw_error(Errc::invalid_argument, "saliency_threshold must be in [0,255]");
        if (max_dimension < 64)
            throw_error(Errc::invalid_argument, "max_dimension must be >= 64");
        if (!(cvd_severity >= 0.0 && cvd_severity <= 1.0))
            throw_error(Errc::invalid_argument, "cvd_severity must be in [0,1]");
    }
};

/// Decode an 8-bit RGB/RGBA/palette/grayscale PNG. Alpha is composited over
/// white. Throws FileNotFound / DecodeError.
ImageRGB load_image(const std::string& path);

/// Encode to PNG with fixed, deterministic settings.
void save_png(const ImageRGB& img, const std::string& path);
void save_png(const ImageGray& img, const std::string& path);

/// Downscale so the longest side is <= cfg.max_dimension, preserving aspect
/// ratio; images already within the bound are returned unchanged. Bilinear.
ImageRGB resize_to_analysis(const ImageRGB& img, const AnalysisConfig& cfg);

/// Bilinear resize to exact target dimensions.
ImageRGB resize_bilinear(const ImageRGB& img, int out_w, int out_h);

/// Y = 0.299 R + 0.587 G + 0.114 B, round half away from zero.
ImageGray to_grayscale(const ImageRGB& img);

/// sRGB electro-optical transfer function, per channel, 8-bit level -> [0,1].
double srgb_decode_value(std::uint8_t v);

/// Inverse EOTF: clamp to [0,1], gamma-encode, quantize to 8 bits.
std::uint8_t srgb_encode_value(double linear);

/// Full-image decode to interleaved linear-light RGB in [0,1].
std::vector<double> srgb_decode(const ImageRGB& img);

/// Quantize an interleaved linear buffer back to 8-bit sRGB.
ImageRGB srgb_encode(const std::vector<double>& linear, int width, int height);

} // namespace vizqm
