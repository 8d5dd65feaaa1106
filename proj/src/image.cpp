#include "vizqm/image.hpp"

#include <algorithm>
#include <cmath>

namespace vizqm {

namespace {

// Sample a source axis position for destination index i (pixel-center
// convention), clamped to the valid range.
inline double src_coord(int i, double scale) {
    return (i + 0.5) * scale - 0.5;
}

} // namespace

ImageRGB resize_bilinear(const ImageRGB& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw_error(Errc::invalid_argument, "resize target must be >= 1 px");
    if (out_w == img.width && out_h == img.height) return img;

    ImageRGB out(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;

    for (int y = 0; y < out_h; ++y) {
        double fy = src_coord(y, sy);
        if (fy < 0.0) fy = 0.0;
        if (fy > img.height - 1.0) fy = img.height - 1.0;
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            double fx = src_coord(x, sx);
            if (fx < 0.0) fx = 0.0;
            if (fx > img.width - 1.0) fx = img.width - 1.0;
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;

            const std::uint8_t* p00 = img.pixel(x0, y0);
            const std::uint8_t* p10 = img.pixel(x1, y0);
            const std::uint8_t* p01 = img.pixel(x0, y1);
            const std::uint8_t* p11 = img.pixel(x1, y1);
            std::uint8_t* q = out.data.data() + 3 * (static_cast<std::size_t>(y) * out_w + x);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + (p10[c] - p00[c]) * wx;
                const double bot = p01[c] + (p11[c] - p01[c]) * wx;
                q[c] = quantize8(top + (bot - top) * wy);
            }
        }
    }
    return out;
}

ImageRGB resize_to_analysis(const ImageRGB& img, const AnalysisConfig& cfg) {
    cfg.validate();
    const int longest = std::max(img.width, img.height);
    if (longest <= cfg.max_dimension) return img;

    const double scale = static_cast<double>(cfg.max_dimension) / longest;
    int w, h;
    if (img.width >= img.height) {
        w = cfg.max_dimension;
        h = std::max(1, round_half_away(img.height * scale));
    } else {
        h = cfg.max_dimension;
        w = std::max(1, round_half_away(img.width * scale));
    }
    return resize_bilinear(img, w, h);
}

ImageGray to_grayscale(const ImageRGB& img) {
    ImageGray out(img.width, img.height);
    const std::uint8_t* src = img.data.data();
    for (std::size_t i = 0, n = img.pixel_count(); i < n; ++i) {
        const double y = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
        out.data[i] = quantize8(y);
    }
    return out;
}

double srgb_decode_value(std::uint8_t v) {
    const double x = v / 255.0;
    return x <= 0.04045 ? x / 12.92 : std::pow((x + 0.055) / 1.055, 2.4);
}

std::uint8_t srgb_encode_value(double linear) {
    double x = std::clamp(linear, 0.0, 1.0);
    const double y = x <= 0.0031308 ? 12.92 * x : 1.055 * std::pow(x, 1.0 / 2.4) - 0.055;
    return quantize8(y * 255.0);
}

std::vector<double> srgb_decode(const ImageRGB& img) {
    // 256-entry table; the EOTF is applied per sample.
    double lut[256];
    for (int v = 0; v < 256; ++v) lut[v] = srgb_decode_value(static_cast<std::uint8_t>(v));
    std::vector<double> out(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) out[i] = lut[img.data[i]];
    return out;
}

ImageRGB srgb_encode(const std::vector<double>& linear, int width, int height) {
    if (linear.size() != static_cast<std::size_t>(width) * height * 3)
        throw_error(Errc::invalid_argument, "linear buffer size does not match dimensions");
    ImageRGB out(width, height);
    for (std::size_t i = 0; i < linear.size(); ++i) out.data[i] = srgb_encode_value(linear[i]);
    return out;
}

} // namespace vizqm
