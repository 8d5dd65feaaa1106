#pragma once

#include "vizqm/image.hpp"

#include <cstdint>
#include <vector>

namespace vizqm {

/// A single-channel raster of doubles; working representation for pyramid
/// levels and conspicuity maps.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(int w, int h) : width(w), height(h), v(static_cast<size_t>(w) * h, 0.0) {}
    double& at(int x, int y) { return v[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }
};

struct SaliencyMap {
    int width = 0;                    // analysis raster dimensions
    int height = 0;
    std::vector<std::uint8_t> values; // 0-255, brighter = more salient
    bool degenerate = false;          // constant input, map forced to all-zero

    // Conspicuity maps retained for diagnostics (coarse scale, already
    // normalized); empty when degenerate.
    Plane intensity_conspicuity;
    Plane color_conspicuity;
    Plane orientation_conspicuity;
};

struct SaliencyScore {
    double s_sy = 0.0;                 // salient pixels / all pixels
    int threshold = 0;                 // the I_k level used
    std::vector<std::uint8_t> mask;    // 1 where values >= threshold
};

/// Itti-Koch saliency: 9-level dyadic Gaussian pyramid, intensity / colour
/// (broadly tuned R,G,B,Y with red-green and blue-yellow opponency) /
/// orientation (Gabor, 4 angles) channels, center-surround differences for
/// c in {2,3,4} and s = c + {3,4}, peak-promoting normalization, across-scale
/// addition at level 4, equal-weight channel fusion, upsampled to the input
/// raster and stretched to 0-255. Inputs whose shorter side is below 128 px
/// are bilinearly doubled (repeatedly) before analysis; the returned map has
/// the analyzed raster's dimensions.
SaliencyMap compute_saliency(const ImageRGB& image);

SaliencyScore saliency_score(const SaliencyMap& map, const AnalysisConfig& cfg);

namespace detail {

/// The map-normalization operator N(.): range-normalize to [0,1], then scale
/// by (1 - mean_local_max)^2, where the local maxima are taken over
/// non-overlapping 8x8 blocks (smaller tail blocks included) excluding the
/// block holding the global maximum. A constant map normalizes to all-zero.
Plane normalize_map(const Plane& map);

/// Dyadic downsample: 5-tap [1,4,6,4,1]/16 separable blur (replicate
/// borders), then keep even-indexed rows/columns; output is ceil(n/2) per
/// axis.
Plane pyr_down(const Plane& src);

/// Bilinear resample of a double plane (pixel-center convention).
Plane resize_plane(const Plane& src, int out_w, int out_h);

/// 9x9 Gabor magnitude response (wavelength 7, sigma 2.8, aspect 1.0,
/// cosine phase, zero-mean kernel), replicate borders.
Plane gabor_response(const Plane& src, double theta_radians);

} // namespace detail

} // namespace vizqm
