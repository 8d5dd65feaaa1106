#pragma once

#include "vizqm/image.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace vizqm {

/// Union of per-channel Canny edge masks. mask values are 0 or 1.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;                      // union of the three channels
    std::array<std::vector<std::uint8_t>, 3> channel_masks; // R, G, B

    EdgeMap() = default;
    EdgeMap(int w, int h)
        : width(w), height(h), mask(static_cast<size_t>(w) * h, 0) {
        for (auto& m : channel_masks) m.assign(static_cast<size_t>(w) * h, 0);
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
    long long count() const {
        long long n = 0;
        for (auto v : mask) n += v;
        return n;
    }
};

struct CongestionResult {
    std::vector<std::uint8_t> congested; // subset of EdgeMap.mask, 0/1
    double score = 0.0;                  // congested / edge pixels; 0 when no edges
    long long edge_pixels = 0;
    long long congested_pixels = 0;
    ImageGray overlay;                   // congested pixels white on black
};

/// Canny edge detection run independently on each of the R, G, B channels
/// (Gaussian blur sigma = 1.0, Sobel gradients, hysteresis 50/150 on the
/// 0-255 gradient-magnitude scale); the final mask is the pixelwise OR of
/// the three channel masks.
EdgeMap detect_edges(const ImageRGB& image);

/// Canny on a single grayscale plane; building block for detect_edges and
/// directly testable against a brute-force oracle.
std::vector<std::uint8_t> canny_channel(const std::vector<std::uint8_t>& plane,
                                        int width, int height,
                                        double low_threshold = 50.0,
                                        double high_threshold = 150.0);

/// Label 8-connected components of an edge mask. Background pixels get 0,
/// components are numbered from 1 in scan order.
std::vector<std::int32_t> label_components(const std::vector<std::uint8_t>& mask,
                                           int width, int height);

/// An edge pixel counts as congested when an edge pixel belonging to a
/// different 8-connected component lies within Chebyshev distance
/// <= `distance` of it. S_ec is the congested / edge pixel ratio.
CongestionResult edge_congestion(const EdgeMap& edges, int distance);

} // namespace vizqm
