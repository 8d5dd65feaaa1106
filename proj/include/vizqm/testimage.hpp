#pragma once

#include "vizqm/image.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vizqm {

struct DiscSpec {
    std::string name;
    int cx = 0, cy = 0, radius = 0;
    std::array<std::uint8_t, 3> color{};
    bool contains(int x, int y) const {
        const long long dx = x - cx, dy = y - cy;
        return dx * dx + dy * dy <= static_cast<long long>(radius) * radius;
    }
};

struct RectSpec {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0; // inclusive
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Geometry of the generated characterization image, exposed so tests can
/// measure per-region statistics.
struct TestImageLayout {
    int width = 0;
    int height = 0;
    std::vector<DiscSpec> discs;     // red, green, blue, yellow (named)
    std::vector<RectSpec> text_lines;
    RectSpec clutter;                // band of thin parallel lines
};

/// 512x512 white canvas carrying the three kinds of content the metrics are
/// characterized against: four saturated coloured discs (including yellow),
/// black text lines, and a band of thin black clutter lines.
ImageRGB generate_test_image(TestImageLayout* layout = nullptr);

/// Mean of a per-pixel byte raster over a disc / over a set of rectangles.
double mean_in_disc(const std::vector<std::uint8_t>& values, int width, const DiscSpec& disc);
double mean_in_rects(const std::vector<std::uint8_t>& values, int width,
                     const std::vector<RectSpec>& rects);

} // namespace vizqm
