#include "vizqm/testimage.hpp"
#include "vizqm/plot.hpp"

#include <algorithm>

namespace vizqm {

namespace {

void draw_disc(ImageRGB& img, const DiscSpec& disc) {
    const int x0 = std::max(0, disc.cx - disc.radius);
    const int x1 = std::min(img.width - 1, disc.cx + disc.radius);
    const int y0 = std::max(0, disc.cy - disc.radius);
    const int y1 = std::min(img.height - 1, disc.cy + disc.radius);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (disc.contains(x, y)) {
                img.set_pixel(x, y, disc.color[0], disc.color[1], disc.color[2]);
            }
        }
    }
}

} // namespace

ImageRGB generate_test_image(TestImageLayout* layout) {
    constexpr int kSize = 512;
    ImageRGB img(kSize, kSize);
    for (int y = 0; y < kSize; ++y) {
        for (int x = 0; x < kSize; ++x) img.set_pixel(x, y, 255, 255, 255);
    }

    TestImageLayout lay;
    lay.width = kSize;
    lay.height = kSize;

    // Coloured discs along the top band. Each colour keeps at least one
    // channel at full step against the white background so the edge
    // detector sees every rim. Yellow is expected to rank lowest in
    // saliency among the discs: the broadly tuned yellow component is
    // subtracted in both the red-green and blue-yellow opponency maps,
    // leaving it weak against a bright background.
    lay.discs = {
        {"red", 80, 96, 36, {220, 0, 0}},
        {"green", 208, 96, 36, {0, 150, 40}},
        {"blue", 336, 96, 36, {0, 60, 220}},
        {"yellow", 464, 96, 36, {255, 215, 0}},
    };
    for (const auto& disc : lay.discs) draw_disc(img, disc);

    // Black text lines (the "labels and annotations" content class), sized
    // like chart annotations relative to the discs.
    const int text_scale = 4;
    const std::array<std::pair<std::string, int>, 2> lines = {{
        {"QUARTERLY RESULTS", 196},
        {"REGION TOTALS 2024", 244},
    }};
    for (const auto& [text, y] : lines) {
        const int x = (kSize - text_width(text, text_scale)) / 2;
        draw_text(img, x, y, text, 0, 0, 0, text_scale);
        lay.text_lines.push_back(
            RectSpec{x, y, x + text_width(text, text_scale) - 1, y + 7 * text_scale - 1});
    }

    // Clutter: sparse pairs of thin (3 px) black horizontal lines. The two
    // lines of a pair are separate edge components inside the default
    // congestion distance, while the wide white gaps between pairs keep the
    // band visually faint at coarse scales.
    const int clutter_x0 = 64, clutter_x1 = 447;
    const int clutter_top = 312;
    const int pair_count = 5, pair_period = 32, line_gap = 7, thickness = 3;
    for (int k = 0; k < pair_count; ++k) {
        for (int line = 0; line < 2; ++line) {
            for (int t = 0; t < thickness; ++t) {
                const int y = clutter_top + k * pair_period + line * line_gap + t;
                for (int x = clutter_x0; x <= clutter_x1; ++x) img.set_pixel(x, y, 0, 0, 0);
            }
        }
    }
    lay.clutter = RectSpec{clutter_x0 - 4, clutter_top - 4, clutter_x1 + 4,
                           clutter_top + (pair_count - 1) * pair_period + line_gap + thickness + 3};

    if (layout) *layout = lay;
    return img;
}

double mean_in_disc(const std::vector<std::uint8_t>& values, int width, const DiscSpec& disc) {
    double sum = 0.0;
    long long count = 0;
    for (int y = disc.cy - disc.radius; y <= disc.cy + disc.radius; ++y) {
        for (int x = disc.cx - disc.radius; x <= disc.cx + disc.radius; ++x) {
            if (!disc.contains(x, y)) continue;
            sum += values[static_cast<size_t>(y) * width + x];
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

double mean_in_rects(const std::vector<std::uint8_t>& values, int width,
                     const std::vector<RectSpec>& rects) {
    double sum = 0.0;
    long long count = 0;
    for (const auto& rect : rects) {
        for (int y = rect.y0; y <= rect.y1; ++y) {
            for (int x = rect.x0; x <= rect.x1; ++x) {
                sum += values[static_cast<size_t>(y) * width + x];
                ++count;
            }
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

} // namespace vizqm
