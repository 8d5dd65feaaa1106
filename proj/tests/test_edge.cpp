#include "oracles.hpp"
#include "support.hpp"

#include "vizqm/edge.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

using namespace vizqm;
using namespace vizqm_test;

namespace {

// 1-D Canny oracle for a column profile replicated down every row (the image
// is constant along y, so every stage separates): Gaussian 7-tap sigma-1
// blur, gx = Sobel, magnitude |gx|/4, non-maximum suppression along x,
// hysteresis on the surviving columns. Callers must pick profiles whose
// magnitude has a unique local maximum per edge — an ideal symmetric step
// produces an exact two-column tie whose winner depends on floating-point
// accumulation order, which no independent reimplementation can predict.
std::vector<int> oracle_step_columns(const std::vector<double>& profile, double low,
                                     double high) {
    const int width = static_cast<int>(profile.size());
    std::array<double, 7> kernel{};
    double sum = 0.0;
    for (int i = -3; i <= 3; ++i) {
        kernel[static_cast<std::size_t>(i + 3)] = std::exp(-(i * i) / 2.0);
        sum += kernel[static_cast<std::size_t>(i + 3)];
    }
    for (double& v : kernel) v /= sum;

    auto src = [&](int x) { return profile[static_cast<std::size_t>(std::clamp(x, 0, width - 1))]; };
    std::vector<double> blur(static_cast<std::size_t>(width), 0.0);
    for (int x = 0; x < width; ++x) {
        double acc = 0.0;
        for (int i = -3; i <= 3; ++i) acc += kernel[static_cast<std::size_t>(i + 3)] * src(x + i);
        blur[static_cast<std::size_t>(x)] = acc;
    }
    auto b = [&](int x) { return blur[static_cast<std::size_t>(std::clamp(x, 0, width - 1))]; };

    // Sobel x on a y-constant image is 4*(b(x+1) - b(x-1)); magnitude / 4.
    std::vector<double> mag(static_cast<std::size_t>(width), 0.0);
    for (int x = 0; x < width; ++x) mag[static_cast<std::size_t>(x)] = std::abs(b(x + 1) - b(x - 1));

    auto m = [&](int x) { return (x < 0 || x >= width) ? 0.0 : mag[static_cast<std::size_t>(x)]; };
    std::vector<double> thin(static_cast<std::size_t>(width), 0.0);
    for (int x = 0; x < width; ++x) {
        if (m(x) > 0.0 && m(x) >= m(x - 1) && m(x) > m(x + 1)) thin[static_cast<std::size_t>(x)] = m(x);
    }

    std::vector<int> strong;
    std::vector<int> out;
    for (int x = 0; x < width; ++x) {
        if (thin[static_cast<std::size_t>(x)] >= high) strong.push_back(x);
    }
    // Grow along x: weak columns adjacent to an accepted column join it.
    std::vector<char> accepted(static_cast<std::size_t>(width), 0);
    std::vector<int> stack = strong;
    for (int x : strong) accepted[static_cast<std::size_t>(x)] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int nx : {x - 1, x + 1}) {
            if (nx < 0 || nx >= width) continue;
            if (!accepted[static_cast<std::size_t>(nx)] && thin[static_cast<std::size_t>(nx)] >= low) {
                accepted[static_cast<std::size_t>(nx)] = 1;
                stack.push_back(nx);
            }
        }
    }
    for (int x = 0; x < width; ++x)
        if (accepted[static_cast<std::size_t>(x)]) out.push_back(x);
    return out;
}

EdgeMap make_edge_map(const std::vector<std::uint8_t>& mask, int w, int h) {
    EdgeMap map(w, h);
    map.mask = mask;
    return map;
}

// Horizontal full-width line of rows [y0, y0+thickness) set to 1.
void add_line(std::vector<std::uint8_t>& mask, int w, int y0, int thickness = 1) {
    for (int t = 0; t < thickness; ++t)
        for (int x = 0; x < w; ++x) mask[static_cast<std::size_t>(y0 + t) * w + x] = 1;
}

} // namespace

TEST_SUITE("edge") {

TEST_CASE("uniform image produces an empty edge map") {
    ImageRGB img = uniform_image(64, 48, 180, 90, 45);
    EdgeMap edges = detect_edges(img);
    CHECK(edges.count() == 0);
    for (const auto& channel : edges.channel_masks) {
        CHECK(std::count(channel.begin(), channel.end(), 1) == 0);
    }
}

TEST_CASE("red-only step appears in the red channel mask only") {
    // G and B are constant; R steps 0 -> 240 (a full-height vertical edge).
    ImageRGB img(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            img.set_pixel(x, y, x < 32 ? 0 : 240, 80, 80);

    EdgeMap edges = detect_edges(img);
    CHECK(edges.count() > 0);
    CHECK(edges.channel_masks[0] == edges.mask); // union == R mask
    CHECK(std::count(edges.channel_masks[1].begin(), edges.channel_masks[1].end(), 1) == 0);
    CHECK(std::count(edges.channel_masks[2].begin(), edges.channel_masks[2].end(), 1) == 0);
}

TEST_CASE("black/white vertical step yields one thin line in all channels") {
    // Black -> mid-grey column -> white. The mid column makes the gradient
    // magnitude peak unique, so NMS has no tie to break.
    std::vector<double> profile(16, 255.0);
    for (int x = 0; x < 8; ++x) profile[static_cast<std::size_t>(x)] = 0.0;
    profile[8] = 128.0;

    ImageRGB img(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            const std::uint8_t v = static_cast<std::uint8_t>(profile[static_cast<std::size_t>(x)]);
            img.set_pixel(x, y, v, v, v);
        }

    EdgeMap edges = detect_edges(img);
    // Which columns should fire was computed independently above.
    std::vector<int> expected_cols = oracle_step_columns(profile, 50.0, 150.0);
    REQUIRE(!expected_cols.empty());
    CHECK(expected_cols.size() == 1); // NMS thins the transition to its peak column
    CHECK(expected_cols[0] == 8);     // the mid-grey column carries the steepest gradient

    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            bool expected = std::find(expected_cols.begin(), expected_cols.end(), x) !=
                            expected_cols.end();
            CHECK(edges.mask[edges.index(x, y)] == (expected ? 1 : 0));
        }
    }
    CHECK(edges.channel_masks[0] == edges.mask);
    CHECK(edges.channel_masks[1] == edges.mask);
    CHECK(edges.channel_masks[2] == edges.mask);
}

TEST_CASE("gentle gradients stay below the hysteresis thresholds") {
    // A 0..255 ramp across 64 columns has ~4 levels/px of gradient.
    ImageRGB img(64, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 64; ++x) {
            std::uint8_t v = static_cast<std::uint8_t>(x * 255 / 63);
            img.set_pixel(x, y, v, v, v);
        }
    CHECK(detect_edges(img).count() == 0);
}

TEST_CASE("canny_channel respects custom thresholds") {
    // A 0 -> 128 step peaks near 0.64 * 128 = 82: invisible at 150, visible
    // when the strong threshold drops below the peak.
    std::vector<std::uint8_t> plane(16 * 16, 0);
    for (int y = 0; y < 16; ++y)
        for (int x = 8; x < 16; ++x) plane[static_cast<std::size_t>(y) * 16 + x] = 128;

    auto strict = canny_channel(plane, 16, 16, 50.0, 150.0);
    CHECK(std::count(strict.begin(), strict.end(), 1) == 0);
    auto relaxed = canny_channel(plane, 16, 16, 30.0, 75.0);
    CHECK(std::count(relaxed.begin(), relaxed.end(), 1) > 0);
}

TEST_CASE("label_components separates lines and joins diagonals") {
    const int w = 16, h = 16;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    add_line(mask, w, 2);
    add_line(mask, w, 10);
    auto labels = label_components(mask, w, h);
    CHECK(labels[static_cast<std::size_t>(2) * w + 3] != 0);
    CHECK(labels[static_cast<std::size_t>(10) * w + 3] != 0);
    CHECK(labels[static_cast<std::size_t>(2) * w + 3] != labels[static_cast<std::size_t>(10) * w + 3]);
    CHECK(labels[static_cast<std::size_t>(2) * w + 3] == labels[static_cast<std::size_t>(2) * w + 12]);

    // Diagonal corner contact is 8-connected: one component.
    std::vector<std::uint8_t> diag(static_cast<std::size_t>(w) * h, 0);
    diag[static_cast<std::size_t>(3) * w + 3] = 1;
    diag[static_cast<std::size_t>(4) * w + 4] = 1;
    diag[static_cast<std::size_t>(5) * w + 3] = 1;
    auto dl = label_components(diag, w, h);
    CHECK(dl[static_cast<std::size_t>(3) * w + 3] == dl[static_cast<std::size_t>(4) * w + 4]);
    CHECK(dl[static_cast<std::size_t>(4) * w + 4] == dl[static_cast<std::size_t>(5) * w + 3]);
}

TEST_CASE("empty edge map scores zero with an all-black overlay") {
    EdgeMap edges(32, 20);
    CongestionResult result = edge_congestion(edges, 4);
    CHECK(result.score == 0.0);
    CHECK(result.edge_pixels == 0);
    CHECK(result.congested_pixels == 0);
    REQUIRE(result.overlay.width == 32);
    REQUIRE(result.overlay.height == 20);
    CHECK(std::count(result.overlay.data.begin(), result.overlay.data.end(), 0) ==
          static_cast<long>(result.overlay.data.size()));
}

TEST_CASE("an isolated line has no congestion") {
    const int w = 48, h = 32;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    add_line(mask, w, 15);
    CongestionResult result = edge_congestion(make_edge_map(mask, w, h), 4);
    CHECK(result.score == 0.0);
    CHECK(result.edge_pixels == w);
    CHECK(result.congested_pixels == 0);
}

TEST_CASE("two parallel lines three pixels apart are fully congested") {
    const int w = 48, h = 32;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    add_line(mask, w, 10);
    add_line(mask, w, 13); // Chebyshev distance 3 <= 4, gap 2 keeps them separate
    CongestionResult result = edge_congestion(make_edge_map(mask, w, h), 4);
    CHECK(result.score == 1.0);
    CHECK(result.edge_pixels == 2 * w);
    CHECK(result.congested_pixels == 2 * w);
    CHECK(result.congested == oracle_congested(mask, w, h, 4));

    // Overlay shows exactly the congested pixels in white.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            CHECK(result.overlay.at(x, y) ==
                  (result.congested[static_cast<std::size_t>(y) * w + x] ? 255 : 0));
}

TEST_CASE("lines just outside the distance are not congested") {
    const int w = 48, h = 32;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
    add_line(mask, w, 10);
    add_line(mask, w, 15); // Chebyshev distance 5 > 4
    CongestionResult result = edge_congestion(make_edge_map(mask, w, h), 4);
    CHECK(result.score == 0.0);
    // ... but they are congested once the distance allows it.
    CHECK(edge_congestion(make_edge_map(mask, w, h), 5).score == 1.0);
}

TEST_CASE("random edge maps match the all-pairs oracle exactly") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 57);  // 8..64
        const int h = 8 + static_cast<int>(rng() % 57);
        const int d = 1 + static_cast<int>(rng() % 8);   // 1..8
        const double density = 0.02 + 0.18 * (static_cast<double>(rng() % 1000) / 1000.0);
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (auto& v : mask) v = uni(rng) < density ? 1 : 0;

        CongestionResult result = edge_congestion(make_edge_map(mask, w, h), d);
        std::vector<std::uint8_t> expected = oracle_congested(mask, w, h, d);
        REQUIRE_MESSAGE(result.congested == expected,
                        "trial " << trial << " (" << w << "x" << h << ", d=" << d << ")");

        long long edge_count = std::count(mask.begin(), mask.end(), 1);
        long long congested_count = std::count(expected.begin(), expected.end(), 1);
        CHECK(result.edge_pixels == edge_count);
        CHECK(result.congested_pixels == congested_count);
        if (edge_count > 0) {
            CHECK(result.score ==
                  doctest::Approx(static_cast<double>(congested_count) / edge_count));
        } else {
            CHECK(result.score == 0.0);
        }
    }
}

TEST_CASE("congestion is monotone in the distance parameter") {
    std::mt19937 rng(99);
    std::vector<std::uint8_t> mask(64 * 64, 0);
    for (auto& v : mask) v = (rng() % 100) < 7 ? 1 : 0;
    EdgeMap edges = make_edge_map(mask, 64, 64);
    double previous = 0.0;
    for (int d = 1; d <= 10; ++d) {
        double score = edge_congestion(edges, d).score;
        CHECK(score >= previous);
        previous = score;
    }
}

} // TEST_SUITE
