#include "vizqm/saliency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace vizqm {

namespace detail {

namespace {
constexpr double kPi = 3.14159265358979323846;

inline double clamped(const Plane& p, int x, int y) {
    x = std::clamp(x, 0, p.width - 1);
    y = std::clamp(y, 0, p.height - 1);
    return p.v[static_cast<size_t>(y) * p.width + x];
}
} // namespace

Plane pyr_down(const Plane& src) {
    static const std::array<double, 5> k = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
    Plane blur_x(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int i = -2; i <= 2; ++i) acc += k[static_cast<size_t>(i + 2)] * clamped(src, x + i, y);
            blur_x.at(x, y) = acc;
        }
    }
    Plane blur(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int i = -2; i <= 2; ++i) acc += k[static_cast<size_t>(i + 2)] * clamped(blur_x, x, y + i);
            blur.at(x, y) = acc;
        }
    }
    int out_w = std::max(1, (src.width + 1) / 2);
    int out_h = std::max(1, (src.height + 1) / 2);
    Plane out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            out.at(x, y) = blur.at(std::min(2 * x, src.width - 1), std::min(2 * y, src.height - 1));
        }
    }
    return out;
}

Plane resize_plane(const Plane& src, int out_w, int out_h) {
    Plane out(out_w, out_h);
    if (src.width == out_w && src.height == out_h) {
        out.v = src.v;
        return out;
    }
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int y1 = std::clamp(y0 + 1, 0, src.height - 1);
        y0 = std::clamp(y0, 0, src.height - 1);
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int x1 = std::clamp(x0 + 1, 0, src.width - 1);
            x0 = std::clamp(x0, 0, src.width - 1);
            double top = src.at(x0, y0) * (1.0 - wx) + src.at(x1, y0) * wx;
            double bot = src.at(x0, y1) * (1.0 - wx) + src.at(x1, y1) * wx;
            out.at(x, y) = top * (1.0 - wy) + bot * wy;
        }
    }
    return out;
}

Plane normalize_map(const Plane& map) {
    Plane out(map.width, map.height);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : map.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) return out; // constant map -> all zero
    const double range = hi - lo;
    for (size_t i = 0; i < map.v.size(); ++i) out.v[i] = (map.v[i] - lo) / range;

    // Mean of local maxima over non-overlapping 8x8 blocks (smaller tail
    // blocks included), excluding the first block that attains the global
    // maximum of 1.
    double sum = 0.0;
    int count = 0;
    bool global_seen = false;
    for (int by = 0; by < map.height; by += 8) {
        for (int bx = 0; bx < map.width; bx += 8) {
            double block_max = 0.0;
            for (int y = by; y < std::min(by + 8, map.height); ++y) {
                for (int x = bx; x < std::min(bx + 8, map.width); ++x) {
                    block_max = std::max(block_max, out.at(x, y));
                }
            }
            if (!global_seen && block_max >= 1.0) {
                global_seen = true;
                continue;
            }
            sum += block_max;
            ++count;
        }
    }
    const double mean_local = count > 0 ? sum / count : 0.0;
    const double weight = (1.0 - mean_local) * (1.0 - mean_local);
    for (double& v : out.v) v *= weight;
    return out;
}

Plane gabor_response(const Plane& src, double theta_radians) {
    constexpr int kHalf = 4; // 9x9 kernel
    constexpr double lambda = 7.0;
    constexpr double sigma = 2.8;
    constexpr double gamma = 1.0;
    double kernel[2 * kHalf + 1][2 * kHalf + 1];
    double mean = 0.0;
    const double ct = std::cos(theta_radians), st = std::sin(theta_radians);
    for (int y = -kHalf; y <= kHalf; ++y) {
        for (int x = -kHalf; x <= kHalf; ++x) {
            double xr = x * ct + y * st;
            double yr = -x * st + y * ct;
            double g = std::exp(-(xr * xr + gamma * gamma * yr * yr) / (2.0 * sigma * sigma)) *
                       std::cos(2.0 * kPi * xr / lambda);
            kernel[y + kHalf][x + kHalf] = g;
            mean += g;
        }
    }
    mean /= (2 * kHalf + 1) * (2 * kHalf + 1);
    for (auto& row : kernel)
        for (double& v : row) v -= mean; // zero response to constant input

    Plane out(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double acc = 0.0;
            for (int ky = -kHalf; ky <= kHalf; ++ky) {
                for (int kx = -kHalf; kx <= kHalf; ++kx) {
                    acc += kernel[ky + kHalf][kx + kHalf] * clamped(src, x + kx, y + ky);
                }
            }
            out.at(x, y) = std::abs(acc);
        }
    }
    return out;
}

} // namespace detail

namespace {

using detail::gabor_response;
using detail::normalize_map;
using detail::pyr_down;
using detail::resize_plane;

constexpr double kPi = 3.14159265358979323846;
constexpr int kPyramidLevels = 9; // levels 0..8
constexpr int kCombineLevel = 4;  // across-scale addition target

std::array<Plane, kPyramidLevels> build_pyramid(Plane base) {
    std::array<Plane, kPyramidLevels> pyr;
    pyr[0] = std::move(base);
    for (size_t l = 1; l < kPyramidLevels; ++l) pyr[l] = pyr_down(pyr[l - 1]);
    return pyr;
}

Plane abs_difference(const Plane& center, const Plane& surround) {
    Plane up = resize_plane(surround, center.width, center.height);
    Plane out(center.width, center.height);
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = std::abs(center.v[i] - up.v[i]);
    return out;
}

void add_into(Plane& acc, const Plane& term) {
    Plane r = resize_plane(term, acc.width, acc.height);
    for (size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += r.v[i];
}

struct CenterSurroundPair {
    int c, s;
};
// c in {2,3,4}, s = c + delta, delta in {3,4}.
constexpr std::array<CenterSurroundPair, 6> kPairs = {{{2, 5}, {2, 6}, {3, 6}, {3, 7}, {4, 7}, {4, 8}}};

} // namespace

SaliencyMap compute_saliency(const ImageRGB& image) {
    SaliencyMap result;

    // Upscale small inputs so the 9-level pyramid keeps meaningful coarse
    // levels; the map is produced at the analyzed raster.
    ImageRGB analyzed = image;
    while (std::min(analyzed.width, analyzed.height) < 128) {
        analyzed = resize_bilinear(analyzed, analyzed.width * 2, analyzed.height * 2);
    }
    const int w = analyzed.width, h = analyzed.height;
    const size_t n = static_cast<size_t>(w) * h;
    result.width = w;
    result.height = h;
    result.values.assign(n, 0);

    bool constant = true;
    for (size_t i = 3; i < n * 3; ++i) {
        if (analyzed.data[i] != analyzed.data[i % 3]) {
            constant = false;
            break;
        }
    }
    if (constant) {
        result.degenerate = true;
        return result;
    }

    // Base channels: intensity, plus broadly tuned R, G, B, Y built from
    // hue-normalized r, g, b (normalization applied only where intensity
    // exceeds a tenth of its maximum, elsewhere zero).
    Plane intensity(w, h);
    double max_i = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = analyzed.data[i * 3 + 0];
        double g = analyzed.data[i * 3 + 1];
        double b = analyzed.data[i * 3 + 2];
        intensity.v[i] = (r + g + b) / 3.0;
        max_i = std::max(max_i, intensity.v[i]);
    }
    const double cutoff = max_i / 10.0;
    Plane cr(w, h), cg(w, h), cb(w, h), cy(w, h);
    for (size_t i = 0; i < n; ++i) {
        double in = intensity.v[i];
        double r = 0.0, g = 0.0, b = 0.0;
        if (in > cutoff) {
            r = analyzed.data[i * 3 + 0] / in;
            g = analyzed.data[i * 3 + 1] / in;
            b = analyzed.data[i * 3 + 2] / in;
        }
        cr.v[i] = std::max(0.0, r - (g + b) / 2.0);
        cg.v[i] = std::max(0.0, g - (r + b) / 2.0);
        cb.v[i] = std::max(0.0, b - (r + g) / 2.0);
        cy.v[i] = std::max(0.0, (r + g) / 2.0 - std::abs(r - g) / 2.0 - b);
    }

    auto ipyr = build_pyramid(std::move(intensity));
    auto rpyr = build_pyramid(std::move(cr));
    auto gpyr = build_pyramid(std::move(cg));
    auto bpyr = build_pyramid(std::move(cb));
    auto ypyr = build_pyramid(std::move(cy));

    const int cw = ipyr[kCombineLevel].width, ch = ipyr[kCombineLevel].height;

    // Intensity conspicuity.
    Plane ibar(cw, ch);
    for (auto [c, s] : kPairs) {
        add_into(ibar, normalize_map(abs_difference(ipyr[static_cast<size_t>(c)],
                                                    ipyr[static_cast<size_t>(s)])));
    }

    // Colour conspicuity from red-green and blue-yellow opponency: the
    // center carries one pole, the surround the opposite pole.
    Plane cbar(cw, ch);
    for (auto [c, s] : kPairs) {
        auto uc = static_cast<size_t>(c), us = static_cast<size_t>(s);
        Plane rg_c(rpyr[uc].width, rpyr[uc].height);
        for (size_t i = 0; i < rg_c.v.size(); ++i) rg_c.v[i] = rpyr[uc].v[i] - gpyr[uc].v[i];
        Plane gr_s(rpyr[us].width, rpyr[us].height);
        for (size_t i = 0; i < gr_s.v.size(); ++i) gr_s.v[i] = gpyr[us].v[i] - rpyr[us].v[i];
        add_into(cbar, normalize_map(abs_difference(rg_c, gr_s)));

        Plane by_c(bpyr[uc].width, bpyr[uc].height);
        for (size_t i = 0; i < by_c.v.size(); ++i) by_c.v[i] = bpyr[uc].v[i] - ypyr[uc].v[i];
        Plane yb_s(bpyr[us].width, bpyr[us].height);
        for (size_t i = 0; i < yb_s.v.size(); ++i) yb_s.v[i] = ypyr[us].v[i] - bpyr[us].v[i];
        add_into(cbar, normalize_map(abs_difference(by_c, yb_s)));
    }

    // Orientation conspicuity: Gabor magnitude on intensity pyramid levels,
    // one across-scale sum per angle (normalized), then the per-angle sums
    // are normalized and added.
    Plane obar(cw, ch);
    for (int t = 0; t < 4; ++t) {
        const double theta = static_cast<double>(t) * kPi / 4.0; // 0, 45, 90, 135 degrees
        std::array<Plane, kPyramidLevels> opyr;
        for (auto [c, s] : kPairs) {
            auto uc = static_cast<size_t>(c), us = static_cast<size_t>(s);
            if (opyr[uc].v.empty()) opyr[uc] = gabor_response(ipyr[uc], theta);
            if (opyr[us].v.empty()) opyr[us] = gabor_response(ipyr[us], theta);
        }
        Plane angle_sum(cw, ch);
        for (auto [c, s] : kPairs) {
            add_into(angle_sum, normalize_map(abs_difference(opyr[static_cast<size_t>(c)],
                                                             opyr[static_cast<size_t>(s)])));
        }
        add_into(obar, normalize_map(angle_sum));
    }

    Plane ibar_n = normalize_map(ibar);
    Plane cbar_n = normalize_map(cbar);
    Plane obar_n = normalize_map(obar);
    result.intensity_conspicuity = ibar_n;
    result.color_conspicuity = cbar_n;
    result.orientation_conspicuity = obar_n;

    Plane fused(cw, ch);
    for (size_t i = 0; i < fused.v.size(); ++i) {
        fused.v[i] = (ibar_n.v[i] + cbar_n.v[i] + obar_n.v[i]) / 3.0;
    }

    Plane full = resize_plane(fused, w, h);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : full.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
        result.degenerate = true;
        return result;
    }
    for (size_t i = 0; i < n; ++i) {
        result.values[i] = quantize8((full.v[i] - lo) / (hi - lo) * 255.0);
    }
    return result;
}

SaliencyScore saliency_score(const SaliencyMap& map, const AnalysisConfig& cfg) {
    SaliencyScore score;
    score.threshold = cfg.saliency_threshold;
    score.mask.assign(map.values.size(), 0);
    long long salient = 0;
    for (size_t i = 0; i < map.values.size(); ++i) {
        if (map.values[i] >= cfg.saliency_threshold) {
            score.mask[i] = 1;
            ++salient;
        }
    }
    score.s_sy = map.values.empty()
                     ? 0.0
                     : static_cast<double>(salient) / static_cast<double>(map.values.size());
    return score;
}

} // namespace vizqm
