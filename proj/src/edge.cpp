#include "vizqm/edge.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vizqm {

namespace {

// 7-tap Gaussian (sigma = 1.0), samples at offsets -3..3, normalized to sum 1.
std::array<double, 7> gaussian_kernel_sigma1() {
    std::array<double, 7> k{};
    double sum = 0.0;
    for (int i = -3; i <= 3; ++i) {
        double v = std::exp(-(i * i) / 2.0);
        k[static_cast<size_t>(i + 3)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable Gaussian blur with replicate borders, double plane in/out.
std::vector<double> gaussian_blur(const std::vector<double>& src, int width, int height) {
    static const std::array<double, 7> kernel = gaussian_kernel_sigma1();
    std::vector<double> tmp(src.size(), 0.0);
    std::vector<double> dst(src.size(), 0.0);
    for (int y = 0; y < height; ++y) {
        const double* row = src.data() + static_cast<size_t>(y) * width;
        double* out = tmp.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -3; i <= 3; ++i) {
                int xx = std::clamp(x + i, 0, width - 1);
                acc += kernel[static_cast<size_t>(i + 3)] * row[xx];
            }
            out[x] = acc;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -3; i <= 3; ++i) {
                int yy = std::clamp(y + i, 0, height - 1);
                acc += kernel[static_cast<size_t>(i + 3)] * tmp[static_cast<size_t>(yy) * width + x];
            }
            dst[static_cast<size_t>(y) * width + x] = acc;
        }
    }
    return dst;
}

inline double plane_at(const std::vector<double>& p, int width, int height, int x, int y) {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return p[static_cast<size_t>(y) * width + x];
}

} // namespace

std::vector<std::uint8_t> canny_channel(const std::vector<std::uint8_t>& plane,
                                        int width, int height,
                                        double low_threshold, double high_threshold) {
    const size_t n = static_cast<size_t>(width) * height;
    std::vector<double> input(n);
    for (size_t i = 0; i < n; ++i) input[i] = static_cast<double>(plane[i]);

    std::vector<double> smooth = gaussian_blur(input, width, height);

    // Sobel gradients, replicate border. Magnitude is divided by 4 so that a
    // full 0-255 step lands on the 0-255 scale the hysteresis thresholds use.
    std::vector<double> mag(n, 0.0);
    std::vector<double> gxv(n, 0.0), gyv(n, 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double p00 = plane_at(smooth, width, height, x - 1, y - 1);
            double p10 = plane_at(smooth, width, height, x, y - 1);
            double p20 = plane_at(smooth, width, height, x + 1, y - 1);
            double p01 = plane_at(smooth, width, height, x - 1, y);
            double p21 = plane_at(smooth, width, height, x + 1, y);
            double p02 = plane_at(smooth, width, height, x - 1, y + 1);
            double p12 = plane_at(smooth, width, height, x, y + 1);
            double p22 = plane_at(smooth, width, height, x + 1, y + 1);
            double gx = (p20 + 2.0 * p21 + p22) - (p00 + 2.0 * p01 + p02);
            double gy = (p02 + 2.0 * p12 + p22) - (p00 + 2.0 * p10 + p20);
            size_t idx = static_cast<size_t>(y) * width + x;
            gxv[idx] = gx;
            gyv[idx] = gy;
            mag[idx] = std::sqrt(gx * gx + gy * gy) / 4.0;
        }
    }

    // Non-maximum suppression. The gradient direction is quantized to one of
    // four axes; a pixel survives when its magnitude is >= the neighbour on
    // the negative side and strictly > the neighbour on the positive side,
    // which thins a two-pixel plateau (symmetric step edge) to one pixel.
    auto mag_at = [&](int x, int y) -> double {
        if (x < 0 || x >= width || y < 0 || y >= height) return 0.0;
        return mag[static_cast<size_t>(y) * width + x];
    };
    std::vector<double> thin(n, 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            size_t idx = static_cast<size_t>(y) * width + x;
            double m = mag[idx];
            if (m <= 0.0) continue;
            double angle = std::atan2(gyv[idx], gxv[idx]) * 180.0 / 3.14159265358979323846;
            if (angle < 0.0) angle += 180.0;
            int dx, dy;
            if (angle < 22.5 || angle >= 157.5) {
                dx = 1; dy = 0;                 // horizontal gradient, vertical edge
            } else if (angle < 67.5) {
                dx = 1; dy = 1;                 // down-right diagonal
            } else if (angle < 112.5) {
                dx = 0; dy = 1;                 // vertical gradient, horizontal edge
            } else {
                dx = -1; dy = 1;                // down-left diagonal
            }
            double before = mag_at(x - dx, y - dy);
            double after = mag_at(x + dx, y + dy);
            if (m >= before && m > after) thin[idx] = m;
        }
    }

    // Hysteresis: seed from strong pixels, grow through 8-connected weak ones.
    std::vector<std::uint8_t> mask(n, 0);
    std::vector<size_t> stack;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            size_t idx = static_cast<size_t>(y) * width + x;
            if (thin[idx] >= high_threshold && !mask[idx]) {
                mask[idx] = 1;
                stack.push_back(idx);
                while (!stack.empty()) {
                    size_t cur = stack.back();
                    stack.pop_back();
                    int cx = static_cast<int>(cur % width);
                    int cy = static_cast<int>(cur / width);
                    for (int oy = -1; oy <= 1; ++oy) {
                        for (int ox = -1; ox <= 1; ++ox) {
                            if (ox == 0 && oy == 0) continue;
                            int nx = cx + ox, ny = cy + oy;
                            if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
                            size_t nidx = static_cast<size_t>(ny) * width + nx;
                            if (!mask[nidx] && thin[nidx] >= low_threshold) {
                                mask[nidx] = 1;
                                stack.push_back(nidx);
                            }
                        }
                    }
                }
            }
        }
    }
    return mask;
}

EdgeMap detect_edges(const ImageRGB& image) {
    EdgeMap edges(image.width, image.height);
    const size_t n = static_cast<size_t>(image.width) * image.height;
    for (int c = 0; c < 3; ++c) {
        std::vector<std::uint8_t> plane(n);
        for (size_t i = 0; i < n; ++i) plane[i] = image.data[i * 3 + static_cast<size_t>(c)];
        edges.channel_masks[static_cast<size_t>(c)] =
            canny_channel(plane, image.width, image.height);
    }
    for (size_t i = 0; i < n; ++i) {
        edges.mask[i] = (edges.channel_masks[0][i] | edges.channel_masks[1][i] |
                         edges.channel_masks[2][i])
                            ? 1
                            : 0;
    }
    return edges;
}

std::vector<std::int32_t> label_components(const std::vector<std::uint8_t>& mask,
                                           int width, int height) {
    std::vector<std::int32_t> labels(mask.size(), 0);
    std::int32_t next = 0;
    std::vector<size_t> stack;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            size_t idx = static_cast<size_t>(y) * width + x;
            if (!mask[idx] || labels[idx]) continue;
            ++next;
            labels[idx] = next;
            stack.push_back(idx);
            while (!stack.empty()) {
                size_t cur = stack.back();
                stack.pop_back();
                int cx = static_cast<int>(cur % width);
                int cy = static_cast<int>(cur / width);
                for (int oy = -1; oy <= 1; ++oy) {
                    for (int ox = -1; ox <= 1; ++ox) {
                        if (ox == 0 && oy == 0) continue;
                        int nx = cx + ox, ny = cy + oy;
                        if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
                        size_t nidx = static_cast<size_t>(ny) * width + nx;
                        if (mask[nidx] && !labels[nidx]) {
                            labels[nidx] = next;
                            stack.push_back(nidx);
                        }
                    }
                }
            }
        }
    }
    return labels;
}

CongestionResult edge_congestion(const EdgeMap& edges, int distance) {
    CongestionResult result;
    const int w = edges.width, h = edges.height;
    result.congested.assign(edges.mask.size(), 0);
    result.overlay = ImageGray(w, h);

    std::vector<std::int32_t> labels = label_components(edges.mask, w, h);

    long long edge_count = 0;
    long long congested_count = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t idx = static_cast<size_t>(y) * w + x;
            if (!edges.mask[idx]) continue;
            ++edge_count;
            std::int32_t own = labels[idx];
            bool congested = false;
            for (int oy = -distance; oy <= distance && !congested; ++oy) {
                int ny = y + oy;
                if (ny < 0 || ny >= h) continue;
                for (int ox = -distance; ox <= distance; ++ox) {
                    int nx = x + ox;
                    if (nx < 0 || nx >= w) continue;
                    size_t nidx = static_cast<size_t>(ny) * w + nx;
                    if (edges.mask[nidx] && labels[nidx] != own) {
                        congested = true;
                        break;
                    }
                }
            }
            if (congested) {
                result.congested[idx] = 1;
                result.overlay.set(x, y, 255);
                ++congested_count;
            }
        }
    }
    result.edge_pixels = edge_count;
    result.congested_pixels = congested_count;
    result.score = edge_count > 0 ? static_cast<double>(congested_count) / edge_count : 0.0;
    return result;
}

} // namespace vizqm
