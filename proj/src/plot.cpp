#include "vizqm/plot.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace vizqm {

namespace {

// 5x7 bitmap glyphs; 7 rows per glyph, low 5 bits used, bit 4 = leftmost.
struct Glyph {
    char ch;
    std::array<std::uint8_t, 7> rows;
};

constexpr Glyph kGlyphs[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'%', {0x19, 0x1A, 0x02, 0x04, 0x08, 0x0B, 0x13}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
};

const Glyph* find_glyph(char c) {
    char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const Glyph& g : kGlyphs) {
        if (g.ch == up) return &g;
    }
    return nullptr;
}

void fill_rect(ImageRGB& canvas, int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
               std::uint8_t b) {
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, canvas.width - 1);
    y1 = std::min(y1, canvas.height - 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) canvas.set_pixel(x, y, r, g, b);
    }
}

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Plot geometry: title band on top, axis labels below the frame.
constexpr int kMarginLeft = 12;
constexpr int kMarginRight = 12;
constexpr int kMarginTop = 26;
constexpr int kMarginBottom = 26;

} // namespace

int text_width(const std::string& text, int scale) {
    if (text.empty()) return 0;
    return static_cast<int>(text.size()) * 6 * scale - scale; // 5 px glyph + 1 px gap
}

void draw_text(ImageRGB& canvas, int x, int y, const std::string& text, std::uint8_t r,
               std::uint8_t g, std::uint8_t b, int scale) {
    int cx = x;
    for (char c : text) {
        if (const Glyph* glyph = find_glyph(c)) {
            for (int row = 0; row < 7; ++row) {
                for (int col = 0; col < 5; ++col) {
                    if (!(glyph->rows[static_cast<size_t>(row)] & (1 << (4 - col)))) continue;
                    fill_rect(canvas, cx + col * scale, y + row * scale, cx + col * scale + scale - 1,
                              y + row * scale + scale - 1, r, g, b);
                }
            }
        }
        cx += 6 * scale;
    }
}

int score_to_x(const RankingResult& result, double score) {
    const int x0 = kMarginLeft;
    const int x1 = kPlotWidth - kMarginRight - 1;
    if (result.bin_edges.size() < 2) return x0;
    const double lo = result.bin_edges.front();
    const double hi = result.bin_edges.back();
    if (!(hi > lo)) return (x0 + x1) / 2;
    const double t = std::clamp((score - lo) / (hi - lo), 0.0, 1.0);
    return x0 + static_cast<int>(std::lround(t * (x1 - x0)));
}

ImageRGB render_ranking(const RankingResult& result) {
    ImageRGB canvas(kPlotWidth, kPlotHeight);
    fill_rect(canvas, 0, 0, kPlotWidth - 1, kPlotHeight - 1, 255, 255, 255);

    const int x0 = kMarginLeft;
    const int x1 = kPlotWidth - kMarginRight - 1;
    const int y0 = kMarginTop;
    const int y1 = kPlotHeight - kMarginBottom - 1;

    std::string title = result.metric + "  N=" + std::to_string(result.corpus_size);
    if (result.percentile) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "  PCT=%.1f%%", *result.percentile * 100.0);
        title += buf;
    }
    draw_text(canvas, kMarginLeft, 6, title, 0, 0, 0, 2);

    // Frame.
    fill_rect(canvas, x0, y1 + 1, x1, y1 + 1, 0, 0, 0);
    fill_rect(canvas, x0 - 1, y0, x0 - 1, y1 + 1, 0, 0, 0);

    const double lo = result.bin_edges.empty() ? result.score : result.bin_edges.front();
    const double hi = result.bin_edges.empty() ? result.score : result.bin_edges.back();

    if (result.corpus_size == 0) {
        const std::string note = "NO CORPUS DATA";
        draw_text(canvas, (kPlotWidth - text_width(note, 2)) / 2, (y0 + y1) / 2 - 7, note, 96, 96,
                  96, 2);
    } else {
        std::int64_t max_count = 1;
        for (auto c : result.counts) max_count = std::max(max_count, c);
        const double span = hi - lo;
        for (size_t bin = 0; bin < result.counts.size(); ++bin) {
            if (result.counts[bin] <= 0) continue;
            double e0 = result.bin_edges[bin];
            double e1 = result.bin_edges[bin + 1];
            int bx0, bx1;
            if (span > 0) {
                bx0 = x0 + static_cast<int>(std::lround((e0 - lo) / span * (x1 - x0)));
                bx1 = x0 + static_cast<int>(std::lround((e1 - lo) / span * (x1 - x0)));
            } else {
                bx0 = x0;
                bx1 = x1;
            }
            if (bx1 > bx0 + 1) --bx1; // 1 px gap between adjacent bars
            int bar_h = static_cast<int>(std::lround(
                static_cast<double>(result.counts[bin]) / static_cast<double>(max_count) * (y1 - y0)));
            bar_h = std::max(bar_h, 1);
            fill_rect(canvas, bx0, y1 - bar_h + 1, bx1, y1, 160, 160, 160);
        }
    }

    // Submission marker: a pure green vertical line.
    const int gx = score_to_x(result, result.score);
    fill_rect(canvas, gx, y0, gx, y1, 0, 255, 0);

    // Range labels under the axis.
    draw_text(canvas, x0, y1 + 6, format_value(lo), 0, 0, 0, 1);
    const std::string hi_label = format_value(hi);
    draw_text(canvas, x1 - text_width(hi_label, 1), y1 + 6, hi_label, 0, 0, 0, 1);

    return canvas;
}

} // namespace vizqm
