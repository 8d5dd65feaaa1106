#pragma once

#include "vizqm/corpus.hpp"
#include "vizqm/image.hpp"

#include <string>

namespace vizqm {

constexpr int kPlotWidth = 640;
constexpr int kPlotHeight = 240;

/// Histogram of the corpus distribution for one metric: grey bars, a pure
/// green (0,255,0) vertical marker line at the submission's score, and text
/// labels for the metric name, corpus size, and value range. An empty corpus
/// renders with a "NO CORPUS DATA" annotation and no bars.
ImageRGB render_ranking(const RankingResult& result);

/// Affine map from a score value onto the plot's x axis (pixel column of the
/// marker line); exposed so the marker position is independently checkable.
int score_to_x(const RankingResult& result, double score);

/// Draw a string in the built-in 5x7 bitmap font (uppercased; unknown glyphs
/// render as blanks), top-left anchored, integer scale >= 1.
void draw_text(ImageRGB& canvas, int x, int y, const std::string& text,
               std::uint8_t r, std::uint8_t g, std::uint8_t b, int scale = 1);

/// Pixel width of a string rendered by draw_text at the given scale.
int text_width(const std::string& text, int scale = 1);

} // namespace vizqm
