#pragma once

#include "vizqm/image.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vizqm {

enum class CvdKind { deuteranomaly, protanomaly, tritanomaly };

const char* cvd_kind_name(CvdKind kind);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// 3x3 linear-RGB transforms for each deficiency kind at severities
/// 0.0 .. 1.0 in 0.1 steps, loaded from a versioned data file.
class CvdMatrixTable {
  public:
    /// Load from `<data_dir>/cvd_machado_2009.json`; validates that severity
    /// 0.0 is the identity and that every matrix row sums to 1 +/- 1e-3.
    /// Throws missing_matrix_data on absent/corrupt data.
    static CvdMatrixTable load(const std::string& data_dir);

    /// Matrix for the severity step nearest to `severity`.
    const Matrix3& matrix(CvdKind kind, double severity) const;

    int table_version() const { return version_; }

  private:
    std::array<std::array<Matrix3, 11>, 3> matrices_{}; // [kind][severity step]
    int version_ = 0;
};

struct WaveEntry {
    std::string name;
    std::array<std::uint8_t, 3> rgb{};
    double rating = 0.0;
};

/// Berkeley Color Project palette with mean preference ratings.
class WaveTable {
  public:
    /// Load from `<data_dir>/wave_bcp32.json`; validates 32 entries with a
    /// nonzero rating range. Throws missing_wave_data on absent/corrupt data.
    static WaveTable load(const std::string& data_dir);

    const std::vector<WaveEntry>& entries() const { return entries_; }
    double min_rating() const { return min_rating_; }
    double max_rating() const { return max_rating_; }
    int table_version() const { return version_; }

    /// Index of the nearest palette colour by Euclidean RGB distance;
    /// ties resolve to the lowest index.
    std::size_t nearest(std::uint8_t r, std::uint8_t g, std::uint8_t b) const;

  private:
    std::vector<WaveEntry> entries_;
    std::vector<int> packed_rgb_; // entries_[i].rgb flattened for the hot scan
    double min_rating_ = 0.0;
    double max_rating_ = 0.0;
    int version_ = 0;
};

/// sRGB-decode, apply the (kind, severity) matrix in linear RGB, clamp,
/// re-encode. Severity comes from cfg.cvd_severity (nearest 0.1 step).
ImageRGB simulate_cvd(const ImageRGB& image, CvdKind kind, const CvdMatrixTable& table,
                      const AnalysisConfig& cfg);

/// Grayscale "print/fax" panel.
ImageGray monochrome_view(const ImageRGB& image);

/// Mean palette preference rating over all pixels, min-max normalized by the
/// table's rating range into [0,1].
double wave_score(const ImageRGB& image, const WaveTable& table);

/// Hasler-Suesstrunk colourfulness on 8-bit RGB: rg = R-G,
/// yb = (R+G)/2 - B, score = sqrt(var_rg + var_yb)
/// + 0.3 * sqrt(mean_rg^2 + mean_yb^2) with population statistics.
double colorfulness(const ImageRGB& image);

} // namespace vizqm
