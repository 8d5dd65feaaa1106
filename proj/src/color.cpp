#include "vizqm/color.hpp"
#include "vizqm/errors.hpp"
#include "vizqm/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vizqm {

namespace {

using nlohmann::json;

json parse_json_file(const std::string& path, Errc missing_code) {
    if (!path_exists(path)) {
        throw_error(missing_code, "data file not found: " + path);
    }
    json doc = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        throw_error(missing_code, "data file is not valid JSON: " + path);
    }
    return doc;
}

int severity_step_index(double severity) {
    const double clamped = std::clamp(severity, 0.0, 1.0);
    return static_cast<int>(std::lround(clamped * 10.0));
}

// srgb_encode_value is a monotone step function of the linear input, so its
// behaviour is fully described by the 255 plateau boundaries. Each boundary
// (the smallest double mapped to code value k+1) is found by bisecting the
// closed-form implementation itself, which makes table lookups reproduce it
// bit-for-bit while replacing a pow() per sample with a couple of compares.
struct EncodeTable {
    std::array<double, 255> boundary{};
    std::array<std::uint8_t, 4097> bucket_floor{}; // min code value per 1/4096 slice

    EncodeTable() {
        for (int k = 0; k < 255; ++k) {
            const int target = k + 1;
            double lo = 0.0, hi = 1.0; // encode(lo) < target <= encode(hi)
            while (true) {
                const double mid = lo + (hi - lo) * 0.5;
                if (mid <= lo || mid >= hi) break;
                if (srgb_encode_value(mid) >= target) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            boundary[static_cast<size_t>(k)] = hi;
        }
        for (int i = 0; i <= 4096; ++i) {
            bucket_floor[static_cast<size_t>(i)] =
                srgb_encode_value(static_cast<double>(i) / 4096.0);
        }
    }

    std::uint8_t encode(double linear) const {
        const double x = std::clamp(linear, 0.0, 1.0);
        const int i = std::min(4095, static_cast<int>(x * 4096.0));
        int v = bucket_floor[static_cast<size_t>(i)];
        // The steepest stretch of the curve spans < 1 code value per bucket,
        // so this advances at most twice.
        while (v < 255 && boundary[static_cast<size_t>(v)] <= x) ++v;
        return static_cast<std::uint8_t>(v);
    }
};

const EncodeTable& encode_table() {
    static const EncodeTable table;
    return table;
}

} // namespace

const char* cvd_kind_name(CvdKind kind) {
    switch (kind) {
        case CvdKind::deuteranomaly: return "deuteranomaly";
        case CvdKind::protanomaly:   return "protanomaly";
        case CvdKind::tritanomaly:   return "tritanomaly";
    }
    return "unknown";
}

CvdMatrixTable CvdMatrixTable::load(const std::string& data_dir) {
    const std::string path = data_dir + "/cvd_machado_2009.json";
    json doc = parse_json_file(path, Errc::missing_matrix_data);

    CvdMatrixTable table;
    try {
        table.version_ = doc.at("version").get<int>();
        const json& kinds = doc.at("kinds");
        const std::array<std::pair<CvdKind, const char*>, 3> kind_keys = {{
            {CvdKind::deuteranomaly, "deuteranomaly"},
            {CvdKind::protanomaly, "protanomaly"},
            {CvdKind::tritanomaly, "tritanomaly"},
        }};
        for (const auto& [kind, key] : kind_keys) {
            const json& steps = kinds.at(key);
            for (int step = 0; step <= 10; ++step) {
                char label[8];
                std::snprintf(label, sizeof(label), "%.1f", step / 10.0);
                const json& rows = steps.at(label);
                Matrix3 m{};
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 3; ++c) {
                        m[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                            rows.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
                    }
                }
                table.matrices_[static_cast<size_t>(kind)][static_cast<size_t>(step)] = m;
            }
        }
    } catch (const json::exception& e) {
        throw_error(Errc::missing_matrix_data,
                    std::string("malformed CVD matrix data in ") + path + ": " + e.what());
    }

    // Invariants: severity 0.0 is the identity; rows sum to 1 (grey axis).
    for (size_t k = 0; k < 3; ++k) {
        for (int step = 0; step <= 10; ++step) {
            const Matrix3& m = table.matrices_[k][static_cast<size_t>(step)];
            for (int r = 0; r < 3; ++r) {
                double row_sum = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double v = m[static_cast<size_t>(r)][static_cast<size_t>(c)];
                    row_sum += v;
                    if (step == 0) {
                        double expected = (r == c) ? 1.0 : 0.0;
                        if (std::abs(v - expected) > 1e-9) {
                            throw_error(Errc::missing_matrix_data,
                                        "severity 0.0 matrix is not the identity in " + path);
                        }
                    }
                }
                if (std::abs(row_sum - 1.0) > 1e-3) {
                    throw_error(Errc::missing_matrix_data,
                                "matrix row does not sum to 1 (grey axis broken) in " + path);
                }
            }
        }
    }
    return table;
}

const Matrix3& CvdMatrixTable::matrix(CvdKind kind, double severity) const {
    return matrices_[static_cast<size_t>(kind)][static_cast<size_t>(severity_step_index(severity))];
}

WaveTable WaveTable::load(const std::string& data_dir) {
    const std::string path = data_dir + "/wave_bcp32.json";
    json doc = parse_json_file(path, Errc::missing_wave_data);

    WaveTable table;
    try {
        table.version_ = doc.at("version").get<int>();
        for (const json& entry : doc.at("colors")) {
            WaveEntry e;
            e.name = entry.at("name").get<std::string>();
            for (size_t i = 0; i < 3; ++i) {
                int v = entry.at("rgb").at(i).get<int>();
                if (v < 0 || v > 255) {
                    throw_error(Errc::missing_wave_data, "palette RGB out of range in " + path);
                }
                e.rgb[i] = static_cast<std::uint8_t>(v);
            }
            e.rating = entry.at("rating").get<double>();
            table.entries_.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw_error(Errc::missing_wave_data,
                    std::string("malformed palette data in ") + path + ": " + e.what());
    }
    if (table.entries_.size() != 32) {
        throw_error(Errc::missing_wave_data, "palette must have exactly 32 entries: " + path);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& e : table.entries_) {
        lo = std::min(lo, e.rating);
        hi = std::max(hi, e.rating);
    }
    if (!(hi > lo)) {
        throw_error(Errc::missing_wave_data, "palette ratings span a zero range: " + path);
    }
    table.min_rating_ = lo;
    table.max_rating_ = hi;
    table.packed_rgb_.reserve(table.entries_.size() * 3);
    for (const auto& e : table.entries_) {
        table.packed_rgb_.push_back(e.rgb[0]);
        table.packed_rgb_.push_back(e.rgb[1]);
        table.packed_rgb_.push_back(e.rgb[2]);
    }
    return table;
}

std::size_t WaveTable::nearest(std::uint8_t r, std::uint8_t g, std::uint8_t b) const {
    // Max possible squared distance is 3 * 255^2, so plain int is plenty.
    std::size_t best = 0;
    int best_d = std::numeric_limits<int>::max();
    const int* rgb = packed_rgb_.data();
    const std::size_t count = entries_.size();
    for (std::size_t i = 0; i < count; ++i) {
        const int dr = static_cast<int>(r) - rgb[i * 3];
        const int dg = static_cast<int>(g) - rgb[i * 3 + 1];
        const int db = static_cast<int>(b) - rgb[i * 3 + 2];
        const int d = dr * dr + dg * dg + db * db;
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

ImageRGB simulate_cvd(const ImageRGB& image, CvdKind kind, const CvdMatrixTable& table,
                      const AnalysisConfig& cfg) {
    const Matrix3& m = table.matrix(kind, cfg.cvd_severity);
    const EncodeTable& enc = encode_table();

    // Each output row is m[r][0]*L(R) + m[r][1]*L(G) + m[r][2]*L(B); every
    // term depends on a single input byte, so it can be tabulated. Summing
    // the three terms left to right keeps the doubles identical to the
    // direct formula.
    std::array<std::array<std::array<double, 256>, 3>, 3> term{}; // [row][channel][byte]
    for (int v = 0; v < 256; ++v) {
        const double lin = srgb_decode_value(static_cast<std::uint8_t>(v));
        for (size_t r = 0; r < 3; ++r)
            for (size_t c = 0; c < 3; ++c) term[r][c][static_cast<size_t>(v)] = m[r][c] * lin;
    }

    ImageRGB out(image.width, image.height);
    const size_t n = static_cast<size_t>(image.width) * image.height;
    // Chart-like inputs carry long runs of identical pixels; reusing the
    // previous result is exact and skips most of the work on them.
    std::uint8_t prev_in[3] = {0, 0, 0};
    std::uint8_t prev_out[3] = {0, 0, 0};
    bool have_prev = false;
    for (size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = image.data.data() + i * 3;
        std::uint8_t* q = out.data.data() + i * 3;
        if (have_prev && p[0] == prev_in[0] && p[1] == prev_in[1] && p[2] == prev_in[2]) {
            q[0] = prev_out[0];
            q[1] = prev_out[1];
            q[2] = prev_out[2];
            continue;
        }
        for (size_t r = 0; r < 3; ++r) {
            const double v = term[r][0][p[0]] + term[r][1][p[1]] + term[r][2][p[2]];
            q[r] = enc.encode(v);
        }
        prev_in[0] = p[0];
        prev_in[1] = p[1];
        prev_in[2] = p[2];
        prev_out[0] = q[0];
        prev_out[1] = q[1];
        prev_out[2] = q[2];
        have_prev = true;
    }
    return out;
}

ImageGray monochrome_view(const ImageRGB& image) {
    return to_grayscale(image);
}

double wave_score(const ImageRGB& image, const WaveTable& table) {
    const size_t n = static_cast<size_t>(image.width) * image.height;
    double sum = 0.0;
    // Same run-of-identical-pixels memo as simulate_cvd; the sum accumulates
    // the same values in the same order either way.
    std::uint8_t prev[3] = {0, 0, 0};
    double prev_rating = 0.0;
    bool have_prev = false;
    for (size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = image.data.data() + i * 3;
        if (!have_prev || p[0] != prev[0] || p[1] != prev[1] || p[2] != prev[2]) {
            prev_rating = table.entries()[table.nearest(p[0], p[1], p[2])].rating;
            prev[0] = p[0];
            prev[1] = p[1];
            prev[2] = p[2];
            have_prev = true;
        }
        sum += prev_rating;
    }
    const double mean = sum / static_cast<double>(n);
    return (mean - table.min_rating()) / (table.max_rating() - table.min_rating());
}

double colorfulness(const ImageRGB& image) {
    const size_t n = static_cast<size_t>(image.width) * image.height;
    double sum_rg = 0.0, sum_yb = 0.0, sum_rg2 = 0.0, sum_yb2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = image.data[i * 3 + 0];
        double g = image.data[i * 3 + 1];
        double b = image.data[i * 3 + 2];
        double rg = r - g;
        double yb = (r + g) / 2.0 - b;
        sum_rg += rg;
        sum_yb += yb;
        sum_rg2 += rg * rg;
        sum_yb2 += yb * yb;
    }
    const double count = static_cast<double>(n);
    const double mean_rg = sum_rg / count;
    const double mean_yb = sum_yb / count;
    const double var_rg = std::max(0.0, sum_rg2 / count - mean_rg * mean_rg);
    const double var_yb = std::max(0.0, sum_yb2 / count - mean_yb * mean_yb);
    return std::sqrt(var_rg + var_yb) + 0.3 * std::sqrt(mean_rg * mean_rg + mean_yb * mean_yb);
}

} // namespace vizqm
