#include "support.hpp"

#include "vizqm/color.hpp"
#include "vizqm/util.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

using namespace vizqm;
using namespace vizqm_test;

namespace {

const CvdMatrixTable& cvd_table() {
    static CvdMatrixTable table = CvdMatrixTable::load(default_data_dir());
    return table;
}

const WaveTable& wave_table() {
    static WaveTable table = WaveTable::load(default_data_dir());
    return table;
}

} // namespace

TEST_SUITE("color") {

TEST_CASE("CVD matrix table loads with a version and valid rows") {
    const CvdMatrixTable& table = cvd_table();
    CHECK(table.table_version() == 1);
    for (CvdKind kind :
         {CvdKind::deuteranomaly, CvdKind::protanomaly, CvdKind::tritanomaly}) {
        for (int step = 0; step <= 10; ++step) {
            const Matrix3& m = table.matrix(kind, step / 10.0);
            for (const auto& row : m) {
                double sum = row[0] + row[1] + row[2];
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("severity zero is the identity transform, bit exact") {
    std::mt19937 rng(21);
    ImageRGB img(13, 7);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xff);

    AnalysisConfig cfg;
    cfg.cvd_severity = 0.0;
    for (CvdKind kind :
         {CvdKind::deuteranomaly, CvdKind::protanomaly, CvdKind::tritanomaly}) {
        ImageRGB out = simulate_cvd(img, kind, cvd_table(), cfg);
        CHECK(out.data == img.data);
    }
}

TEST_CASE("neutral grey survives full-severity simulation within 2 levels") {
    ImageRGB grey = uniform_image(8, 8, 128, 128, 128);
    AnalysisConfig cfg;
    cfg.cvd_severity = 1.0;
    for (CvdKind kind :
         {CvdKind::deuteranomaly, CvdKind::protanomaly, CvdKind::tritanomaly}) {
        ImageRGB out = simulate_cvd(grey, kind, cvd_table(), cfg);
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            CHECK(std::abs(static_cast<int>(out.data[i]) - 128) <= 2);
        }
    }
}

TEST_CASE("pure red at severity 1.0 maps to the hand-derived triples") {
    // Expected values were computed by hand: sRGB-decode (255,0,0) to linear
    // (1,0,0), take the first column of each full-severity matrix, clamp to
    // [0,1], re-encode each channel.
    ImageRGB red = uniform_image(2, 2, 255, 0, 0);
    AnalysisConfig cfg;
    cfg.cvd_severity = 1.0;

    ImageRGB prot = simulate_cvd(red, CvdKind::protanomaly, cvd_table(), cfg);
    CHECK(prot.pixel(0, 0)[0] == 109);
    CHECK(prot.pixel(0, 0)[1] == 95);
    CHECK(prot.pixel(0, 0)[2] == 0);

    ImageRGB deut = simulate_cvd(red, CvdKind::deuteranomaly, cvd_table(), cfg);
    CHECK(deut.pixel(0, 0)[0] == 163);
    CHECK(deut.pixel(0, 0)[1] == 144);
    CHECK(deut.pixel(0, 0)[2] == 0);

    ImageRGB trit = simulate_cvd(red, CvdKind::tritanomaly, cvd_table(), cfg);
    CHECK(trit.pixel(0, 0)[0] == 255);
    CHECK(trit.pixel(0, 0)[1] == 0);
    CHECK(trit.pixel(0, 0)[2] == 15);
}

TEST_CASE("severity snaps to the nearest 0.1 step") {
    ImageRGB img = uniform_image(4, 4, 200, 60, 20);
    AnalysisConfig a, b;

    a.cvd_severity = 0.94;
    b.cvd_severity = 0.9;
    CHECK(simulate_cvd(img, CvdKind::deuteranomaly, cvd_table(), a).data ==
          simulate_cvd(img, CvdKind::deuteranomaly, cvd_table(), b).data);

    a.cvd_severity = 0.96;
    b.cvd_severity = 1.0;
    CHECK(simulate_cvd(img, CvdKind::deuteranomaly, cvd_table(), a).data ==
          simulate_cvd(img, CvdKind::deuteranomaly, cvd_table(), b).data);
}

TEST_CASE("missing or corrupt matrix data raises missing_matrix_data") {
    TempDir dir;
    CHECK(expect_error([&] { CvdMatrixTable::load(dir.path()); }).code ==
          Errc::missing_matrix_data);

    write_file(dir.file("cvd_machado_2009.json"), "{ not json");
    CHECK(expect_error([&] { CvdMatrixTable::load(dir.path()); }).code ==
          Errc::missing_matrix_data);

    // Structurally valid JSON whose rows fail the sum rule is also rejected.
    nlohmann::json doc = nlohmann::json::parse(
        read_file(default_data_dir() + "/cvd_machado_2009.json"));
    doc["kinds"]["deuteranomaly"]["0.5"][0][0] = 9.0;
    write_file(dir.file("cvd_machado_2009.json"), doc.dump());
    CHECK(expect_error([&] { CvdMatrixTable::load(dir.path()); }).code ==
          Errc::missing_matrix_data);
}

TEST_CASE("WAVE table loads 32 entries with the documented rating range") {
    const WaveTable& table = wave_table();
    CHECK(table.table_version() == 1);
    REQUIRE(table.entries().size() == 32);
    CHECK(table.min_rating() == doctest::Approx(24.0));
    CHECK(table.max_rating() == doctest::Approx(78.0));

    // Every palette colour is its own nearest neighbour.
    for (std::size_t i = 0; i < table.entries().size(); ++i) {
        const WaveEntry& e = table.entries()[i];
        CHECK(table.nearest(e.rgb[0], e.rgb[1], e.rgb[2]) == i);
    }
}

TEST_CASE("nearest matches a brute-force scan with lowest-index ties") {
    const WaveTable& table = wave_table();
    std::mt19937 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint8_t r = static_cast<std::uint8_t>(rng() & 0xff);
        const std::uint8_t g = static_cast<std::uint8_t>(rng() & 0xff);
        const std::uint8_t b = static_cast<std::uint8_t>(rng() & 0xff);
        long long best = -1;
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < table.entries().size(); ++i) {
            const auto& rgb = table.entries()[i].rgb;
            const long long dr = static_cast<long long>(r) - rgb[0];
            const long long dg = static_cast<long long>(g) - rgb[1];
            const long long db = static_cast<long long>(b) - rgb[2];
            const long long d2 = dr * dr + dg * dg + db * db;
            if (best < 0 || d2 < best) { // strict <: first minimum wins
                best = d2;
                best_index = i;
            }
        }
        CHECK(table.nearest(r, g, b) == best_index);
    }
}

TEST_CASE("missing or truncated WAVE data raises missing_wave_data") {
    TempDir dir;
    CHECK(expect_error([&] { WaveTable::load(dir.path()); }).code == Errc::missing_wave_data);

    nlohmann::json doc =
        nlohmann::json::parse(read_file(default_data_dir() + "/wave_bcp32.json"));
    doc["colors"].erase(doc["colors"].begin()); // 31 entries is not a palette
    write_file(dir.file("wave_bcp32.json"), doc.dump());
    CHECK(expect_error([&] { WaveTable::load(dir.path()); }).code == Errc::missing_wave_data);
}

TEST_CASE("wave_score endpoints and midpoint") {
    const WaveTable& table = wave_table();
    const WaveEntry* highest = nullptr;
    const WaveEntry* lowest = nullptr;
    for (const auto& e : table.entries()) {
        if (!highest || e.rating > highest->rating) highest = &e;
        if (!lowest || e.rating < lowest->rating) lowest = &e;
    }
    REQUIRE(highest != nullptr);
    REQUIRE(lowest != nullptr);

    ImageRGB best = uniform_image(6, 6, highest->rgb[0], highest->rgb[1], highest->rgb[2]);
    CHECK(wave_score(best, table) == doctest::Approx(1.0).epsilon(1e-12));

    ImageRGB worst = uniform_image(6, 6, lowest->rgb[0], lowest->rgb[1], lowest->rgb[2]);
    CHECK(wave_score(worst, table) == doctest::Approx(0.0).epsilon(1e-12));

    ImageRGB half(2, 6);
    for (int y = 0; y < 6; ++y) {
        half.set_pixel(0, y, highest->rgb[0], highest->rgb[1], highest->rgb[2]);
        half.set_pixel(1, y, lowest->rgb[0], lowest->rgb[1], lowest->rgb[2]);
    }
    CHECK(wave_score(half, table) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("wave_score is invariant under pixel permutation") {
    std::mt19937 rng(31);
    ImageRGB img(8, 8);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xff);

    // Same multiset of pixels in a different order.
    std::vector<std::array<std::uint8_t, 3>> pixels;
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            const std::uint8_t* p = img.pixel(x, y);
            pixels.push_back({p[0], p[1], p[2]});
        }
    std::shuffle(pixels.begin(), pixels.end(), rng);
    ImageRGB shuffled(8, 8);
    std::size_t k = 0;
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x, ++k)
            shuffled.set_pixel(x, y, pixels[k][0], pixels[k][1], pixels[k][2]);

    CHECK(wave_score(img, wave_table()) ==
          doctest::Approx(wave_score(shuffled, wave_table())).epsilon(1e-9));
    CHECK(colorfulness(img) == doctest::Approx(colorfulness(shuffled)).epsilon(1e-9));
}

TEST_CASE("colourfulness analytic values") {
    SUBCASE("any greyscale image scores exactly zero") {
        std::mt19937 rng(17);
        ImageRGB grey(9, 9);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 9; ++x) {
                std::uint8_t v = static_cast<std::uint8_t>(rng() & 0xff);
                grey.set_pixel(x, y, v, v, v);
            }
        CHECK(colorfulness(grey) == 0.0);
    }
    SUBCASE("uniform pure red: opponent means only") {
        // rg = 255 and yb = 127.5 everywhere; variances vanish, so the score
        // is 0.3 * sqrt(255^2 + 127.5^2) = 85.5296...
        ImageRGB red = uniform_image(12, 5, 255, 0, 0);
        CHECK(colorfulness(red) == doctest::Approx(85.52960013936695).epsilon(1e-12));
        CHECK(colorfulness(red) == doctest::Approx(85.53).epsilon(1e-4));
    }
    SUBCASE("red/green checkerboard: 255 + 0.3 * 127.5 = 293.25") {
        ImageRGB board(2, 2);
        board.set_pixel(0, 0, 255, 0, 0);
        board.set_pixel(1, 0, 0, 255, 0);
        board.set_pixel(0, 1, 0, 255, 0);
        board.set_pixel(1, 1, 255, 0, 0);
        CHECK(colorfulness(board) == doctest::Approx(293.25).epsilon(1e-12));
    }
}

TEST_CASE("monochrome view equals BT.601 grayscale") {
    ImageRGB img(3, 1);
    img.set_pixel(0, 0, 255, 0, 0);
    img.set_pixel(1, 0, 0, 0, 0);
    img.set_pixel(2, 0, 255, 255, 255);
    ImageGray mono = monochrome_view(img);
    CHECK(mono.at(0, 0) == 76);
    CHECK(mono.at(1, 0) == 0);
    CHECK(mono.at(2, 0) == 255);
}

TEST_CASE("cvd kind names are the medical terms") {
    CHECK(std::string(cvd_kind_name(CvdKind::deuteranomaly)) == "deuteranomaly");
    CHECK(std::string(cvd_kind_name(CvdKind::protanomaly)) == "protanomaly");
    CHECK(std::string(cvd_kind_name(CvdKind::tritanomaly)) == "tritanomaly");
}

} // TEST_SUITE
