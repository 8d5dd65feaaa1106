// Shared fixtures and helpers for the doctest suites.
#pragma once

#include "doctest.h"

#include "vizqm/errors.hpp"
#include "vizqm/image.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace vizqm_test {

// ---------------------------------------------------------------------------
// Frozen PNG fixtures (byte-exact, produced once with an independent encoder).
//
// kRgb2x2Png decodes to pixels, row-major:
//   (255,0,0) (0,255,0)
//   (0,0,255) (128,64,32)
inline const std::vector<std::uint8_t> kRgb2x2Png = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00,
    0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00, 0x16, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xc0, 0xf0, 0x9f, 0x81, 0x81, 0x81, 0xe1, 0x7f, 0x83,
    0x83, 0x02, 0x00, 0x1c, 0x14, 0x03, 0xde, 0x64, 0xd4, 0xad, 0x8d, 0x00, 0x00, 0x00,
    0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// kRgba2x2Png decodes to RGBA, row-major:
//   (255,0,0,255) (0,255,0,0)
//   (0,0,255,128) (10,20,30,255)
// which composited over white becomes:
//   (255,0,0) (255,255,255)
//   (127,127,255) (10,20,30)
inline const std::vector<std::uint8_t> kRgba2x2Png = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x06, 0x00, 0x00,
    0x00, 0x72, 0xb6, 0x0d, 0x24, 0x00, 0x00, 0x00, 0x1a, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xf0, 0x9f, 0xe1, 0x3f, 0x03, 0x03, 0x03, 0x03, 0xc3,
    0xff, 0x06, 0x2e, 0x11, 0xb9, 0xff, 0x00, 0x35, 0x00, 0x05, 0xb8, 0x62, 0xef, 0x2d,
    0x11, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    REQUIRE(out.good());
}

// ---------------------------------------------------------------------------
// Unique scratch directory, removed on scope exit.
class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = (std::filesystem::temp_directory_path() /
                 ("vizqm_test_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter.fetch_add(1))))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

  private:
    std::string path_;
};

// ---------------------------------------------------------------------------
// Error helpers: capture the library error so tests can assert on the code
// and the message.
struct CaughtError {
    vizqm::Errc code{};
    std::string message;
};

template <typename F>
CaughtError expect_error(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const vizqm::Error& e) {
        return CaughtError{e.code(), e.what()};
    }
    REQUIRE_MESSAGE(false, "expected a vizqm::Error, none was thrown");
    return CaughtError{};
}

// ---------------------------------------------------------------------------
// Subprocess runner for CLI tests. Captures exit code, stdout, stderr.
struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// `args` is a fully shell-quoted argument string; `env_prefix` (optional) is
// prepended verbatim, e.g. "VIZQM_DATA_DIR=/tmp/x ".
inline CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    TempDir capture;
    const std::string out_path = capture.file("stdout");
    const std::string err_path = capture.file("stderr");
    const std::string cmd = env_prefix + std::string(VIZQM_CLI_PATH) + " " + args + " > " +
                            out_path + " 2> " + err_path;
    int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

// ---------------------------------------------------------------------------
// Small image constructors.
inline vizqm::ImageRGB uniform_image(int w, int h, std::uint8_t r, std::uint8_t g,
                                     std::uint8_t b) {
    vizqm::ImageRGB img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.set_pixel(x, y, r, g, b);
    return img;
}

} // namespace vizqm_test
