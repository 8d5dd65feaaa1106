#include "vizqm/util.hpp"
#include "vizqm/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef VIZQM_DEFAULT_DATA_DIR
#define VIZQM_DEFAULT_DATA_DIR "data"
#endif

namespace vizqm {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::file_not_found:      return "file_not_found";
        case Errc::decode_error:        return "decode_error";
        case Errc::corrupt_record:      return "corrupt_record";
        case Errc::duplicate_id:        return "duplicate_id";
        case Errc::unknown_metric:      return "unknown_metric";
        case Errc::schema_error:        return "schema_error";
        case Errc::missing_objective:   return "missing_objective";
        case Errc::mark_out_of_range:   return "mark_out_of_range";
        case Errc::incomplete_bundle:   return "incomplete_bundle";
        case Errc::missing_matrix_data: return "missing_matrix_data";
        case Errc::missing_wave_data:   return "missing_wave_data";
        case Errc::invalid_argument:    return "invalid_argument";
        case Errc::io_error:            return "io_error";
    }
    return "unknown";
}

std::string default_data_dir() {
    if (const char* env = std::getenv("VIZQM_DATA_DIR"); env && *env) {
        return env;
    }
    return VIZQM_DEFAULT_DATA_DIR;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_error(Errc::file_not_found, "cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw_error(Errc::io_error, "error reading file: " + path);
    }
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw_error(Errc::io_error, "cannot open file for writing: " + path);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw_error(Errc::io_error, "error writing file: " + path);
    }
}

bool path_exists(const std::string& path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) {
        throw_error(Errc::io_error, "cannot create directory: " + path);
    }
}

std::string path_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

} // namespace vizqm
