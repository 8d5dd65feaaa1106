#pragma once

#include <cstdint>
#include <string>

namespace vizqm {

/// Directory holding the numeric data tables (CVD matrices, WAVE palette).
/// Resolution order: VIZQM_DATA_DIR environment variable, then the path baked
/// in at configure time, then "data" relative to the working directory.
std::string default_data_dir();

/// FNV-1a 64-bit over a byte string, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::string& path);          // throws file_not_found / io_error
void write_file(const std::string& path, const std::string& bytes);
bool path_exists(const std::string& path);
void ensure_directory(const std::string& path);           // mkdir -p

/// Filename stem: "/a/b/plot.png" -> "plot".
std::string path_stem(const std::string& path);

} // namespace vizqm
