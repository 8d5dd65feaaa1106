#pragma once

namespace vizqm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace vizqm
