#pragma once

namespace suprec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace suprec
