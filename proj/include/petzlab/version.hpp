#pragma once

namespace petzlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace petzlab
