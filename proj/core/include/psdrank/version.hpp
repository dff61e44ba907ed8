#pragma once

namespace psdrank {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace psdrank
