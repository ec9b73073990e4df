#pragma once

namespace shellheat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shellheat
