#pragma once

namespace isingqb {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace isingqb
