#pragma once

namespace dualpqc {

inline constexpr const char* kVersion = "dualpqc 0.1.0";

}  // namespace dualpqc
