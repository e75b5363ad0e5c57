#pragma once

namespace sqg {
inline constexpr const char* kVersion = "0.1.0";
}
