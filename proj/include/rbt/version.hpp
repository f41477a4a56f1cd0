#pragma once

namespace rbt {
inline constexpr const char* kVersion = "0.1.0";
}
