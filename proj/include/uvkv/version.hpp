#pragma once

namespace uvkv {
inline constexpr const char* kVersion = "0.1.0";
}
