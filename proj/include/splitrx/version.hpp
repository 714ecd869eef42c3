#pragma once

namespace splitrx {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace splitrx
