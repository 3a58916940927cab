#pragma once

namespace qadv {
inline constexpr const char* version = "0.1.0";
}
