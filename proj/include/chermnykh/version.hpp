#pragma once

namespace chermnykh {
inline constexpr const char* k_version = "1.0.0";
}
