#pragma once

namespace hetcache {
inline constexpr const char* kVersion = "0.1.0";
}
