#pragma once

namespace ideageo {
inline constexpr const char* version = "0.1.0";
}
