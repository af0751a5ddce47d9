#pragma once

#include <cstdio>
#include <string>

namespace tmprod {

/// Decimal rendering with 17 significant digits, enough to round-trip a
/// binary64 value exactly.
inline std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace tmprod
