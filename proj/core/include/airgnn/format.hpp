// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <string>

namespace airgnn {

/// Locale-independent decimal rendering with 17 significant digits.
inline std::string format_double(double value)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace airgnn
