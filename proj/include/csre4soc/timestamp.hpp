#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace csre4soc {

using Timestamp = std::chrono::sys_seconds;

/// Accepts RFC 3339 date-times in UTC with second precision:
/// "2024-03-01T12:00:00Z" (also 't'/'z' and a "+00:00" offset).
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
    auto digits = [&](std::size_t pos, std::size_t n) -> std::optional<int> {
        if (pos + n > text.size()) return std::nullopt;
        int v = 0;
        for (std::size_t i = pos; i < pos + n; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    auto is = [&](std::size_t pos, char c) { return pos < text.size() && text[pos] == c; };

    if (text.size() < 20) return std::nullopt;
    auto y = digits(0, 4), mo = digits(5, 2), d = digits(8, 2);
    auto h = digits(11, 2), mi = digits(14, 2), s = digits(17, 2);
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    if (!is(4, '-') || !is(7, '-') || !(is(10, 'T') || is(10, 't')) || !is(13, ':') || !is(16, ':')) {
        return std::nullopt;
    }
    const std::string_view zone = text.substr(19);
    if (zone != "Z" && zone != "z" && zone != "+00:00") return std::nullopt;
    if (*h > 23 || *mi > 59 || *s > 59) return std::nullopt;

    using namespace std::chrono;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*s};
}

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
inline std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const auto day_start = floor<days>(ts);
    const year_month_day ymd{day_start};
    const hh_mm_ss tod{ts - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

inline Timestamp utc_now() {
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace csre4soc
