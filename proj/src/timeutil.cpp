#include "satbot/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "satbot/error.hpp"

namespace satbot {

namespace {

int parse_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    int v = 0;
    if (pos + len > s.size()) throw Error(ErrorCode::InvalidDate, std::string(whole));
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || ptr != s.data() + pos + len) {
        throw Error(ErrorCode::InvalidDate, std::string(whole));
    }
    return v;
}

}  // namespace

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp t) {
    const Date d = std::chrono::floor<std::chrono::days>(t);
    std::chrono::hh_mm_ss hms{t - d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02ld:%02ld:%02ldZ", static_cast<long>(hms.hours().count()),
                  static_cast<long>(hms.minutes().count()), static_cast<long>(hms.seconds().count()));
    return format_date(d) + buf;
}

Date parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw Error(ErrorCode::InvalidDate, std::string(s));
    const int y = parse_int(s, 0, 4, s);
    const int m = parse_int(s, 5, 2, s);
    const int d = parse_int(s, 8, 2, s);
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw Error(ErrorCode::InvalidDate, std::string(s));
    return Date{ymd};
}

Timestamp parse_timestamp(std::string_view s) {
    if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
        throw Error(ErrorCode::InvalidDate, std::string(s));
    }
    const Date d = parse_date(s.substr(0, 10));
    const int hh = parse_int(s, 11, 2, s);
    const int mm = parse_int(s, 14, 2, s);
    const int ss = parse_int(s, 17, 2, s);
    if (hh > 23 || mm > 59 || ss > 60) throw Error(ErrorCode::InvalidDate, std::string(s));
    return Timestamp{d} + std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss};
}

Date date_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace satbot
