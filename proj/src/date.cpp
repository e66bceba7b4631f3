#include "driftlag/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "driftlag/error.hpp"

namespace driftlag {

namespace {

bool parse_uint(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

bool make_date(int y, int m, int d, Date& out) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    out = Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
    return true;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    Date out;
    if (!make_date(year, static_cast<int>(month), static_cast<int>(day), out)) {
        throw Error(ErrorCode::BadDate, "invalid calendar date");
    }
    return out;
}

Date Date::parse_iso(std::string_view text) {
    int y = 0, m = 0, d = 0;
    Date out;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_uint(text.substr(0, 4), y) ||
        !parse_uint(text.substr(5, 2), m) || !parse_uint(text.substr(8, 2), d) || !make_date(y, m, d, out)) {
        throw Error(ErrorCode::BadDate, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    return out;
}

bool Date::try_parse_us_short(std::string_view text, Date& out) {
    const auto a = text.find('/');
    if (a == std::string_view::npos) return false;
    const auto b = text.find('/', a + 1);
    if (b == std::string_view::npos) return false;
    int m = 0, d = 0, y = 0;
    if (!parse_uint(text.substr(0, a), m) || !parse_uint(text.substr(a + 1, b - a - 1), d) ||
        !parse_uint(text.substr(b + 1), y)) {
        return false;
    }
    if (text.size() - b - 1 == 2) y += 2000;
    return make_date(y, m, d, out);
}

Date Date::parse_us_short(std::string_view text) {
    Date out;
    if (!try_parse_us_short(text, out)) {
        throw Error(ErrorCode::BadDate, "expected M/D/YY, got '" + std::string(text) + "'");
    }
    return out;
}

std::string Date::iso() const {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{std::chrono::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace driftlag
