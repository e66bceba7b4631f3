#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace driftlag {

/// Calendar date stored as whole days since 1970-01-01.
class Date {
  public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);
    /// YYYY-MM-DD
    static Date parse_iso(std::string_view text);
    /// M/D/YY as used in the JHU CSSE headers (years are 20YY).
    static Date parse_us_short(std::string_view text);
    static bool try_parse_us_short(std::string_view text, Date& out);

    std::string iso() const;
    constexpr std::int32_t days() const { return days_; }

    constexpr Date operator+(int days) const { return Date(days_ + days); }
    constexpr Date operator-(int days) const { return Date(days_ - days); }
    constexpr int operator-(Date other) const { return days_ - other.days_; }
    constexpr auto operator<=>(const Date&) const = default;

  private:
    std::int32_t days_ = 0;
};

}  // namespace driftlag
