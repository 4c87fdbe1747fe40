#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace alphax {

/// Calendar date stored as a serial day count (days since 1970-01-01).
/// Proleptic Gregorian; all arithmetic is integral so dates hash, sort and
/// round-trip identically on every platform.
class Date {
public:
    constexpr Date() : serial_(0) {}
    constexpr explicit Date(std::int32_t serial_days) : serial_(serial_days) {}

    static Date from_ymd(int year, int month, int day);
    static std::optional<Date> parse(std::string_view iso8601);  // "YYYY-MM-DD"

    std::int32_t serial() const { return serial_; }
    int year() const;
    int month() const;
    int day() const;

    /// 0 = Monday ... 6 = Sunday.
    int weekday() const;
    bool is_weekend() const { int w = weekday(); return w >= 5; }

    Date plus_days(std::int32_t n) const { return Date(serial_ + n); }
    std::int32_t days_until(Date other) const { return other.serial_ - serial_; }

    std::string to_string() const;  // ISO-8601

    auto operator<=>(const Date&) const = default;

private:
    std::int32_t serial_;
};

/// Fiscal quarter (year, quarter 1-4).
struct FiscalQuarter {
    int year = 0;
    int quarter = 0;

    bool valid() const { return quarter >= 1 && quarter <= 4; }
    Date end_date() const;  // last calendar day of the quarter

    /// Quarters as a linear index, so adjacent quarters differ by 1.
    int index() const { return year * 4 + (quarter - 1); }
    static FiscalQuarter from_index(int idx);

    FiscalQuarter prev(int n = 1) const { return from_index(index() - n); }
    FiscalQuarter next(int n = 1) const { return from_index(index() + n); }

    std::string label() const;  // "Q4 2020"

    auto operator<=>(const FiscalQuarter&) const = default;
};

}  // namespace alphax
