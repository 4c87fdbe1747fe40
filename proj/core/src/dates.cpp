#include "alphax/dates.hpp"

#include <cstdio>
#include <cstdlib>

namespace alphax {
namespace {

// Civil-from-days and days-from-civil (Howard Hinnant's algorithms),
// valid over the full int32 range.
std::int32_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);              // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<std::int32_t>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, int& m, int& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);           // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);           // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                // [0, 11]
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yr + (m <= 2);
}

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    return Date(days_from_civil(year, month, day));
}

std::optional<Date> Date::parse(std::string_view s) {
    // Strict "YYYY-MM-DD".
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto digits = [&](int from, int to, int& out) {
        out = 0;
        for (int i = from; i < to; ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            out = out * 10 + (s[i] - '0');
        }
        return true;
    };
    int y, m, d;
    if (!digits(0, 4, y) || !digits(5, 7, m) || !digits(8, 10, d)) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
    return from_ymd(y, m, d);
}

int Date::year() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return y;
}

int Date::month() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return m;
}

int Date::day() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return d;
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    std::int32_t w = (serial_ + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

std::string Date::to_string() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

Date FiscalQuarter::end_date() const {
    static const int end_month[] = {3, 6, 9, 12};
    int m = end_month[quarter - 1];
    return Date::from_ymd(year, m, days_in_month(year, m));
}

FiscalQuarter FiscalQuarter::from_index(int idx) {
    int y = idx / 4;
    int q = idx % 4;
    if (q < 0) {
        q += 4;
        y -= 1;
    }
    return FiscalQuarter{y, q + 1};
}

std::string FiscalQuarter::label() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "Q%d %04d", quarter, year);
    return buf;
}

}  // namespace alphax
