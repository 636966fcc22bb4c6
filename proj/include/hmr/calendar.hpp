#pragma once

#include <cstdint>
#include <string>

namespace hmr {

// Dates are carried around as a serial day count (days since 1970-01-01).
// The arithmetic below is the standard proleptic-Gregorian civil conversion.
using SerialDay = int32_t;

constexpr SerialDay days_from_civil(int y, int m, int d) noexcept {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

struct CivilDate {
  int year;
  int month;
  int day;
};

constexpr CivilDate civil_from_days(SerialDay z) noexcept {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

// 0 = Monday ... 6 = Sunday (ISO numbering shifted to zero-based).
constexpr int weekday(SerialDay z) noexcept {
  return static_cast<int>(z >= -4 ? (z + 3) % 7 : (z + 4) % 7 + 6);
}

// "YYYY-MM-DD" -> serial day.  Throws BadRecordError on malformed input.
SerialDay parse_date(const std::string& s);

std::string format_date(SerialDay day);

// Intraday timestamp: serial day plus minute-of-day.  Seconds are accepted
// on input and truncated to the containing minute.
struct Timestamp {
  SerialDay day;
  int minute;  // minutes since midnight

  friend bool operator<(const Timestamp& a, const Timestamp& b) {
    return a.day != b.day ? a.day < b.day : a.minute < b.minute;
  }
  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.day == b.day && a.minute == b.minute;
  }
};

// Accepts "YYYY-MM-DD HH:MM[:SS]" or "YYYY-MM-DDTHH:MM[:SS]".
Timestamp parse_timestamp(const std::string& s);

std::string format_timestamp(const Timestamp& ts);

}  // namespace hmr
