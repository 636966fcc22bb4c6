#include "hmr/calendar.hpp"

#include <cstdio>
#include <cstdlib>

#include "hmr/errors.hpp"

namespace hmr {

namespace {

bool parse_int(const std::string& s, size_t pos, size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

SerialDay parse_date(const std::string& s) {
  int y, m, d;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-' || !parse_int(s, 0, 4, y) ||
      !parse_int(s, 5, 2, m) || !parse_int(s, 8, 2, d) || m < 1 || m > 12 ||
      d < 1 || d > 31) {
    throw BadRecordError("malformed date: '" + s + "'");
  }
  return days_from_civil(y, m, d);
}

std::string format_date(SerialDay day) {
  CivilDate c = civil_from_days(day);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
  return buf;
}

Timestamp parse_timestamp(const std::string& s) {
  // date part, then ' ' or 'T', then HH:MM with optional :SS
  if (s.size() < 16 || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') {
    throw BadRecordError("malformed timestamp: '" + s + "'");
  }
  SerialDay day = parse_date(s.substr(0, 10));
  int hh, mm;
  if (!parse_int(s, 11, 2, hh) || !parse_int(s, 14, 2, mm) || hh > 23 ||
      mm > 59) {
    throw BadRecordError("malformed timestamp: '" + s + "'");
  }
  if (s.size() > 16 && s[16] == ':') {
    int ss;
    if (!parse_int(s, 17, 2, ss) || ss > 60) {
      throw BadRecordError("malformed timestamp: '" + s + "'");
    }
  }
  return {day, hh * 60 + mm};
}

std::string format_timestamp(const Timestamp& ts) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s %02d:%02d",
                format_date(ts.day).c_str(), ts.minute / 60, ts.minute % 60);
  return buf;
}

}  // namespace hmr
