#pragma once

// Independent calendar oracle for tests: walks years and months one at a time
// instead of using the closed-form civil-day arithmetic the library uses.

#include <cstdint>
#include <cstdio>
#include <string>

namespace oracle {

inline bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int month_days(int y, int m) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

/// Renders non-negative unix milliseconds as YYYY-MM-DDTHH:MM:SS.mmmZ.
inline std::string iso_from_unix_ms(std::int64_t ms) {
  std::int64_t days = ms / 86400000;
  std::int64_t rem = ms % 86400000;
  int y = 1970;
  while (days >= (leap(y) ? 366 : 365)) {
    days -= leap(y) ? 366 : 365;
    ++y;
  }
  int m = 1;
  while (days >= month_days(y, m)) {
    days -= month_days(y, m);
    ++m;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, m, static_cast<int>(days) + 1,
                static_cast<int>(rem / 3600000), static_cast<int>(rem / 60000 % 60),
                static_cast<int>(rem / 1000 % 60), static_cast<int>(rem % 1000));
  return buf;
}

/// Whole seconds between 1601-01-01 and the given UTC civil time (y >= 1601).
inline std::int64_t seconds_since_1601(int y, int mo, int d, int h, int mi, int s) {
  std::int64_t days = 0;
  for (int yy = 1601; yy < y; ++yy) days += leap(yy) ? 366 : 365;
  for (int mm = 1; mm < mo; ++mm) days += month_days(y, mm);
  days += d - 1;
  return days * 86400 + h * 3600 + mi * 60 + s;
}

/// FILETIME ticks for a UTC civil time.
inline std::uint64_t filetime_ticks(int y, int mo, int d, int h, int mi, int s) {
  return static_cast<std::uint64_t>(seconds_since_1601(y, mo, d, h, mi, s)) * 10000000ULL;
}

/// Big-endian IPv4 byte decomposition.
inline std::string dotted_quad(std::uint32_t v) {
  return std::to_string(v / 16777216) + "." + std::to_string(v / 65536 % 256) + "." +
         std::to_string(v / 256 % 256) + "." + std::to_string(v % 256);
}

}  // namespace oracle
