// Copyright 2026 The discourse-miner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "miner/error.hpp"

namespace miner {

// Proleptic Gregorian day count, 1970-01-01 = day 0.
inline std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  int year;
  int month;
  int day;
};

inline CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline std::int64_t utc_epoch(int y, int mo, int d, int h = 0, int mi = 0, int s = 0) {
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

struct YearMonth {
  int year = 0;
  int month = 0;
  auto operator<=>(const YearMonth&) const = default;
};

inline YearMonth year_month_of(std::int64_t epoch) {
  std::int64_t days = epoch / 86400;
  if (epoch % 86400 < 0) --days;
  CivilDate c = civil_from_days(days);
  return YearMonth{c.year, c.month};
}

inline std::string to_string(YearMonth ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", ym.year, ym.month);
  return buf;
}

// Accepts epoch seconds ("1497744000") and ISO-8601 variants:
// "YYYY-MM-DD", "YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|±HH[:]MM]". Result is UTC.
inline std::int64_t parse_timestamp(std::string_view s) {
  auto fail = [&](const char* why) -> std::int64_t {
    throw ValidationError("bad timestamp \"" + std::string(s) + "\": " + why);
  };
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return fail("empty");

  auto all_digits = [](std::string_view v) {
    if (v.empty()) return false;
    for (char c : v)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  {
    std::string_view body = s;
    bool neg = false;
    if (body.front() == '-' || body.front() == '+') {
      neg = body.front() == '-';
      body.remove_prefix(1);
    }
    if (all_digits(body) && body.size() <= 12) {
      std::int64_t v = 0;
      for (char c : body) v = v * 10 + (c - '0');
      return neg ? -v : v;
    }
  }

  auto num = [&](size_t pos, size_t len) -> int {
    if (pos + len > s.size()) return -1;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };

  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return fail("expected YYYY-MM-DD");
  y = num(0, 4);
  mo = num(5, 2);
  d = num(8, 2);
  if (y < 0 || mo < 1 || mo > 12 || d < 1 || d > 31) return fail("bad date fields");
  size_t pos = 10;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return fail("expected 'T' or space");
    ++pos;
    if (pos + 8 > s.size() || s[pos + 2] != ':' || s[pos + 5] != ':')
      return fail("expected HH:MM:SS");
    h = num(pos, 2);
    mi = num(pos + 3, 2);
    sec = num(pos + 6, 2);
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) return fail("bad time fields");
    pos += 8;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
  }
  std::int64_t epoch = utc_epoch(y, mo, d, h, mi, sec);
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int sign = c == '+' ? 1 : -1;
      ++pos;
      int oh = num(pos, 2);
      if (oh < 0) return fail("bad offset");
      pos += 2;
      if (pos < s.size() && s[pos] == ':') ++pos;
      int om = 0;
      if (pos < s.size()) {
        om = num(pos, 2);
        if (om < 0) return fail("bad offset");
        pos += 2;
      }
      epoch -= sign * (oh * 3600 + om * 60);
    }
  }
  if (pos != s.size()) return fail("trailing characters");
  return epoch;
}

inline std::string format_utc(std::int64_t epoch) {
  std::int64_t days = epoch / 86400;
  std::int64_t rem = epoch % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  CivilDate c = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace miner
