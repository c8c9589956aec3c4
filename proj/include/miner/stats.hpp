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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "miner/error.hpp"
#include "miner/timeparse.hpp"

namespace miner {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr double eps = 1e-15;
  constexpr double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

inline double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw ValidationError("incomplete beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Two-sided p for Student's t with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

struct MonthlyPoint {
  YearMonth month;
  double value = 0.0;
  std::size_t n = 0;
};

using MonthlySeries = std::vector<MonthlyPoint>;

enum class GapPolicy { drop, keep };

// Groups (timestamp, value) points by UTC calendar month; per-month mean
// and count, sorted by month. With GapPolicy::keep, covered months with no
// points appear with n = 0 and a NaN value.
inline MonthlySeries monthly_aggregate(const std::vector<std::pair<std::int64_t, double>>& points,
                                       GapPolicy gaps = GapPolicy::drop) {
  std::map<YearMonth, std::pair<double, std::size_t>> groups;
  for (const auto& [ts, value] : points) {
    auto& g = groups[year_month_of(ts)];
    g.first += value;
    g.second += 1;
  }
  MonthlySeries series;
  if (groups.empty()) return series;
  if (gaps == GapPolicy::keep) {
    YearMonth ym = groups.begin()->first;
    YearMonth last = groups.rbegin()->first;
    while (ym <= last) {
      auto it = groups.find(ym);
      if (it != groups.end())
        series.push_back({ym, it->second.first / static_cast<double>(it->second.second),
                          it->second.second});
      else
        series.push_back({ym, std::numeric_limits<double>::quiet_NaN(), 0});
      if (++ym.month > 12) {
        ym.month = 1;
        ++ym.year;
      }
    }
  } else {
    for (const auto& [ym, g] : groups)
      series.push_back({ym, g.first / static_cast<double>(g.second), g.second});
  }
  return series;
}

enum class Trend { increasing, decreasing, not_significant };

inline const char* to_string(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    default: return "not significant";
  }
}

struct TrendResult {
  long long s = 0;
  double var_s = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  Trend verdict = Trend::not_significant;
};

inline constexpr double kTrendAlpha = 0.05;

// Mann-Kendall trend test with the tie-corrected variance:
//   S = sum_{i<j} sign(x_j - x_i)
//   var(S) = [n(n-1)(2n+5) - sum_t t(t-1)(2t+5)] / 18 over tie groups
//   Z uses the +-1 continuity correction; p is two-sided normal.
inline TrendResult mann_kendall(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) throw ValidationError("mann_kendall: series too short (need n >= 4)");
  TrendResult r;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = series[j] - series[i];
      if (d > 0) ++r.s;
      else if (d < 0) --r.s;
    }
  }
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    if (t > 1) tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
    i = j;
  }
  double dn = static_cast<double>(n);
  r.var_s = (dn * (dn - 1.0) * (2.0 * dn + 5.0) - tie_term) / 18.0;
  if (r.var_s > 0.0) {
    if (r.s > 0) r.z = (static_cast<double>(r.s) - 1.0) / std::sqrt(r.var_s);
    else if (r.s < 0) r.z = (static_cast<double>(r.s) + 1.0) / std::sqrt(r.var_s);
    r.p_value = normal_two_sided_p(r.z);
  } else {
    r.z = 0.0;
    r.p_value = 1.0;
  }
  if (r.p_value < kTrendAlpha && r.z != 0.0)
    r.verdict = r.z > 0 ? Trend::increasing : Trend::decreasing;
  return r;
}

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Sample Pearson correlation with a two-sided t-test (n-2 df).
inline CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("pearson: need n >= 3");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("pearson: degenerate series");
  CorrelationResult out;
  out.n = n;
  out.r = sxy / std::sqrt(sxx * syy);
  double df = static_cast<double>(n - 2);
  double denom = 1.0 - out.r * out.r;
  if (denom <= 0.0) {
    out.p_value = 0.0;
  } else {
    double t = out.r * std::sqrt(df / denom);
    out.p_value = student_t_two_sided_p(t, df);
  }
  return out;
}

}  // namespace miner
