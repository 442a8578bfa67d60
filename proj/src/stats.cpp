// Copyright 2026 The attnloop Authors
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

#include "attnloop/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "attnloop/errors.hpp"

namespace attnloop {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("mean: empty input");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw UsageError("sample_variance: need at least 2 values");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

namespace {

// Continued fraction for the incomplete beta (Numerical Recipes style
// modified Lentz iteration).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 10 * kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw UsageError("incomplete beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw UsageError("incomplete beta: x must be in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw UsageError("student_t_cdf: df must be > 0");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t < 0.0 ? half_tail : 1.0 - half_tail;
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0)) throw UsageError("hurwitz_zeta: s must be > 1");
  if (!(q > 0.0)) throw UsageError("hurwitz_zeta: q must be > 0");
  // Direct sum of the first kTerms, then Euler-Maclaurin tail through the
  // B_6 term; relative error < 1e-14 for s in (1, ~60].
  constexpr int kTerms = 24;
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    sum += std::pow(q + k, -s);
  }
  const double n = q + kTerms;
  const double ninv = 1.0 / n;
  const double npow = std::pow(n, -s);
  sum += npow * n / (s - 1.0);  // integral term n^{1-s}/(s-1)
  sum += 0.5 * npow;
  const double b2 = s * npow * ninv / 12.0;
  sum += b2;
  const double b4 = -s * (s + 1.0) * (s + 2.0) * npow * ninv * ninv * ninv / 720.0;
  sum += b4;
  const double b6 =
      s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * npow * ninv * ninv * ninv * ninv * ninv /
      30240.0;
  sum += b6;
  return sum;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw UsageError("linear_fit: need two same-length series of >= 2 points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateDataError("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;  // y constant and per fit residual-free
  } else {
    fit.r2 = (sxy * sxy) / (sxx * syy);
  }
  return fit;
}

namespace {

// Days-to-civil-date conversion (Howard Hinnant's algorithm).
struct CivilDate {
  int year;
  unsigned month;
  unsigned day;
};

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<int>(y + (m <= 2)), m, d};
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// ISO weekday, Monday=1..Sunday=7. Epoch day 0 (1970-01-01) is a Thursday.
int iso_weekday_of_day(std::int64_t days) {
  std::int64_t wd = (days + 3) % 7;
  if (wd < 0) wd += 7;
  return static_cast<int>(wd) + 1;
}

int iso_weeks_in_year(int year) {
  auto p = [](int y) {
    return (y + y / 4 - y / 100 + y / 400) % 7;
  };
  return (p(year) == 4 || p(year - 1) == 3) ? 53 : 52;
}

}  // namespace

IsoWeek iso_week_utc(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  if (epoch_seconds < 0 && epoch_seconds % 86400 != 0) --days;
  const CivilDate date = civil_from_days(days);
  const int wd = iso_weekday_of_day(days);
  const int ordinal = static_cast<int>(days - days_from_civil(date.year, 1, 1)) + 1;
  int week = (ordinal - wd + 10) / 7;
  int year = date.year;
  if (week < 1) {
    --year;
    week = iso_weeks_in_year(year);
  } else if (week > iso_weeks_in_year(year)) {
    ++year;
    week = 1;
  }
  return {year, week};
}

std::string iso_week_label(IsoWeek w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
  return buf;
}

}  // namespace attnloop
