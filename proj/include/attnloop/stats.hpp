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

#ifndef ATTNLOOP_STATS_HPP_
#define ATTNLOOP_STATS_HPP_

#include <cstdint>
#include <span>
#include <string>

namespace attnloop {

double mean(std::span<const double> xs);
// Sample variance (M-1 denominator).
double sample_variance(std::span<const double> xs);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (Lentz), |error| < 1e-14 over the tested domain.
double regularized_incomplete_beta(double a, double b, double x);

// Lower-tail CDF of Student's t with `df` degrees of freedom, evaluated via
// the regularized incomplete beta.
double student_t_cdf(double t, double df);

// Hurwitz zeta sum_{k>=0} (q+k)^-s for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
// Ordinary least squares of y on x (unweighted).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct IsoWeek {
  int year = 0;  // ISO week-numbering year (differs from the civil year at edges)
  int week = 0;  // 1..53
  bool operator==(const IsoWeek&) const = default;
  auto operator<=>(const IsoWeek&) const = default;
};
// ISO-8601 week of an epoch timestamp, computed in UTC.
IsoWeek iso_week_utc(std::int64_t epoch_seconds);
// "GGGG-Www" label, e.g. "2008-W01".
std::string iso_week_label(IsoWeek w);

}  // namespace attnloop

#endif  // ATTNLOOP_STATS_HPP_
