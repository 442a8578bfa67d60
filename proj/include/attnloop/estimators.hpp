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
//
// Estimators over event logs: contribution histograms, the discrete stopping
// hazard, geometric and power-law tail fits, popularity thresholds and ratio
// series, the paired one-sided t-test, and binned means.
//
// All functions are pure over immutable inputs and safe to call from any
// number of threads.

#ifndef ATTNLOOP_ESTIMATORS_HPP_
#define ATTNLOOP_ESTIMATORS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "attnloop/events.hpp"

namespace attnloop {

// N(n): number of users whose final contribution count is n. Only users
// inactive for the full cutoff window before capture are counted; the rest
// are excluded as possibly still active.
struct ContributionHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total_users = 0;     // sum of counts
  std::uint64_t excluded_users = 0;  // users considered still active

  std::uint64_t count_at(std::uint64_t n) const {
    auto it = counts.find(n);
    return it == counts.end() ? 0 : it->second;
  }
};

// h(n) = N(n) / sum_{m>=n} N(m), one entry per observed n; h == 1 at the
// largest observed n by construction.
struct HazardCurve {
  std::vector<std::uint64_t> n;
  std::vector<double> h;
  std::vector<std::uint64_t> at_risk;  // sum_{m>=n} N(m)
};

struct PowerLawFit {
  double alpha_hat = 0.0;  // tail exponent of p_n ~ n^-alpha
  std::uint64_t x_min = 1;
  std::uint64_t n_tail = 0;      // observations with n >= x_min
  double log_likelihood = 0.0;  // under the zeta-normalized discrete model
};

// Indexed ratio values: labels are reverse indices ("-K".."-1") or ISO week
// labels; counts hold the denominators.
struct RatioSeries {
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<std::uint64_t> counts;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
};

ContributionHistogram contribution_histogram(const EventLog& log,
                                             double inactivity_cutoff_seconds);

HazardCurve hazard(const ContributionHistogram& hist);

// MLE of the per-step stop probability for a geometric lifetime on support
// n >= 1: p_hat = total_users / sum(n * N(n)). (The continue/stop naming in
// the geometric benchmark is often muddled; p_n = p (1-p)^{n-1} sums to one
// only when p is the stop probability, which is what this returns.)
double fit_geometric(const ContributionHistogram& hist);

// Discrete power-law tail MLE (continuity-corrected):
//   alpha_hat = 1 + n_tail / sum ln(n_i / (x_min - 1/2)),
// log-likelihood reported under p(n) = n^-alpha / hzeta(alpha, x_min).
// Requires at least 10 observations with n >= x_min.
PowerLawFit fit_powerlaw(const ContributionHistogram& hist, std::uint64_t x_min);

// Per-observation-normalized log-likelihood difference between the
// power-law tail fit and a tail-conditional geometric fit on n >= x_min.
// Positive favors the power law.
double compare_geometric_vs_powerlaw(const ContributionHistogram& hist, std::uint64_t x_min);

// Nearest-rank quantile: the ceil(q*M)-th order statistic. An item is
// "popular" iff its attention strictly exceeds the returned threshold.
double popularity_threshold(std::vector<double> attentions, double q);

// Over users that stopped (per the inactivity cutoff) with at least K
// submissions: the fraction of popular j-th-last submissions, labeled
// "-K".."-1". Empty series when no user qualifies.
RatioSeries reverse_index_ratio(const EventLog& log, std::uint32_t K, double threshold,
                                double inactivity_cutoff_seconds);

struct WeeklyRatios {
  RatioSeries all;         // r(t): popular fraction of all submissions per ISO week
  RatioSeries final_only;  // r_f(t): same, restricted to final submissions
};

// Weekly popular ratios, paired: weeks without any final submission are
// dropped from both series. A submission is final when it is its
// contributor's last record and at least finality_lag_seconds older than
// capture_time.
WeeklyRatios weekly_final_ratio(const EventLog& log, double threshold,
                                double finality_lag_seconds);

struct TTestResult {
  double t_stat = 0.0;
  double p_value = 0.0;
};

// Paired t-test of the one-sided alternative mean(x - y) < 0. Throws
// DegenerateDataError (message carries the sign of mean(x-y)) when the
// differences have zero variance.
TTestResult paired_t_test_less(std::span<const double> x, std::span<const double> y);

enum class BinScheme {
  kFixedWidth,  // bin b covers (w*(b-1), w*b]  — right inclusive
  kPow2,        // bin b covers [2^(b-1), 2^b)  — left inclusive
};

struct BinnedRow {
  std::int64_t bin = 0;
  double lo = 0.0;  // exclusive for kFixedWidth, inclusive for kPow2
  double hi = 0.0;  // inclusive for kFixedWidth, exclusive for kPow2
  double mean_key = 0.0;
  double mean = 0.0;
  std::uint64_t count = 0;
};

struct BinnedMeans {
  std::vector<BinnedRow> rows;       // nonempty bins, ascending
  std::uint64_t rejected = 0;        // pairs with nonpositive keys
};

BinnedMeans binned_mean(std::span<const std::pair<double, double>> pairs, BinScheme scheme,
                        double width = 0.0);

}  // namespace attnloop

#endif  // ATTNLOOP_ESTIMATORS_HPP_
