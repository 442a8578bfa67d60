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

#include "attnloop/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "attnloop/errors.hpp"
#include "attnloop/stats.hpp"

namespace attnloop {

namespace {

struct UserActivity {
  std::uint64_t count = 0;
  std::int64_t last_t = std::numeric_limits<std::int64_t>::min();
};

std::unordered_map<std::string, UserActivity> activity_by_user(const EventLog& log) {
  std::unordered_map<std::string, UserActivity> users;
  users.reserve(log.records.size() / 2 + 1);
  for (const auto& r : log.records) {
    auto& u = users[r.user];
    ++u.count;
    u.last_t = std::max(u.last_t, r.t);
  }
  return users;
}

double checked_threshold_cutoff(const EventLog& log, double cutoff_seconds) {
  if (!(cutoff_seconds > 0.0)) {
    throw UsageError("inactivity cutoff must be > 0 seconds");
  }
  return static_cast<double>(log.capture_time) - cutoff_seconds;
}

}  // namespace

ContributionHistogram contribution_histogram(const EventLog& log,
                                             double inactivity_cutoff_seconds) {
  if (log.records.empty()) {
    throw InsufficientDataError("contribution_histogram: empty event log");
  }
  const double stopped_before = checked_threshold_cutoff(log, inactivity_cutoff_seconds);
  ContributionHistogram hist;
  for (const auto& [user, activity] : activity_by_user(log)) {
    if (static_cast<double>(activity.last_t) <= stopped_before) {
      ++hist.counts[activity.count];
      ++hist.total_users;
    } else {
      ++hist.excluded_users;
    }
  }
  return hist;
}

HazardCurve hazard(const ContributionHistogram& hist) {
  if (hist.counts.empty()) throw InsufficientDataError("hazard: empty histogram");
  HazardCurve curve;
  curve.n.reserve(hist.counts.size());
  // Exact integer tail sums, accumulated from the top.
  std::uint64_t at_risk = 0;
  for (auto it = hist.counts.rbegin(); it != hist.counts.rend(); ++it) {
    at_risk += it->second;
    curve.n.push_back(it->first);
    curve.at_risk.push_back(at_risk);
    curve.h.push_back(static_cast<double>(it->second) / static_cast<double>(at_risk));
  }
  std::reverse(curve.n.begin(), curve.n.end());
  std::reverse(curve.at_risk.begin(), curve.at_risk.end());
  std::reverse(curve.h.begin(), curve.h.end());
  return curve;
}

double fit_geometric(const ContributionHistogram& hist) {
  if (hist.total_users < 1) throw InsufficientDataError("fit_geometric: no users in histogram");
  double weighted = 0.0;
  for (const auto& [n, count] : hist.counts) {
    weighted += static_cast<double>(n) * static_cast<double>(count);
  }
  return static_cast<double>(hist.total_users) / weighted;
}

PowerLawFit fit_powerlaw(const ContributionHistogram& hist, std::uint64_t x_min) {
  if (x_min < 1) throw UsageError("fit_powerlaw: x_min must be >= 1");
  PowerLawFit fit;
  fit.x_min = x_min;
  double sum_log_ratio = 0.0;
  double sum_log_n = 0.0;
  for (auto it = hist.counts.lower_bound(x_min); it != hist.counts.end(); ++it) {
    const auto [n, count] = *it;
    const double c = static_cast<double>(count);
    fit.n_tail += count;
    sum_log_ratio += c * std::log(static_cast<double>(n) / (static_cast<double>(x_min) - 0.5));
    sum_log_n += c * std::log(static_cast<double>(n));
  }
  if (fit.n_tail < 10) {
    throw InsufficientDataError("fit_powerlaw: fewer than 10 observations with n >= x_min");
  }
  fit.alpha_hat = 1.0 + static_cast<double>(fit.n_tail) / sum_log_ratio;
  fit.log_likelihood = -fit.alpha_hat * sum_log_n -
                       static_cast<double>(fit.n_tail) *
                           std::log(hurwitz_zeta(fit.alpha_hat, static_cast<double>(x_min)));
  return fit;
}

double compare_geometric_vs_powerlaw(const ContributionHistogram& hist, std::uint64_t x_min) {
  const PowerLawFit pl = fit_powerlaw(hist, x_min);
  // Tail-conditional geometric on the same support: n - x_min + 1 ~ Geom(p).
  double excess = 0.0;  // sum of (n_i - x_min)
  for (auto it = hist.counts.lower_bound(x_min); it != hist.counts.end(); ++it) {
    excess += static_cast<double>(it->first - x_min) * static_cast<double>(it->second);
  }
  const double m = static_cast<double>(pl.n_tail);
  const double p = m / (m + excess);
  double ll_geom = m * std::log(p);
  if (excess > 0.0) ll_geom += excess * std::log1p(-p);
  return (pl.log_likelihood - ll_geom) / m;
}

double popularity_threshold(std::vector<double> attentions, double q) {
  if (attentions.empty()) throw InsufficientDataError("popularity_threshold: no attention values");
  if (!(q > 0.0 && q < 1.0)) throw UsageError("popularity_threshold: q must be in (0,1)");
  // Nearest-rank: k = ceil(q*M). The tiny relative shrink keeps q*M that is
  // an integer up to representation error (e.g. q=0.9, M=10) at that integer.
  const double scaled = q * static_cast<double>(attentions.size()) * (1.0 - 1e-12);
  auto k = static_cast<std::size_t>(std::ceil(scaled));
  k = std::clamp<std::size_t>(k, 1, attentions.size());
  std::nth_element(attentions.begin(), attentions.begin() + (k - 1), attentions.end());
  return attentions[k - 1];
}

RatioSeries reverse_index_ratio(const EventLog& log, std::uint32_t K, double threshold,
                                double inactivity_cutoff_seconds) {
  if (K < 1) throw UsageError("reverse_index_ratio: K must be >= 1");
  const double stopped_before = checked_threshold_cutoff(log, inactivity_cutoff_seconds);

  std::unordered_map<std::string, std::vector<std::pair<std::int64_t, double>>> per_user;
  for (const auto& r : log.records) {
    per_user[r.user].emplace_back(r.t, r.x);
  }

  std::vector<std::uint64_t> popular(K, 0);
  std::uint64_t qualifying = 0;
  for (auto& [user, items] : per_user) {
    if (items.size() < K) continue;
    std::sort(items.begin(), items.end());
    if (static_cast<double>(items.back().first) > stopped_before) continue;  // still active
    ++qualifying;
    for (std::uint32_t j = 1; j <= K; ++j) {
      if (items[items.size() - j].second > threshold) ++popular[j - 1];
    }
  }

  RatioSeries series;
  if (qualifying == 0) return series;
  for (std::uint32_t j = K; j >= 1; --j) {
    series.labels.push_back("-" + std::to_string(j));
    series.values.push_back(static_cast<double>(popular[j - 1]) /
                            static_cast<double>(qualifying));
    series.counts.push_back(qualifying);
  }
  return series;
}

WeeklyRatios weekly_final_ratio(const EventLog& log, double threshold,
                                double finality_lag_seconds) {
  if (log.records.empty()) throw InsufficientDataError("weekly_final_ratio: empty event log");
  if (!(finality_lag_seconds > 0.0)) {
    throw UsageError("weekly_final_ratio: finality lag must be > 0 seconds");
  }

  // A user's final record: maximum t, ties broken by item id so externally
  // parsed logs with equal timestamps stay deterministic.
  std::unordered_map<std::string, const EventRecord*> last_record;
  for (const auto& r : log.records) {
    auto [it, inserted] = last_record.try_emplace(r.user, &r);
    if (!inserted) {
      const EventRecord* cur = it->second;
      if (r.t > cur->t || (r.t == cur->t && r.item > cur->item)) it->second = &r;
    }
  }
  const double final_before = static_cast<double>(log.capture_time) - finality_lag_seconds;

  struct WeekAcc {
    std::uint64_t total = 0, popular = 0, final_total = 0, final_popular = 0;
  };
  std::map<IsoWeek, WeekAcc> weeks;
  for (const auto& r : log.records) {
    auto& acc = weeks[iso_week_utc(r.t)];
    const bool is_popular = r.x > threshold;
    ++acc.total;
    acc.popular += is_popular ? 1 : 0;
    const bool is_final =
        last_record.at(r.user) == &r && static_cast<double>(r.t) <= final_before;
    if (is_final) {
      ++acc.final_total;
      acc.final_popular += is_popular ? 1 : 0;
    }
  }
  if (weeks.size() < 2) {
    throw InsufficientDataError("weekly_final_ratio: log spans fewer than 2 ISO weeks");
  }

  WeeklyRatios out;
  for (const auto& [week, acc] : weeks) {
    if (acc.final_total == 0) continue;  // unpaired week
    const std::string label = iso_week_label(week);
    out.all.labels.push_back(label);
    out.all.values.push_back(static_cast<double>(acc.popular) / static_cast<double>(acc.total));
    out.all.counts.push_back(acc.total);
    out.final_only.labels.push_back(label);
    out.final_only.values.push_back(static_cast<double>(acc.final_popular) /
                                    static_cast<double>(acc.final_total));
    out.final_only.counts.push_back(acc.final_total);
  }
  if (out.all.size() < 2) {
    throw InsufficientDataError("weekly_final_ratio: fewer than 2 weeks with final submissions");
  }
  return out;
}

TTestResult paired_t_test_less(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("paired_t_test_less: series lengths differ");
  if (x.size() < 2) throw UsageError("paired_t_test_less: need at least 2 pairs");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  const double md = mean(d);
  const double sd = std::sqrt(sample_variance(d));
  if (sd == 0.0) {
    const int sign = md < 0.0 ? -1 : (md > 0.0 ? 1 : 0);
    throw DegenerateDataError(
        "paired_t_test_less: zero variance in differences; mean difference sign = " +
        std::to_string(sign));
  }
  TTestResult result;
  const auto m = static_cast<double>(x.size());
  result.t_stat = md / (sd / std::sqrt(m));
  result.p_value = student_t_cdf(result.t_stat, m - 1.0);
  return result;
}

namespace {

std::int64_t fixed_width_bin(double key, double width) {
  auto b = static_cast<std::int64_t>(std::ceil(key / width));
  // Float-robust edges for (w*(b-1), w*b].
  while (static_cast<double>(b - 1) * width >= key) --b;
  while (static_cast<double>(b) * width < key) ++b;
  return b;
}

std::int64_t pow2_bin(double key) {
  auto b = static_cast<std::int64_t>(std::floor(std::log2(key))) + 1;
  while (key < std::exp2(static_cast<double>(b - 1))) --b;
  while (key >= std::exp2(static_cast<double>(b))) ++b;
  return b;
}

}  // namespace

BinnedMeans binned_mean(std::span<const std::pair<double, double>> pairs, BinScheme scheme,
                        double width) {
  if (pairs.empty()) throw UsageError("binned_mean: empty input");
  if (scheme == BinScheme::kFixedWidth && !(width >= 1.0)) {
    throw UsageError("binned_mean: fixed-width scheme needs width >= 1");
  }

  struct Acc {
    double key_sum = 0.0, val_sum = 0.0;
    std::uint64_t count = 0;
  };
  std::map<std::int64_t, Acc> bins;
  BinnedMeans out;
  for (const auto& [key, value] : pairs) {
    if (!(key > 0.0)) {
      ++out.rejected;
      continue;
    }
    const std::int64_t b =
        scheme == BinScheme::kFixedWidth ? fixed_width_bin(key, width) : pow2_bin(key);
    auto& acc = bins[b];
    acc.key_sum += key;
    acc.val_sum += value;
    ++acc.count;
  }

  out.rows.reserve(bins.size());
  for (const auto& [b, acc] : bins) {
    BinnedRow row;
    row.bin = b;
    if (scheme == BinScheme::kFixedWidth) {
      row.lo = static_cast<double>(b - 1) * width;
      row.hi = static_cast<double>(b) * width;
    } else {
      row.lo = std::exp2(static_cast<double>(b - 1));
      row.hi = std::exp2(static_cast<double>(b));
    }
    row.mean_key = acc.key_sum / static_cast<double>(acc.count);
    row.mean = acc.val_sum / static_cast<double>(acc.count);
    row.count = acc.count;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace attnloop
