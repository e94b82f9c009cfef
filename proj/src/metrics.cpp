// Copyright 2026 The Vidalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidalign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vidalign {

double plcc(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw std::invalid_argument("plcc: need two vectors of equal length >= 2");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("plcc: undefined for zero-variance input");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // 1-based ranks i+1 .. j+1 averaged over the tie run.
    const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() != x.size()) {
    throw std::invalid_argument("srcc: need two vectors of equal length >= 2");
  }
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  try {
    return plcc(rx, ry);
  } catch (const std::domain_error&) {
    throw std::domain_error("srcc: undefined for all-tied input");
  }
}

double krcc(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw std::invalid_argument("krcc: need two vectors of equal length >= 2");
  }
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                 (n0 - static_cast<double>(ties_y)));
  if (denom == 0.0) {
    throw std::domain_error("krcc: undefined for all-tied input");
  }
  return static_cast<double>(concordant - discordant) / denom;
}

namespace {

PairLabel predicted_label(const PairEvalRecord& r, double tie_threshold) {
  if (r.pred_choice.has_value()) return *r.pred_choice;
  const double gap = r.pred_score_a - r.pred_score_b;
  if (std::abs(gap) < tie_threshold) return PairLabel::kTie;
  return gap >= 0.0 ? PairLabel::kA : PairLabel::kB;
}

double three_way_accuracy(std::span<const PairEvalRecord> records,
                          double tie_threshold) {
  int correct = 0;
  for (const PairEvalRecord& r : records) {
    if (predicted_label(r, tie_threshold) == r.gt_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace

PreferenceAccuracy preference_accuracy(
    std::span<const PairEvalRecord> records, PreferenceMode mode,
    std::span<const PairEvalRecord> calibration) {
  PreferenceAccuracy out;
  if (mode == PreferenceMode::kDiff) {
    int correct = 0;
    for (const PairEvalRecord& r : records) {
      if (r.gt_label == PairLabel::kTie) {
        ++out.n_dropped;
        continue;
      }
      // Threshold 0: a choice prediction or the sign of the score gap.
      if (predicted_label(r, 0.0) == r.gt_label) ++correct;
      ++out.n_used;
    }
    if (out.n_used == 0) {
      throw std::invalid_argument("preference_accuracy: no usable records");
    }
    out.accuracy = static_cast<double>(correct) / out.n_used;
    return out;
  }

  if (records.empty()) {
    throw std::invalid_argument("preference_accuracy: no records");
  }
  if (calibration.empty()) {
    throw std::invalid_argument(
        "preference_accuracy: tau mode needs a calibration split");
  }
  for (const PairEvalRecord& r : calibration) {
    if (r.pred_choice.has_value()) {
      throw std::invalid_argument(
          "preference_accuracy: tau mode needs score-based predictions");
    }
  }

  // Deterministic grid: zero, each observed |gap|, and one step past it
  // (strict comparison means the threshold must exceed a gap to tie it).
  std::vector<double> candidates{0.0};
  for (const PairEvalRecord& r : calibration) {
    const double g = std::abs(r.pred_score_a - r.pred_score_b);
    candidates.push_back(g);
    candidates.push_back(std::nextafter(g, std::numeric_limits<double>::max()));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  double best_tau = 0.0;
  double best_acc = -1.0;
  for (double tau : candidates) {
    const double acc = three_way_accuracy(calibration, tau);
    if (acc > best_acc) {  // smallest maximizer wins
      best_acc = acc;
      best_tau = tau;
    }
  }

  out.fitted_threshold = best_tau;
  out.n_used = static_cast<int>(records.size());
  out.accuracy = three_way_accuracy(records, best_tau);
  return out;
}

std::string format_metric_report(const MetricReport& report) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  if (report.plcc) os << "plcc=" << *report.plcc << "\n";
  if (report.srcc) os << "srcc=" << *report.srcc << "\n";
  if (report.krcc) os << "krcc=" << *report.krcc << "\n";
  if (report.tau) {
    os << "tau_acc=" << report.tau->accuracy << "\n";
    os << "tau_threshold=" << report.tau->fitted_threshold << "\n";
  }
  if (report.diff) {
    os << "diff_acc=" << report.diff->accuracy << "\n";
    os << "diff_dropped=" << report.diff->n_dropped << "\n";
  }
  os << "n_scored=" << report.n_scored << "\n";
  os << "n_pairs=" << report.n_pairs << "\n";
  return os.str();
}

}  // namespace vidalign
