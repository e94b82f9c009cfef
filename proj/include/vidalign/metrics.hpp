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

#ifndef VIDALIGN_METRICS_HPP_
#define VIDALIGN_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidalign/types.hpp"

namespace vidalign {

// Pearson linear correlation. Throws on n < 2 or zero variance; silent
// zeros would corrupt aggregate tables.
double plcc(std::span<const double> x, std::span<const double> y);

// Fractional (average) ranks; ties get the mean of their rank range.
std::vector<double> fractional_ranks(std::span<const double> x);

// Spearman: Pearson on fractional ranks.
double srcc(std::span<const double> x, std::span<const double> y);

// Kendall tau-b (tie-adjusted).
double krcc(std::span<const double> x, std::span<const double> y);

struct PairEvalRecord {
  double pred_score_a = 0.0;
  double pred_score_b = 0.0;
  std::optional<PairLabel> pred_choice;
  PairLabel gt_label = PairLabel::kA;
};

enum class PreferenceMode { kTau, kDiff };

struct PreferenceAccuracy {
  double accuracy = 0.0;
  double fitted_threshold = 0.0;  // tau mode only
  int n_used = 0;
  int n_dropped = 0;  // diff mode: gt ties excluded
};

// diff: drop gt ties, score pred_choice (or the sign of the score gap)
// against gt. tau: fit a tie threshold on the calibration split by grid
// search over observed |score gaps| (three-way accuracy, smallest
// maximizer wins), then apply it to `records`.
PreferenceAccuracy preference_accuracy(
    std::span<const PairEvalRecord> records, PreferenceMode mode,
    std::span<const PairEvalRecord> calibration = {});

struct MetricReport {
  std::optional<double> plcc;
  std::optional<double> srcc;
  std::optional<double> krcc;
  std::optional<PreferenceAccuracy> tau;
  std::optional<PreferenceAccuracy> diff;
  int n_scored = 0;
  int n_pairs = 0;
};

// Flat key-value lines for CLI reporting.
std::string format_metric_report(const MetricReport& report);

}  // namespace vidalign

#endif  // VIDALIGN_METRICS_HPP_
