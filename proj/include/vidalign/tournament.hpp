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

#ifndef VIDALIGN_TOURNAMENT_HPP_
#define VIDALIGN_TOURNAMENT_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vidalign/dpo.hpp"
#include "vidalign/types.hpp"

namespace vidalign {

struct CandidatePool {
  std::string prompt_id;
  std::vector<std::vector<double>> candidates;
};

// Verdict for an ordered presentation (a shown first, b second). No tie
// verdict exists inside tournaments.
using Judge = std::function<Choice(std::span<const double> a,
                                   std::span<const double> b)>;

struct JudgmentRow {
  std::string prompt_id;
  int i = 0;
  int j = 0;
  Choice verdict = Choice::kA;  // relative to presentation order (i as A)
};

struct TournamentResult {
  WinLosePair pair;
  std::vector<int> win_counts;
  std::vector<JudgmentRow> audit;
};

// Round-robin over all C(N,2) unordered pairs, each judged once with the
// lower index presented as A. Winner is the argmax of win counts, loser
// the argmin, ties broken by lowest candidate index; when every candidate
// ties, the two lowest indices are returned so winner != loser always.
TournamentResult run_tournament(const CandidatePool& pool, const Judge& judge);

struct RefreshResult {
  std::vector<WinLosePair> pairs;  // provenance kRefreshedCHat
  int warnings = 0;                // prompts with no matching old pair
};

// Pairs the new pool's tournament winner with every old loser of the same
// prompt, unconditionally (the refresh does not re-judge winner vs loser).
RefreshResult refresh_pairs(const CandidatePool& new_pool,
                            std::span<const WinLosePair> old_pairs,
                            const Judge& judge);

// Fraction of unordered pairs whose verdict is stable under swapping the
// presentation order.
double presentation_bias_probe(const Judge& judge, const CandidatePool& pool);

}  // namespace vidalign

#endif  // VIDALIGN_TOURNAMENT_HPP_
