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

#include "vidalign/tournament.hpp"

#include <stdexcept>

namespace vidalign {

TournamentResult run_tournament(const CandidatePool& pool,
                                const Judge& judge) {
  const int n = static_cast<int>(pool.candidates.size());
  if (n < 2) throw std::invalid_argument("run_tournament: need >= 2 candidates");

  TournamentResult result;
  result.win_counts.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Choice verdict =
          judge(pool.candidates[static_cast<std::size_t>(i)],
                pool.candidates[static_cast<std::size_t>(j)]);
      const int w = verdict == Choice::kA ? i : j;
      ++result.win_counts[static_cast<std::size_t>(w)];
      result.audit.push_back({pool.prompt_id, i, j, verdict});
    }
  }

  int winner = 0;
  int loser = -1;
  for (int k = 1; k < n; ++k) {
    if (result.win_counts[static_cast<std::size_t>(k)] >
        result.win_counts[static_cast<std::size_t>(winner)]) {
      winner = k;
    }
  }
  for (int k = 0; k < n; ++k) {
    if (k == winner) continue;
    if (loser < 0 || result.win_counts[static_cast<std::size_t>(k)] <
                         result.win_counts[static_cast<std::size_t>(loser)]) {
      loser = k;
    }
  }

  result.pair.prompt_id = pool.prompt_id;
  result.pair.winner = pool.candidates[static_cast<std::size_t>(winner)];
  result.pair.loser = pool.candidates[static_cast<std::size_t>(loser)];
  result.pair.provenance = WinLosePair::Provenance::kInitialC;
  return result;
}

RefreshResult refresh_pairs(const CandidatePool& new_pool,
                            std::span<const WinLosePair> old_pairs,
                            const Judge& judge) {
  RefreshResult out;
  const TournamentResult t = run_tournament(new_pool, judge);
  bool found = false;
  for (const WinLosePair& old : old_pairs) {
    if (old.prompt_id != new_pool.prompt_id) continue;
    found = true;
    WinLosePair p;
    p.prompt_id = new_pool.prompt_id;
    p.winner = t.pair.winner;
    p.loser = old.loser;
    p.provenance = WinLosePair::Provenance::kRefreshedCHat;
    out.pairs.push_back(std::move(p));
  }
  if (!found) ++out.warnings;
  return out;
}

double presentation_bias_probe(const Judge& judge, const CandidatePool& pool) {
  const int n = static_cast<int>(pool.candidates.size());
  if (n < 2) throw std::invalid_argument("bias probe: need >= 2 candidates");
  int stable = 0;
  int total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Choice fwd = judge(pool.candidates[static_cast<std::size_t>(i)],
                               pool.candidates[static_cast<std::size_t>(j)]);
      const Choice rev = judge(pool.candidates[static_cast<std::size_t>(j)],
                               pool.candidates[static_cast<std::size_t>(i)]);
      // Stable when both presentations pick the same underlying candidate.
      if ((fwd == Choice::kA) == (rev == Choice::kB)) ++stable;
      ++total;
    }
  }
  return static_cast<double>(stable) / total;
}

}  // namespace vidalign
