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

#include <array>
#include <vector>

#include "doctest.h"
#include "vidalign/tournament.hpp"

namespace {

using namespace vidalign;

CandidatePool pool_of(int n) {
  CandidatePool pool;
  pool.prompt_id = "p0";
  for (int i = 0; i < n; ++i) {
    pool.candidates.push_back({static_cast<double>(i), 1.0});
  }
  return pool;
}

int candidate_index(const CandidatePool& pool, std::span<const double> v) {
  for (std::size_t i = 0; i < pool.candidates.size(); ++i) {
    if (pool.candidates[i] == std::vector<double>(v.begin(), v.end())) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

TEST_CASE("tournament over every judge-outcome matrix for four candidates") {
  const CandidatePool pool = pool_of(4);
  // The 6 unordered pairs in canonical (i < j) order.
  const std::array<std::pair<int, int>, 6> pairs = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  for (int mask = 0; mask < 64; ++mask) {
    const Judge judge = [&](std::span<const double> a,
                            std::span<const double> b) {
      const int i = static_cast<int>(a[0]);
      const int j = static_cast<int>(b[0]);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k] == std::make_pair(std::min(i, j), std::max(i, j))) {
          const bool lower_wins = (mask >> k) & 1;
          const bool a_is_lower = i < j;
          return lower_wins == a_is_lower ? Choice::kA : Choice::kB;
        }
      }
      throw std::logic_error("unknown pair");
    };

    // Count-and-tiebreak oracle.
    std::array<int, 4> counts{};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const bool lower_wins = (mask >> k) & 1;
      ++counts[lower_wins ? pairs[k].first : pairs[k].second];
    }
    int want_w = 0, want_l = 0;
    for (int i = 1; i < 4; ++i) {
      if (counts[i] > counts[want_w]) want_w = i;
      if (counts[i] < counts[want_l]) want_l = i;
    }
    if (want_w == want_l) {  // all counts equal
      want_w = 0;
      want_l = 1;
    }

    const TournamentResult res = run_tournament(pool, judge);
    CHECK(candidate_index(pool, res.pair.winner) == want_w);
    CHECK(candidate_index(pool, res.pair.loser) == want_l);
    CHECK(res.win_counts == std::vector<int>(counts.begin(), counts.end()));

    // Every unordered pair judged exactly once, lower index shown as A.
    REQUIRE(res.audit.size() == 6);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      CHECK(res.audit[k].i < res.audit[k].j);
    }
  }
}

TEST_CASE("transitive order and three-cycle examples") {
  const CandidatePool pool = pool_of(3);
  const Judge transitive = [](std::span<const double> a,
                              std::span<const double> b) {
    return a[0] < b[0] ? Choice::kA : Choice::kB;  // lower index always wins
  };
  const TournamentResult t = run_tournament(pool, transitive);
  CHECK(candidate_index(pool, t.pair.winner) == 0);
  CHECK(candidate_index(pool, t.pair.loser) == 2);

  // 0 beats 1, 1 beats 2, 2 beats 0: all counts one, index tie-break.
  const Judge cycle = [](std::span<const double> a, std::span<const double> b) {
    const int i = static_cast<int>(a[0]);
    const int j = static_cast<int>(b[0]);
    if ((i + 1) % 3 == j) return Choice::kA;
    return Choice::kB;
  };
  const TournamentResult c = run_tournament(pool, cycle);
  CHECK(candidate_index(pool, c.pair.winner) == 0);
  CHECK(candidate_index(pool, c.pair.loser) == 1);
}

TEST_CASE("two candidates: the single judgment decides") {
  const CandidatePool pool = pool_of(2);
  const Judge b_wins = [](std::span<const double>, std::span<const double>) {
    return Choice::kB;
  };
  const TournamentResult res = run_tournament(pool, b_wins);
  CHECK(candidate_index(pool, res.pair.winner) == 1);
  CHECK(candidate_index(pool, res.pair.loser) == 0);
}

TEST_CASE("refresh pairs the new winner with old losers, unconditionally") {
  const CandidatePool pool = pool_of(3);
  const Judge worst_wins = [](std::span<const double> a,
                              std::span<const double> b) {
    return a[0] > b[0] ? Choice::kA : Choice::kB;  // higher index wins
  };
  WinLosePair old_pair;
  old_pair.prompt_id = "p0";
  old_pair.winner = {10.0, 1.0};
  old_pair.loser = {-10.0, 1.0};

  const RefreshResult res =
      refresh_pairs(pool, std::vector<WinLosePair>{old_pair}, worst_wins);
  REQUIRE(res.pairs.size() == 1);
  CHECK(res.warnings == 0);
  CHECK(candidate_index(pool, res.pairs[0].winner) == 2);
  CHECK(res.pairs[0].loser == old_pair.loser);
  CHECK(res.pairs[0].provenance == WinLosePair::Provenance::kRefreshedCHat);

  const RefreshResult empty =
      refresh_pairs(pool, std::vector<WinLosePair>{}, worst_wins);
  CHECK(empty.pairs.empty());
  CHECK(empty.warnings == 1);

  // Old pairs from another prompt are skipped with a warning.
  WinLosePair other = old_pair;
  other.prompt_id = "p1";
  const RefreshResult skipped =
      refresh_pairs(pool, std::vector<WinLosePair>{other}, worst_wins);
  CHECK(skipped.pairs.empty());
  CHECK(skipped.warnings == 1);
}

TEST_CASE("presentation bias probe") {
  const CandidatePool pool = pool_of(4);
  const Judge symmetric = [](std::span<const double> a,
                             std::span<const double> b) {
    return a[0] > b[0] ? Choice::kA : Choice::kB;
  };
  CHECK(presentation_bias_probe(symmetric, pool) == 1.0);

  const Judge always_a = [](std::span<const double>, std::span<const double>) {
    return Choice::kA;
  };
  CHECK(presentation_bias_probe(always_a, pool) == 0.0);
}

}  // namespace
