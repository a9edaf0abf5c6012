// Copyright 2026 The pdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <tuple>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/snr.hpp"

namespace pdp {

enum class TieBreak {
  // Sequential scan keeping the last point whose distance is <= the running
  // best (initialised to delta).
  kPaper,
  // Candidates within kTieWindow of the minimum distance form a tie set,
  // ordered by smallest feature norm, then eps_v >= 0 before eps_v < 0,
  // then lowest id.
  kNormFirst,
};

inline constexpr double kTieWindow = 1e-9;

struct SelectionResult {
  std::optional<CandidateScore> best;
  std::vector<CandidateScore> scores;  // in dataset order
  double target = 0.0;
};

namespace internal {

inline auto tie_key(const CandidateScore& c) {
  return std::make_tuple(c.feature_norm, c.eps_v < 0.0 ? 1 : 0, c.id);
}

inline bool tie_less(const CandidateScore& a, const CandidateScore& b) {
  return tie_key(a) < tie_key(b);
}

}  // namespace internal

// Scans every point once and returns the one whose d_v is closest to
// 2 phi_inv(1 - alpha). `best` is empty when no point is within hp.delta;
// a distance exactly equal to delta is accepted.
inline SelectionResult find_perfect_deleted_point(
    const Dataset& ds, const Weights& w, const HyperParams& hp,
    TieBreak tie_break = TieBreak::kNormFirst) {
  SelectionResult out;
  out.scores = scan_candidates(ds, w, hp);
  out.target = advantage_target(hp.alpha);

  if (tie_break == TieBreak::kPaper) {
    double running = hp.delta;
    const CandidateScore* chosen = nullptr;
    for (const CandidateScore& c : out.scores) {
      if (c.distance <= running) {
        running = c.distance;
        chosen = &c;
      }
    }
    if (chosen != nullptr) out.best = *chosen;
    return out;
  }

  double min_distance = out.scores.front().distance;
  for (const CandidateScore& c : out.scores) {
    min_distance = std::min(min_distance, c.distance);
  }
  if (min_distance > hp.delta) return out;
  const double cutoff = std::min(min_distance + kTieWindow, hp.delta);
  const CandidateScore* chosen = nullptr;
  for (const CandidateScore& c : out.scores) {
    if (c.distance > cutoff) continue;
    if (chosen == nullptr || internal::tie_less(c, *chosen)) chosen = &c;
  }
  out.best = *chosen;
  return out;
}

// Top-k candidates by ascending distance, in the same order the selector
// would prefer them. Ignores delta.
inline std::vector<CandidateScore> rank_candidates(
    const Dataset& ds, const Weights& w, const HyperParams& hp, std::size_t k,
    TieBreak tie_break = TieBreak::kNormFirst) {
  internal::require(k >= 1, ErrorCode::kDomainError, "k must be >= 1");
  std::vector<CandidateScore> scores = scan_candidates(ds, w, hp);
  k = std::min(k, scores.size());

  if (tie_break == TieBreak::kPaper) {
    // Equal distances: later scan position wins, as in the sequential scan.
    std::stable_sort(scores.begin(), scores.end(),
                     [](const CandidateScore& a, const CandidateScore& b) {
                       if (a.distance != b.distance) {
                         return a.distance < b.distance;
                       }
                       return a.position > b.position;
                     });
    scores.resize(k);
    return scores;
  }

  std::sort(scores.begin(), scores.end(),
            [](const CandidateScore& a, const CandidateScore& b) {
              return a.distance < b.distance;
            });
  // Peel off tie sets relative to the smallest remaining distance.
  std::vector<CandidateScore> ranked;
  ranked.reserve(scores.size());
  std::size_t start = 0;
  while (start < scores.size() && ranked.size() < k) {
    const double cutoff = scores[start].distance + kTieWindow;
    std::size_t end = start;
    while (end < scores.size() && scores[end].distance <= cutoff) ++end;
    std::sort(scores.begin() + start, scores.begin() + end, internal::tie_less);
    ranked.insert(ranked.end(), scores.begin() + start, scores.begin() + end);
    start = end;
  }
  ranked.resize(k);
  return ranked;
}

}  // namespace pdp
