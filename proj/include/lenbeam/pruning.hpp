// Copyright 2026 The lenbeam Authors.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/hypothesis.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/scorer.hpp"

namespace lenbeam {

/// Beam pruning: optional score threshold relative to the best candidate,
/// then a hard size limit.
struct PruneConfig {
  std::size_t beam_size = 64;
  std::optional<double> score_threshold;

  void validate() const {
    if (beam_size == 0) throw ConfigError("beam size must be >= 1");
    if (score_threshold && !(*score_threshold > 0.0))
      throw ConfigError("score threshold must be > 0");
  }
};

/// One extension of a beam entry: parent index into the expanded beam, the
/// appended label and the accumulated score.
struct Candidate {
  std::size_t parent = 0;
  Label label = 0;
  LogProb score = LogProb::zero();
};

template <typename State>
struct Expansion {
  std::vector<Candidate> candidates;
  // Per parent: scorer state after consuming the parent's last label, and
  // the step distribution that produced its candidates.
  std::vector<State> next_states;
  std::vector<std::vector<LogProb>> step_scores;
};

/// Extends every hypothesis by every label (EOS included).
template <Scorer S>
Expansion<typename S::State> expand(
    std::span<const Hypothesis<typename S::State>> beam, const S& scorer) {
  Expansion<typename S::State> out;
  const std::size_t vocab_size = scorer.vocabulary().size();
  out.candidates.reserve(beam.size() * vocab_size);
  out.next_states.reserve(beam.size());
  out.step_scores.reserve(beam.size());
  for (std::size_t i = 0; i < beam.size(); ++i) {
    auto step = scorer.step(beam[i].state, beam[i].last_label());
    if (step.scores.size() != vocab_size)
      throw SearchError("scorer returned a distribution of the wrong size");
    for (Label l = 0; l < vocab_size; ++l)
      out.candidates.push_back({i, l, beam[i].score + step.scores[l]});
    out.next_states.push_back(std::move(step.next));
    out.step_scores.push_back(std::move(step.scores));
  }
  return out;
}

/// Generic pruning over items with a real-valued score. Items scoring -inf
/// are always dropped. Survivors come back best first; equal scores are
/// ordered by `tie_before`.
template <typename T, typename ScoreFn, typename TieBefore>
std::vector<T> prune_by_score(std::vector<T> items, const PruneConfig& cfg,
                              ScoreFn score, TieBefore tie_before) {
  cfg.validate();
  std::erase_if(items, [&](const T& x) {
    const double s = score(x);
    return std::isinf(s) && s < 0;
  });
  if (items.empty()) return items;
  if (cfg.score_threshold) {
    double best = score(items.front());
    for (const T& x : items) best = std::max(best, score(x));
    const double cutoff = best - *cfg.score_threshold;
    std::erase_if(items, [&](const T& x) { return score(x) < cutoff; });
  }
  auto before = [&](const T& a, const T& b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return tie_before(a, b);
  };
  if (items.size() > cfg.beam_size) {
    std::nth_element(items.begin(),
                     items.begin() + static_cast<std::ptrdiff_t>(cfg.beam_size),
                     items.end(), before);
    items.resize(cfg.beam_size);
  }
  std::sort(items.begin(), items.end(), before);
  return items;
}

/// Prunes the candidates of one expansion of `beam`. EOS candidates compete
/// with the others; the caller splits them off afterwards.
template <typename State>
std::vector<Candidate> prune_beam(std::vector<Candidate> candidates,
                                  std::span<const Hypothesis<State>> beam,
                                  const PruneConfig& cfg) {
  // All candidates extend same-length parents, so the tie-break reduces
  // to lexicographic order of (parent labels, label).
  auto tie = [&](const Candidate& a, const Candidate& b) {
    if (a.parent != b.parent) {
      const auto& pa = beam[a.parent].labels;
      const auto& pb = beam[b.parent].labels;
      if (pa != pb) return pa < pb;
    }
    return a.label < b.label;
  };
  return prune_by_score(
      std::move(candidates), cfg,
      [](const Candidate& c) { return c.score.value(); }, tie);
}

template <typename State>
LabelSequence extended_labels(std::span<const Hypothesis<State>> beam,
                              const Candidate& c) {
  LabelSequence labels = beam[c.parent].labels;
  labels.push_back(c.label);
  return labels;
}

}  // namespace lenbeam
