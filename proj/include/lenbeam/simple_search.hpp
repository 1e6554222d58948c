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
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/heuristics.hpp"
#include "lenbeam/hypothesis.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/pruning.hpp"
#include "lenbeam/scorer.hpp"

namespace lenbeam {

struct SimpleSearchOptions {
  PruneConfig prune;
  HeuristicConfig heuristics;
  std::size_t max_steps = 100;
  std::size_t k = 1;
};

/// Best heuristic score any ending of an ongoing prefix (raw score `raw`,
/// `length` labels) could reach at length <= max(max_steps, length + 1).
/// Raw scores only fall along extensions and the heuristic is monotone in
/// the raw score, so evaluating both ends of the length range suffices.
inline double optimistic_rank(LogProb raw, std::size_t length,
                              std::size_t max_steps,
                              const HeuristicConfig& heur) {
  const std::size_t shortest = length + 1;
  const std::size_t longest = std::max(max_steps, shortest);
  return std::max(heuristic_score(raw, shortest, heur),
                  heuristic_score(raw, longest, heur));
}

/// Label-synchronous beam search driven by the (heuristic) sequence score.
///
/// At every step the ongoing hypotheses are extended by every label. EOS
/// extensions that pass the optional EOS threshold become ended hypotheses
/// and go to the k-best store without competing for beam slots. The EOS
/// threshold compares the EOS step score with the best non-EOS step score
/// of the same parent, length reward included.
///
/// Ended hypotheses do compete with ongoing ones: an ongoing extension is
/// dropped once no ending of it within `max_steps` could rank above the
/// worst entry of a full k-best store (see optimistic_rank). The rest are
/// pruned by threshold and beam size. The search stops when no ongoing
/// hypothesis survives or after `max_steps` steps. The dropped extensions
/// can never produce a better ending, so with an unlimited beam and no
/// heuristics the result is the exact MAP sequence.
template <Scorer S>
DecodeResult simple_beam_search(const S& scorer,
                                const SimpleSearchOptions& opts) {
  using State = typename S::State;
  opts.prune.validate();
  opts.heuristics.validate();
  if (opts.max_steps == 0) throw ConfigError("max steps must be >= 1");
  const Label eos = scorer.vocabulary().eos();
  const HeuristicConfig& heur = opts.heuristics;
  const double reward = heur.length_reward.value_or(0.0);

  struct Ranked {
    Candidate candidate;
    double rank;
  };

  DecodeResult result{KBestStore(opts.k), 0, StopReason::kMaxLength};
  std::vector<Hypothesis<State>> beam{
      {LabelSequence{}, LogProb::one(), scorer.initial_state()}};

  for (std::size_t step = 1;; ++step) {
    result.steps_taken = step;
    std::span<const Hypothesis<State>> parents(beam);
    auto expansion = expand(parents, scorer);

    std::vector<Ranked> ongoing;
    ongoing.reserve(expansion.candidates.size());
    for (const Candidate& c : expansion.candidates) {
      if (c.score.is_zero()) continue;
      const double rank = heuristic_score(c.score, step, heur);
      if (c.label != eos) {
        ongoing.push_back({c, rank});
        continue;
      }
      if (heur.eos_threshold_factor) {
        const auto& local = expansion.step_scores[c.parent];
        double best_other = -std::numeric_limits<double>::infinity();
        for (Label l = 0; l < local.size(); ++l) {
          if (l != eos) best_other = std::max(best_other, local[l].value());
        }
        if (!eos_admission(local[eos].value() + reward, best_other + reward,
                           *heur.eos_threshold_factor))
          continue;
      }
      EndedHypothesis h;
      h.labels = extended_labels(parents, c);
      h.raw_score = c.score;
      h.p_b = c.score;
      h.p_not_end = LogProb::one();
      h.final_score = c.score;
      h.rank_score = rank;
      result.kbest.insert(std::move(h));
    }

    if (result.kbest.full()) {
      const double best_ended = result.kbest.entries().back().rank_score;
      std::erase_if(ongoing, [&](const Ranked& r) {
        return optimistic_rank(r.candidate.score, step, opts.max_steps, heur) <=
               best_ended;
      });
    }
    auto tie = [&](const Ranked& a, const Ranked& b) {
      const auto& pa = parents[a.candidate.parent].labels;
      const auto& pb = parents[b.candidate.parent].labels;
      if (pa != pb) return pa < pb;
      return a.candidate.label < b.candidate.label;
    };
    auto survivors = prune_by_score(
        std::move(ongoing), opts.prune, [](const Ranked& r) { return r.rank; },
        tie);

    std::vector<Hypothesis<State>> next_beam;
    next_beam.reserve(survivors.size());
    for (const Ranked& r : survivors) {
      const Candidate& c = r.candidate;
      next_beam.push_back({extended_labels(parents, c), c.score,
                           expansion.next_states[c.parent]});
    }
    beam = std::move(next_beam);

    if (beam.empty()) {
      result.stop_reason = result.kbest.empty() ? StopReason::kBeamExhausted
                                                : StopReason::kEarlyStop;
      break;
    }
    if (step >= opts.max_steps) {
      result.stop_reason = StopReason::kMaxLength;
      break;
    }
  }
  return result;
}

template <Scorer S>
DecodeResult simple_beam_search(const S& scorer, const PruneConfig& prune,
                                const HeuristicConfig& heur,
                                std::size_t max_steps, std::size_t k) {
  return simple_beam_search(scorer, SimpleSearchOptions{prune, heur, max_steps, k});
}

}  // namespace lenbeam
