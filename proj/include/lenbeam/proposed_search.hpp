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

// Beam search with explicit length modeling.
//
// At step N the pruned beam B_N holds every surviving extension, ended or
// not. An ended hypothesis a_1^N gets the final probability
//
//   p(a_1^N, len=N) = q(a_1^N) / sum_{B_N} q  *  prod_{n<N} (1 - p_n($))
//                     `------- p_b -------'     `------ p_not_end -----'
//
// with p_n($) the ended share of the beam mass at step n. Ended hypotheses
// leave the beam and go to a k-best store; they never prune ongoing ones.
// The search stops once prod_{n<=N}(1 - p_n($)) cannot beat the store, or
// at the length cap T.

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/hypothesis.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/pruning.hpp"
#include "lenbeam/scorer.hpp"

namespace lenbeam {

struct ProposedSearchOptions {
  PruneConfig prune;
  std::size_t max_length = 100;  // T
  std::size_t k = 1;
  // When false the search runs until T or until no hypothesis is left.
  bool early_stopping = true;
};

/// What happened at one search step; filled only when a trace is requested.
struct StepTrace {
  std::size_t step = 0;
  LogProb step_mass;        // log sum of q over the pruned beam
  LogProb ended_mass;       // log sum of q over its ended part
  LogProb not_end_before;   // prod_{n<N}(1 - p_n($))
  LogProb not_end_after;    // prod_{n<=N}(1 - p_n($))
  std::vector<LogProb> survivor_scores;
  std::vector<LabelSequence> ongoing;
  std::vector<LabelSequence> ended;
};
using SearchTrace = std::vector<StepTrace>;

/// log p_N($): ended mass over all surviving mass at one step.
inline LogProb ending_probability(std::span<const LogProb> ended,
                                  std::span<const LogProb> ongoing) {
  if (ended.empty() && ongoing.empty())
    throw SearchError("ending probability of an empty beam");
  if (ended.empty()) return LogProb::zero();
  std::vector<LogProb> all(ended.begin(), ended.end());
  all.insert(all.end(), ongoing.begin(), ongoing.end());
  return log_sum_exp(ended) - log_sum_exp(all);
}

inline EndedHypothesis final_probability(LabelSequence labels, LogProb raw,
                                         LogProb step_total_mass,
                                         LogProb p_not_end_acc) {
  EndedHypothesis h;
  h.labels = std::move(labels);
  h.raw_score = raw;
  h.p_b = raw - step_total_mass;
  h.p_not_end = p_not_end_acc;
  h.final_score = h.p_b + h.p_not_end;
  h.rank_score = h.final_score.value();
  return h;
}

/// Early-stopping test: no later ending can reach `bound`, or the length
/// cap is hit. An empty store gives bound = zero probability, which only
/// an exhausted beam (p_not_end = -inf) satisfies.
inline bool should_stop(LogProb p_not_end_through_n, LogProb bound,
                        std::size_t step, std::size_t max_length) {
  return p_not_end_through_n <= bound || step >= max_length;
}

template <Scorer S>
DecodeResult proposed_beam_search(const S& scorer,
                                  const ProposedSearchOptions& opts,
                                  SearchTrace* trace = nullptr) {
  using State = typename S::State;
  opts.prune.validate();
  if (opts.max_length == 0) throw ConfigError("max length must be >= 1");
  const Label eos = scorer.vocabulary().eos();

  DecodeResult result{KBestStore(opts.k), 0, StopReason::kMaxLength};
  std::vector<Hypothesis<State>> beam{
      {LabelSequence{}, LogProb::one(), scorer.initial_state()}};
  LogProb p_not_end = LogProb::one();

  for (std::size_t step = 1;; ++step) {
    result.steps_taken = step;
    std::span<const Hypothesis<State>> parents(beam);
    auto expansion = expand(parents, scorer);
    auto survivors =
        prune_beam(std::move(expansion.candidates), parents, opts.prune);
    if (survivors.empty()) {
      result.stop_reason = StopReason::kBeamExhausted;
      break;
    }

    std::vector<LogProb> all, ended, ongoing;
    for (const Candidate& c : survivors) {
      all.push_back(c.score);
      (c.label == eos ? ended : ongoing).push_back(c.score);
    }
    const LogProb step_mass = log_sum_exp(all);

    std::vector<Hypothesis<State>> next_beam;
    next_beam.reserve(ongoing.size());
    StepTrace record;
    for (const Candidate& c : survivors) {
      LabelSequence labels = extended_labels(parents, c);
      if (c.label == eos) {
        if (trace) record.ended.push_back(labels);
        result.kbest.insert(
            final_probability(std::move(labels), c.score, step_mass, p_not_end));
      } else {
        if (trace) record.ongoing.push_back(labels);
        next_beam.push_back(
            {std::move(labels), c.score, expansion.next_states[c.parent]});
      }
    }

    // 1 - p_N($) as the ongoing share of the step mass; clamped so float
    // noise cannot push the product above its previous value.
    LogProb not_end_share = LogProb::zero();
    if (!ongoing.empty())
      not_end_share = std::min(log_sum_exp(ongoing) - step_mass, LogProb::one());
    const LogProb p_not_end_next = p_not_end + not_end_share;

    if (trace) {
      record.step = step;
      record.step_mass = step_mass;
      record.ended_mass = ended.empty() ? LogProb::zero() : log_sum_exp(ended);
      record.not_end_before = p_not_end;
      record.not_end_after = p_not_end_next;
      record.survivor_scores = std::move(all);
      trace->push_back(std::move(record));
    }

    p_not_end = p_not_end_next;
    beam = std::move(next_beam);

    if (beam.empty()) {
      result.stop_reason = StopReason::kBeamExhausted;
      break;
    }
    if (opts.early_stopping &&
        should_stop(p_not_end, result.kbest.admission_bound(), step,
                    opts.max_length)) {
      result.stop_reason = p_not_end <= result.kbest.admission_bound()
                               ? StopReason::kEarlyStop
                               : StopReason::kMaxLength;
      break;
    }
    if (step >= opts.max_length) {
      result.stop_reason = StopReason::kMaxLength;
      break;
    }
  }
  return result;
}

template <Scorer S>
DecodeResult proposed_beam_search(const S& scorer, const PruneConfig& prune,
                                  std::size_t max_length, std::size_t k) {
  return proposed_beam_search(scorer, ProposedSearchOptions{prune, max_length, k});
}

}  // namespace lenbeam
