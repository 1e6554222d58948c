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

// Exhaustive reference computations for small models. Nothing here uses the
// search code: every sequence up to the length limit is scored directly
// from the scorer.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/hypothesis.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/scorer.hpp"

namespace lenbeam {

struct EnumerationLimit {
  std::size_t max_length = 6;  // L
  std::size_t max_sequences = 1'000'000;

  // Refuses when |V u {$}|^L exceeds the cap.
  void validate(std::size_t vocab_size) const {
    if (max_length == 0) throw ConfigError("enumeration length must be >= 1");
    double count = 1.0;
    for (std::size_t i = 0; i < max_length; ++i) count *= double(vocab_size);
    if (count > double(max_sequences))
      throw ConfigError("enumeration of " + std::to_string(vocab_size) + "^" +
                        std::to_string(max_length) +
                        " sequences exceeds the cap");
  }
};

/// q of every ended sequence of length <= L, plus the mass of the length-L
/// prefixes that have not ended (the residual).
struct PosteriorTable {
  std::map<LabelSequence, LogProb> endings;
  LogProb residual = LogProb::zero();
};

namespace detail {

template <typename State>
struct Prefix {
  LabelSequence labels;
  LogProb score;
  State state;
};

// Calls visit(level_candidates, eos) for N = 1..L, where the level holds
// every extension (EOS included) of every non-ended prefix of length N-1.
// The visitor sees (labels, score) pairs.
template <Scorer S, typename Visit>
void for_each_level(const S& scorer, const EnumerationLimit& limit,
                    Visit&& visit) {
  using State = typename S::State;
  const Vocabulary& vocab = scorer.vocabulary();
  limit.validate(vocab.size());
  std::vector<Prefix<State>> frontier{
      {LabelSequence{}, LogProb::one(), scorer.initial_state()}};
  for (std::size_t n = 1; n <= limit.max_length; ++n) {
    std::vector<std::pair<LabelSequence, LogProb>> level;
    std::vector<Prefix<State>> next_frontier;
    for (const auto& p : frontier) {
      const Label last = p.labels.empty() ? kStartLabel : p.labels.back();
      auto out = scorer.step(p.state, last);
      for (Label l = 0; l < vocab.size(); ++l) {
        LabelSequence labels = p.labels;
        labels.push_back(l);
        const LogProb score = p.score + out.scores[l];
        if (!vocab.is_eos(l)) next_frontier.push_back({labels, score, out.next});
        level.emplace_back(std::move(labels), score);
      }
    }
    visit(n, level);
    frontier = std::move(next_frontier);
  }
}

inline double log_deviation(LogProb a, LogProb b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  return std::abs(a.value() - b.value());
}

}  // namespace detail

template <Scorer S>
PosteriorTable enumerate_posteriors(const S& scorer,
                                    const EnumerationLimit& limit) {
  const Vocabulary& vocab = scorer.vocabulary();
  PosteriorTable table;
  std::vector<LogProb> residual;
  detail::for_each_level(scorer, limit, [&](std::size_t n, const auto& level) {
    for (const auto& [labels, score] : level) {
      if (vocab.is_eos(labels.back()))
        table.endings.emplace(labels, score);
      else if (n == limit.max_length)
        residual.push_back(score);
    }
  });
  if (!residual.empty()) table.residual = log_sum_exp(residual);
  return table;
}

/// Highest-q ended sequence within the limit (ties: shorter, then lexical).
template <Scorer S>
EndedHypothesis exact_map(const S& scorer, const EnumerationLimit& limit) {
  const auto table = enumerate_posteriors(scorer, limit);
  const std::pair<const LabelSequence, LogProb>* best = nullptr;
  for (const auto& entry : table.endings) {
    if (entry.second.is_zero()) continue;
    if (!best || entry.second > best->second ||
        (entry.second == best->second &&
         tie_break_before(entry.first, best->first)))
      best = &entry;
  }
  if (!best) throw SearchError("no ended sequence within the length limit");
  EndedHypothesis h;
  h.labels = best->first;
  h.raw_score = h.p_b = h.final_score = best->second;
  h.p_not_end = LogProb::one();
  h.rank_score = best->second.value();
  return h;
}

/// p(len = N), N = 1..L, two ways: chaining the unlimited-beam ending
/// probabilities, and summing q over the endings of each length.
struct LengthDistribution {
  std::vector<LogProb> ending_probability;  // p_N($)
  std::vector<LogProb> chained;
  std::vector<LogProb> enumerated;
  double max_deviation = 0.0;  // linear domain
};

template <Scorer S>
LengthDistribution length_distribution(const S& scorer,
                                       const EnumerationLimit& limit) {
  const Vocabulary& vocab = scorer.vocabulary();
  LengthDistribution out;
  LogProb not_end = LogProb::one();
  detail::for_each_level(scorer, limit, [&](std::size_t, const auto& level) {
    std::vector<LogProb> all, ended;
    for (const auto& [labels, score] : level) {
      all.push_back(score);
      if (vocab.is_eos(labels.back())) ended.push_back(score);
    }
    const LogProb total = log_sum_exp(all);
    const LogProb ended_mass = log_sum_exp(ended);
    LogProb p_end = LogProb::zero();
    if (!total.is_zero() && !ended_mass.is_zero()) p_end = ended_mass - total;
    out.ending_probability.push_back(p_end);
    out.chained.push_back(p_end + not_end);
    out.enumerated.push_back(ended_mass);
    not_end += log1m_exp(p_end);
  });
  for (std::size_t i = 0; i < out.chained.size(); ++i) {
    out.max_deviation =
        std::max(out.max_deviation, std::abs(out.chained[i].probability() -
                                             out.enumerated[i].probability()));
  }
  return out;
}

/// Final-probability decomposition computed with no pruning at all.
struct UnlimitedReplay {
  struct Entry {
    LogProb p_b, p_not_end, final_score, raw;
  };
  std::map<LabelSequence, Entry> endings;
  std::vector<LogProb> not_end_products;  // prod_{n<N}(1 - p_n($)), per N
  std::vector<LogProb> step_masses;       // sum of q over B_N, per N
  double max_final_deviation = 0.0;       // max |final - raw|, log domain
  double max_mass_deviation = 0.0;        // max |product - mass|, log domain
};

/// Replays the final-probability pipeline with an unlimited beam and checks
/// that it reproduces q exactly. Throws OracleFailure beyond `tolerance`.
template <Scorer S>
UnlimitedReplay replay_with_unlimited_beam(const S& scorer,
                                           const EnumerationLimit& limit,
                                           double tolerance = 1e-9) {
  const Vocabulary& vocab = scorer.vocabulary();
  UnlimitedReplay out;
  LogProb not_end = LogProb::one();
  detail::for_each_level(scorer, limit, [&](std::size_t, const auto& level) {
    std::vector<LogProb> all, ended;
    for (const auto& [labels, score] : level) {
      all.push_back(score);
      if (vocab.is_eos(labels.back())) ended.push_back(score);
    }
    const LogProb total = log_sum_exp(all);
    out.not_end_products.push_back(not_end);
    out.step_masses.push_back(total);
    out.max_mass_deviation = std::max(out.max_mass_deviation,
                                      detail::log_deviation(not_end, total));
    for (const auto& [labels, score] : level) {
      if (!vocab.is_eos(labels.back())) continue;
      UnlimitedReplay::Entry e;
      e.raw = score;
      e.p_b = total.is_zero() ? LogProb::zero() : score - total;
      e.p_not_end = not_end;
      e.final_score = e.p_b + e.p_not_end;
      out.max_final_deviation = std::max(
          out.max_final_deviation, detail::log_deviation(e.final_score, score));
      out.endings.emplace(labels, e);
    }
    const LogProb ended_mass = log_sum_exp(ended);
    const LogProb p_end = total.is_zero() || ended_mass.is_zero()
                              ? LogProb::zero()
                              : ended_mass - total;
    not_end += log1m_exp(p_end);
  });
  if (out.max_final_deviation > tolerance || out.max_mass_deviation > tolerance)
    throw OracleFailure("unlimited-beam identity violated: final deviation " +
                        std::to_string(out.max_final_deviation) +
                        ", mass deviation " +
                        std::to_string(out.max_mass_deviation));
  return out;
}

}  // namespace lenbeam
