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
#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/vocabulary.hpp"

namespace lenbeam {

/// Deterministic order used wherever two hypotheses compare equal on score:
/// shorter sequences first, then lexicographic by label index.
inline bool tie_break_before(const LabelSequence& a, const LabelSequence& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// An ongoing (not yet ended) partial label sequence.
///
/// `state` is the scorer state *before* the last label was consumed; the
/// next expansion feeds `last_label()` into the scorer together with it.
template <typename State>
struct Hypothesis {
  LabelSequence labels;
  LogProb score = LogProb::one();
  State state{};

  Label last_label() const {
    return labels.empty() ? kStartLabel : labels.back();
  }
};

/// A terminated sequence (last label is EOS) with its score decomposition.
///
/// For the proposed search `final_score == p_b + p_not_end`; the simple
/// search stores `p_b = raw_score`, `p_not_end = 0`. `rank_score` is what
/// k-best ranking uses: the final probability for the proposed search and
/// the heuristic score (possibly length normalized) for the simple search.
struct EndedHypothesis {
  LabelSequence labels;
  LogProb raw_score = LogProb::zero();
  LogProb p_b = LogProb::zero();
  LogProb p_not_end = LogProb::one();
  LogProb final_score = LogProb::zero();
  double rank_score = -std::numeric_limits<double>::infinity();

  std::size_t length() const { return labels.size(); }

  // Label sequence without the trailing EOS.
  LabelSequence output() const {
    if (labels.empty()) return {};
    return LabelSequence(labels.begin(), labels.end() - 1);
  }
};

// Strict ranking: higher rank score first, then the tie-break order.
inline bool ranks_before(const EndedHypothesis& a, const EndedHypothesis& b) {
  if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
  return tie_break_before(a.labels, b.labels);
}

/// Best-k store of ended hypotheses, kept sorted by `ranks_before`.
class KBestStore {
 public:
  explicit KBestStore(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("k-best capacity must be >= 1");
  }

  void insert(EndedHypothesis hyp) {
    if (full() && !ranks_before(hyp, entries_.back())) return;
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), hyp,
                                ranks_before);
    entries_.insert(pos, std::move(hyp));
    if (entries_.size() > capacity_) entries_.pop_back();
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= capacity_; }
  const std::vector<EndedHypothesis>& entries() const { return entries_; }
  const EndedHypothesis& operator[](std::size_t i) const { return entries_[i]; }

  // The final probability any later ending must beat to enter the store:
  // the worst retained entry once full, otherwise zero probability. For
  // k = 1 this is the best ended hypothesis.
  LogProb admission_bound() const {
    return full() ? entries_.back().final_score : LogProb::zero();
  }

 private:
  std::size_t capacity_;
  std::vector<EndedHypothesis> entries_;
};

enum class StopReason { kEarlyStop, kMaxLength, kBeamExhausted };

inline std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kEarlyStop:
      return "early_stop";
    case StopReason::kMaxLength:
      return "max_length";
    case StopReason::kBeamExhausted:
      return "beam_exhausted";
  }
  return "unknown";
}

struct DecodeResult {
  KBestStore kbest;
  std::size_t steps_taken = 0;
  StopReason stop_reason = StopReason::kMaxLength;
};

/// MAP decision: the top entry of the store.
inline const EndedHypothesis& map_decision(const KBestStore& kbest) {
  if (kbest.empty()) throw SearchError("no ended hypothesis found");
  return kbest[0];
}

}  // namespace lenbeam
