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

#include <optional>

#include "lenbeam/error.hpp"
#include "lenbeam/log_prob.hpp"

namespace lenbeam {

/// Length heuristics of the simple beam search. All knobs are optional;
/// a default-constructed config is plain simple search.
struct HeuristicConfig {
  bool length_normalize = false;
  std::optional<double> eos_threshold_factor;
  std::optional<double> length_reward;

  bool any() const {
    return length_normalize || eos_threshold_factor || length_reward;
  }

  void validate() const {
    if (eos_threshold_factor && !(*eos_threshold_factor > 0.0))
      throw ConfigError("EOS threshold factor must be > 0");
  }
};

/// Score divided by the number of emitted labels (EOS counted).
inline double length_normalized_score(LogProb score, std::size_t length) {
  if (length == 0) throw Error("length normalization of an empty sequence");
  return score.value() / static_cast<double>(length);
}

/// EOS threshold: admit the end label iff its score beats `factor` times
/// the best non-end score. Scores are negative, so a factor above one
/// loosens the test and a factor below one tightens it.
inline bool eos_admission(double eos_score, double best_active_score,
                          double factor) {
  return eos_score > factor * best_active_score;
}

/// Score used for ranking and pruning under `heur`: the raw score plus the
/// length reward, divided by the length when normalizing.
inline double heuristic_score(LogProb raw, std::size_t length,
                              const HeuristicConfig& heur) {
  double s = raw.value();
  if (heur.length_reward) s += *heur.length_reward * double(length);
  if (heur.length_normalize && length > 0) s /= double(length);
  return s;
}

}  // namespace lenbeam
