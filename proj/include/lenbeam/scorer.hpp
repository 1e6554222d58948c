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

#include <concepts>
#include <vector>

#include "lenbeam/log_prob.hpp"
#include "lenbeam/vocabulary.hpp"

namespace lenbeam {

/// Result of one scorer step: a log-probability per vocabulary entry
/// (EOS included) and the state to feed into the following step.
template <typename State>
struct StepOutput {
  std::vector<LogProb> scores;
  State next;
};

/// A step-wise conditional label distribution.
///
/// `step(state, last)` consumes `last` (kStartLabel on the first step) and
/// returns the distribution of the following label. It must be a pure
/// function of its arguments.
template <typename S>
concept Scorer = requires(const S& scorer, const typename S::State& state,
                          Label last) {
  typename S::State;
  { scorer.vocabulary() } -> std::convertible_to<const Vocabulary&>;
  { scorer.initial_state() } -> std::same_as<typename S::State>;
  { scorer.step(state, last) } -> std::same_as<StepOutput<typename S::State>>;
};

}  // namespace lenbeam
