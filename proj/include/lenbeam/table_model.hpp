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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/scorer.hpp"
#include "lenbeam/vocabulary.hpp"

namespace lenbeam {

/// Conditional label distribution given by an explicit table of contexts.
///
/// Each context is a label history mapped to a probability vector over the
/// whole vocabulary (EOS included). A history resolves to its longest
/// suffix present in the table; the empty context is mandatory and catches
/// everything else, like the unigram level of a backoff n-gram model.
class TableModel {
 public:
  using State = LabelSequence;  // history, truncated to max_order()
  using ContextTable = std::map<LabelSequence, std::vector<double>>;

  // Vectors are linear-domain probabilities. Each must be nonnegative and
  // sum to one within `tolerance`; accepted vectors are renormalized.
  TableModel(Vocabulary vocab, const ContextTable& contexts,
             double tolerance = 1e-6)
      : vocab_(std::move(vocab)) {
    if (!contexts.contains(LabelSequence{}))
      throw ConfigError("model has no empty-history context");
    for (const auto& [history, probs] : contexts) {
      const std::string key = vocab_.join(history);
      for (Label l : history) {
        if (l >= vocab_.size() || vocab_.is_eos(l))
          throw ConfigError("context '" + key + "' contains an invalid label");
      }
      if (probs.size() != vocab_.size())
        throw ConfigError("context '" + key + "' has " +
                          std::to_string(probs.size()) +
                          " probabilities, vocabulary has " +
                          std::to_string(vocab_.size()));
      double sum = 0.0;
      for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0)
          throw ConfigError("context '" + key + "' has a negative or "
                            "non-finite probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > tolerance)
        throw ConfigError("context '" + key + "' sums to " +
                          std::to_string(sum) + ", not 1");
      std::vector<double> normalized;
      std::vector<LogProb> logs;
      normalized.reserve(probs.size());
      logs.reserve(probs.size());
      for (double p : probs) {
        normalized.push_back(p / sum);
        logs.push_back(LogProb::from_probability(p / sum));
      }
      max_order_ = std::max(max_order_, history.size());
      linear_.emplace(history, std::move(normalized));
      table_.emplace(history, std::move(logs));
    }
  }

  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t max_order() const { return max_order_; }
  const std::map<LabelSequence, std::vector<LogProb>>& contexts() const {
    return table_;
  }
  // Linear-domain vectors after renormalization, for serialization.
  const ContextTable& probabilities() const { return linear_; }

  /// Log distribution of the label following `history` (longest suffix
  /// match). `history` must not contain EOS.
  std::span<const LogProb> lookup(std::span<const Label> history) const {
    const std::size_t longest = std::min(max_order_, history.size());
    LabelSequence key;
    for (std::size_t len = longest + 1; len-- > 0;) {
      key.assign(history.end() - static_cast<std::ptrdiff_t>(len),
                 history.end());
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    // Unreachable: the empty context is validated at construction.
    throw Error("table model lost its empty context");
  }

  State initial_state() const { return {}; }

  StepOutput<State> step(const State& state, Label last) const {
    State next = state;
    if (last != kStartLabel) {
      if (vocab_.is_eos(last)) throw SearchError("cannot extend past EOS");
      next.push_back(last);
      if (next.size() > max_order_)
        next.erase(next.begin(),
                   next.end() - static_cast<std::ptrdiff_t>(max_order_));
    }
    auto dist = lookup(next);
    return {std::vector<LogProb>(dist.begin(), dist.end()), std::move(next)};
  }

 private:
  Vocabulary vocab_;
  std::map<LabelSequence, std::vector<LogProb>> table_;
  ContextTable linear_;
  std::size_t max_order_ = 0;
};

static_assert(Scorer<TableModel>);

}  // namespace lenbeam
