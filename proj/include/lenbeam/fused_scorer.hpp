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

#include <memory>
#include <utility>

#include "lenbeam/error.hpp"
#include "lenbeam/scorer.hpp"

namespace lenbeam {

/// Shallow fusion of a sequence model with an optional label-history LM:
/// per label, log p_model + alpha * log p_lm. The sum is not renormalized,
/// so the product over steps is exactly the fused sequence score.
///
/// Both scorers are held through shared pointers so one LM can serve many
/// concurrent decodes.
template <Scorer Model, Scorer Lm = Model>
class FusedScorer {
 public:
  struct State {
    typename Model::State model{};
    typename Lm::State lm{};
  };

  explicit FusedScorer(std::shared_ptr<const Model> model,
                       std::shared_ptr<const Lm> lm = nullptr,
                       double alpha = 0.0)
      : model_(std::move(model)), lm_(std::move(lm)), alpha_(alpha) {
    if (!model_) throw ConfigError("fused scorer needs a model");
    if (!(alpha_ >= 0.0)) throw ConfigError("LM scale must be nonnegative");
    if (lm_ && !(lm_->vocabulary() == model_->vocabulary()))
      throw ConfigError("LM vocabulary does not match the model vocabulary");
  }

  explicit FusedScorer(Model model)
      : FusedScorer(std::make_shared<const Model>(std::move(model))) {}

  FusedScorer(Model model, Lm lm, double alpha)
      : FusedScorer(std::make_shared<const Model>(std::move(model)),
                    std::make_shared<const Lm>(std::move(lm)), alpha) {}

  const Vocabulary& vocabulary() const { return model_->vocabulary(); }
  double alpha() const { return alpha_; }
  bool has_lm() const { return lm_ != nullptr; }

  State initial_state() const {
    State s;
    s.model = model_->initial_state();
    if (lm_) s.lm = lm_->initial_state();
    return s;
  }

  StepOutput<State> step(const State& state, Label last) const {
    auto model_out = model_->step(state.model, last);
    StepOutput<State> out{std::move(model_out.scores), {}};
    out.next.model = std::move(model_out.next);
    if (lm_) {
      auto lm_out = lm_->step(state.lm, last);
      for (std::size_t i = 0; i < out.scores.size(); ++i)
        out.scores[i] += lm_out.scores[i].pow(alpha_);
      out.next.lm = std::move(lm_out.next);
    }
    return out;
  }

 private:
  std::shared_ptr<const Model> model_;
  std::shared_ptr<const Lm> lm_;
  double alpha_;
};

}  // namespace lenbeam
