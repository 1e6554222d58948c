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

#include <cmath>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/table_model.hpp"

namespace lenbeam {

/// Parameters of a table model that prefers ending early over producing a
/// known target sequence.
///
/// Along every proper prefix of `target` the next target label gets
/// `on_target_mass`, EOS gets `eos_leak` and the remaining non-EOS labels
/// share the rest uniformly. After the full target EOS gets
/// `final_eos_mass`. Histories that leave the target back off to a context
/// keyed on their last label: uniform over non-EOS labels plus
/// `off_target_eos_mass` on EOS. A history ending in the first target label
/// resumes the target.
struct BiasedModelSpec {
  Vocabulary vocab;
  LabelSequence target;
  double eos_leak = 0.1;
  double on_target_mass = 0.5;
  double final_eos_mass = 0.9;
  double off_target_eos_mass = 0.0;
};

// q("$") and q(target "$") of the constructed model in closed form.
inline double biased_short_ending_probability(const BiasedModelSpec& spec) {
  return spec.eos_leak;
}
inline double biased_target_probability(const BiasedModelSpec& spec) {
  return std::pow(spec.on_target_mass, static_cast<double>(spec.target.size())) *
         spec.final_eos_mass;
}

// True when the immediate ending outscores the full target:
// eps > rho^L * final_eos_mass.
inline bool has_length_bias_trap(const BiasedModelSpec& spec) {
  return biased_short_ending_probability(spec) >
         biased_target_probability(spec);
}

inline TableModel make_length_biased_model(const BiasedModelSpec& spec) {
  const Vocabulary& vocab = spec.vocab;
  const Label eos = vocab.eos();
  const std::size_t others = vocab.size() - 1;  // non-EOS label count
  const double eps = spec.eos_leak;
  const double rho = spec.on_target_mass;

  if (spec.target.empty()) throw ConfigError("target must be nonempty");
  for (Label l : spec.target) {
    if (l >= vocab.size() || vocab.is_eos(l))
      throw ConfigError("target contains EOS or an unknown label");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw ConfigError("eos_leak must be in [0,1)");
  if (!(rho > 0.0 && rho <= 1.0))
    throw ConfigError("on_target_mass must be in (0,1]");
  if (eps + rho > 1.0 + 1e-12)
    throw ConfigError("eos_leak + on_target_mass exceeds 1");
  if (others == 1 && eps + rho < 1.0 - 1e-12)
    throw ConfigError("no other labels to receive the remaining mass");
  if (!(spec.final_eos_mass > 0.0 && spec.final_eos_mass <= 1.0))
    throw ConfigError("final_eos_mass must be in (0,1]");
  if (!(spec.off_target_eos_mass >= 0.0 && spec.off_target_eos_mass < 1.0))
    throw ConfigError("off_target_eos_mass must be in [0,1)");

  TableModel::ContextTable contexts;
  LabelSequence prefix;
  for (Label next : spec.target) {
    std::vector<double> probs(vocab.size(), 0.0);
    const double rest = others > 1 ? (1.0 - rho - eps) / double(others - 1) : 0.0;
    for (Label l = 0; l < vocab.size(); ++l) {
      if (l == eos)
        probs[l] = eps;
      else
        probs[l] = l == next ? rho : rest;
    }
    contexts.emplace(prefix, std::move(probs));
    prefix.push_back(next);
  }
  {
    std::vector<double> probs(vocab.size(),
                              (1.0 - spec.final_eos_mass) / double(others));
    probs[eos] = spec.final_eos_mass;
    contexts.emplace(prefix, std::move(probs));
  }
  std::vector<double> off(vocab.size(),
                          (1.0 - spec.off_target_eos_mass) / double(others));
  off[eos] = spec.off_target_eos_mass;
  for (Label l = 0; l < vocab.size(); ++l) {
    if (l != eos) contexts.emplace(LabelSequence{l}, off);  // keeps prefixes
  }
  return TableModel(vocab, contexts, 1e-9);
}

}  // namespace lenbeam
