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

#include <cstdint>
#include <string>
#include <vector>

#include "lenbeam/biased_model.hpp"
#include "lenbeam/random_model.hpp"
#include "lenbeam/table_model.hpp"

namespace lenbeam {

struct SuiteUtterance {
  std::string id;
  TableModel model;
  std::size_t input_length = 0;  // T
  LabelSequence reference;
};

struct BiasedSuiteSpec {
  std::size_t count = 50;
  std::size_t min_length = 8;
  std::size_t max_length = 16;
  std::size_t target_labels = 4;  // targets draw from the first labels
  std::size_t filler_labels = 4;  // never in a target
  double eos_leak = 0.1;
  double on_target_mass = 0.5;
  double input_length_factor = 2.0;  // T = factor * target length
  std::uint64_t seed = 20260101;
};

inline Vocabulary biased_suite_vocabulary(const BiasedSuiteSpec& spec) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < spec.target_labels + spec.filler_labels; ++i)
    labels.push_back(std::string(1, char('a' + i)));
  return Vocabulary::with_eos(std::move(labels), "</s>");
}

/// Length-biased utterances: each has its own model whose target is the
/// reference, and every one of them prefers ending immediately.
inline std::vector<SuiteUtterance> make_biased_suite(const BiasedSuiteSpec& spec) {
  if (spec.target_labels == 0 || spec.min_length == 0 ||
      spec.min_length > spec.max_length)
    throw ConfigError("invalid suite lengths or labels");
  const Vocabulary vocab = biased_suite_vocabulary(spec);
  SeededRng rng(spec.seed);
  std::vector<SuiteUtterance> out;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const std::size_t len =
        spec.min_length + rng.index(spec.max_length - spec.min_length + 1);
    LabelSequence target(len);
    for (Label& l : target) l = static_cast<Label>(rng.index(spec.target_labels));
    BiasedModelSpec m{vocab, target, spec.eos_leak, spec.on_target_mass};
    char id[32];
    std::snprintf(id, sizeof id, "utt%03zu", i);
    out.push_back({id, make_length_biased_model(m),
                   static_cast<std::size_t>(spec.input_length_factor * double(len)),
                   target});
  }
  return out;
}

/// Small model where length normalization prefers a long looping output to
/// the sequence with the best raw score ("a b").
inline SuiteUtterance make_looping_utterance() {
  Vocabulary vocab = Vocabulary::with_eos({"a", "b", "c", "d"}, "</s>");
  const Label a = 0, b = 1, c = 2, d = 3;
  TableModel::ContextTable t;
  //                 a      b      c      d      </s>
  t[{}] = {0.70, 0.10, 0.10, 0.05, 0.05};
  t[{a}] = {0.05, 0.80, 0.05, 0.05, 0.05};
  t[{a, b}] = {0.025, 0.025, 0.025, 0.025, 0.90};
  t[{b}] = {0.20, 0.20, 0.20, 0.20, 0.20};
  t[{c}] = {0.005, 0.005, 0.005, 0.975, 0.01};
  t[{d}] = {0.005, 0.005, 0.975, 0.005, 0.01};
  return {"loop000", TableModel(std::move(vocab), t), 42, {a, b}};
}

}  // namespace lenbeam
