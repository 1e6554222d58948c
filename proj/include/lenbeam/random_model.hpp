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
#include <random>
#include <string>
#include <vector>

#include "lenbeam/table_model.hpp"

namespace lenbeam {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so uniform doubles are derived by hand to keep seeds portable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * double(n)) % n;
  }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct RandomModelSpec {
  std::size_t vocab_size = 3;  // including EOS
  std::size_t max_order = 2;
  std::size_t extra_contexts = 4;
  // Probability that a non-EOS entry is exactly zero.
  double zero_rate = 0.1;
};

inline Vocabulary random_model_vocabulary(std::size_t vocab_size) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i + 1 < vocab_size; ++i)
    labels.push_back(std::string(1, char('a' + i)));
  return Vocabulary::with_eos(std::move(labels), "</s>");
}

/// Random normalized backoff table. The empty context always gives EOS
/// and at least one other label nonzero mass.
inline TableModel make_random_table_model(SeededRng& rng,
                                          const RandomModelSpec& spec) {
  Vocabulary vocab = random_model_vocabulary(spec.vocab_size);
  const std::size_t n = vocab.size();
  auto random_vector = [&](bool keep_eos) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (Label l = 0; l < n; ++l) {
      const bool zero = !vocab.is_eos(l) && rng.chance(spec.zero_rate);
      p[l] = zero ? 0.0 : rng.uniform(0.05, 1.0);
      sum += p[l];
    }
    if (keep_eos && sum == p[vocab.eos()]) {
      p[0] = 0.5;
      sum += 0.5;
    }
    for (double& x : p) x /= sum;
    return p;
  };
  TableModel::ContextTable contexts;
  contexts.emplace(LabelSequence{}, random_vector(true));
  for (std::size_t i = 0; i < spec.extra_contexts && spec.max_order > 0; ++i) {
    LabelSequence history(1 + rng.index(spec.max_order));
    for (Label& l : history) {
      l = static_cast<Label>(rng.index(n - 1));
      if (l >= vocab.eos()) ++l;
    }
    contexts.emplace(history, random_vector(false));
  }
  return TableModel(std::move(vocab), contexts, 1e-12);
}

inline TableModel make_random_table_model(std::uint64_t seed,
                                          const RandomModelSpec& spec) {
  SeededRng rng(seed);
  return make_random_table_model(rng, spec);
}

}  // namespace lenbeam
