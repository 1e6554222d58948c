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

#include <gtest/gtest.h>

#include <cmath>

#include "lenbeam/biased_model.hpp"
#include "lenbeam/oracle.hpp"
#include "lenbeam/random_model.hpp"

namespace lenbeam {
namespace {

Vocabulary abc() { return Vocabulary({"a", "b", "$"}, 2); }

TableModel uniform_model() {
  return TableModel(abc(), {{{}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}});
}

TEST(EnumerationLimitTest, RefusesOversizedEnumeration) {
  EXPECT_THROW((EnumerationLimit{20, 1'000'000}.validate(4)), ConfigError);
  EXPECT_THROW((EnumerationLimit{0, 10}.validate(2)), ConfigError);
  EXPECT_NO_THROW((EnumerationLimit{6, 4096}.validate(4)));
  EXPECT_THROW(enumerate_posteriors(uniform_model(), EnumerationLimit{30, 1000}),
               ConfigError);
}

TEST(EnumeratePosteriorsTest, UniformLengthTwo) {
  auto t = enumerate_posteriors(uniform_model(), EnumerationLimit{2, 100});
  ASSERT_EQ(t.endings.size(), 3u);
  EXPECT_NEAR(t.endings.at({2}).value(), std::log(1.0 / 3), 1e-15);
  EXPECT_NEAR(t.endings.at({0, 2}).value(), std::log(1.0 / 9), 1e-15);
  EXPECT_NEAR(t.endings.at({1, 2}).value(), std::log(1.0 / 9), 1e-15);
  EXPECT_NEAR(t.residual.probability(), 4.0 / 9, 1e-15);
}

TEST(EnumeratePosteriorsTest, BiasedTarget) {
  auto m = make_length_biased_model({abc(), {0, 1}});
  auto t = enumerate_posteriors(m, EnumerationLimit{4, 1000});
  EXPECT_NEAR(t.endings.at({2}).probability(), 0.1, 1e-12);
  EXPECT_NEAR(t.endings.at({0, 1, 2}).probability(), 0.5 * 0.5 * 0.9, 1e-12);
}

TEST(EnumeratePosteriorsTest, ConservationOnRandomModels) {
  SeededRng rng(8);
  for (int i = 0; i < 60; ++i) {
    RandomModelSpec spec;
    spec.vocab_size = 2 + rng.index(3);
    auto m = make_random_table_model(rng, spec);
    auto t = enumerate_posteriors(m, EnumerationLimit{6, 1'000'000});
    double total = t.residual.probability();
    for (const auto& [_, q] : t.endings) total += q.probability();
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(ExactMapTest, Examples) {
  EXPECT_EQ(exact_map(uniform_model(), EnumerationLimit{3, 100}).labels, (LabelSequence{2}));
  auto two = make_length_biased_model({abc(), {0, 1}});
  EXPECT_EQ(exact_map(two, EnumerationLimit{5, 1000}).labels, (LabelSequence{0, 1, 2}));

  Vocabulary v({"a", "b", "$"}, 2);
  LabelSequence target(10);
  for (std::size_t i = 0; i < 10; ++i) target[i] = Label(i % 2);
  auto ten = make_length_biased_model({v, target});
  EXPECT_EQ(exact_map(ten, EnumerationLimit{12, 1'000'000}).labels, (LabelSequence{2}));
}

TEST(ExactMapTest, NoEndingIsAnError) {
  TableModel never(abc(), {{{}, {0.5, 0.5, 0.0}}});
  EXPECT_THROW(exact_map(never, EnumerationLimit{3, 100}), SearchError);
}

TEST(LengthDistributionTest, UniformIsGeometric) {
  auto d = length_distribution(uniform_model(), EnumerationLimit{6, 1000});
  for (std::size_t n = 1; n <= 6; ++n) {
    const double want = std::pow(2.0 / 3, double(n - 1)) / 3;
    EXPECT_NEAR(d.chained[n - 1].probability(), want, 1e-12);
    EXPECT_NEAR(d.enumerated[n - 1].probability(), want, 1e-12);
  }
  EXPECT_LT(d.max_deviation, 1e-12);
}

TEST(LengthDistributionTest, FirstStepAndBiasedTarget) {
  auto m = make_length_biased_model({abc(), {0, 1}});
  auto d = length_distribution(m, EnumerationLimit{4, 1000});
  EXPECT_NEAR(d.chained[0].probability(), 0.1, 1e-12);
  // Every length-3 ending, summed by hand from the table: a b $, a a $, b a $,
  // b b $ (contexts "a b", "a", "b").
  auto t = enumerate_posteriors(m, EnumerationLimit{4, 1000});
  double len3 = 0.0;
  for (const auto& [labels, q] : t.endings)
    if (labels.size() == 3) len3 += q.probability();
  EXPECT_NEAR(d.chained[2].probability(), len3, 1e-12);
  EXPECT_GT(d.chained[2].probability(), 0.225);
}

TEST(LengthDistributionTest, CrossCheckOnRandomModels) {
  SeededRng rng(12);
  for (int i = 0; i < 100; ++i) {
    RandomModelSpec spec;
    spec.vocab_size = 2 + rng.index(2);
    auto m = make_random_table_model(rng, spec);
    auto d = length_distribution(m, EnumerationLimit{6, 1'000'000});
    EXPECT_LT(d.max_deviation, 1e-9);
  }
}

TEST(ReplayTest, UniformHandCheck) {
  auto r = replay_with_unlimited_beam(uniform_model(), EnumerationLimit{3, 100});
  const auto& e = r.endings.at({0, 2});
  EXPECT_NEAR(e.p_b.value(), std::log(1.0 / 6), 1e-12);
  EXPECT_NEAR(e.p_not_end.value(), std::log(2.0 / 3), 1e-12);
  EXPECT_NEAR(e.final_score.value(), std::log(1.0 / 9), 1e-12);
  EXPECT_EQ(r.endings.at({2}).p_not_end, LogProb::one());
  EXPECT_EQ(r.not_end_products.front(), LogProb::one());
}

TEST(ReplayTest, IdentityOnRandomModels) {
  SeededRng rng(13);
  for (int i = 0; i < 100; ++i) {
    RandomModelSpec spec;
    spec.vocab_size = 2 + rng.index(3);
    auto m = make_random_table_model(rng, spec);
    auto r = replay_with_unlimited_beam(m, EnumerationLimit{6, 1'000'000});
    EXPECT_LT(r.max_final_deviation, 1e-9);
    EXPECT_LT(r.max_mass_deviation, 1e-9);
    for (const auto& [labels, e] : r.endings)
      EXPECT_EQ(e.final_score, e.p_b + e.p_not_end);
  }
}

// A scorer whose step distributions are deliberately not normalized
// breaks the identity; the replay must report it.
struct LeakyScorer {
  using State = int;
  Vocabulary vocab{{"a", "$"}, 1};
  const Vocabulary& vocabulary() const { return vocab; }
  State initial_state() const { return 0; }
  StepOutput<State> step(const State& s, Label) const {
    return {{LogProb::from_probability(0.5), LogProb::from_probability(0.3)}, s + 1};
  }
};

TEST(ReplayTest, ViolationIsReported) {
  EXPECT_THROW(replay_with_unlimited_beam(LeakyScorer{}, EnumerationLimit{4, 100}),
               OracleFailure);
}

}  // namespace
}  // namespace lenbeam
