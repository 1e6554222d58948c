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

#include <algorithm>
#include <string>
#include <vector>

#include "lenbeam/eval.hpp"
#include "lenbeam/random_model.hpp"

namespace lenbeam {
namespace {

using Words = std::vector<std::string>;

// Minimal edit count by exhaustive recursion over all edit paths.
std::size_t brute_force_distance(const Words& a, std::size_t i, const Words& b,
                                 std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = (a[i] == b[j] ? 0 : 1) + brute_force_distance(a, i + 1, b, j + 1);
  best = std::min(best, 1 + brute_force_distance(a, i + 1, b, j));
  best = std::min(best, 1 + brute_force_distance(a, i, b, j + 1));
  return best;
}

Words random_words(SeededRng& rng) {
  Words w(rng.index(7));
  for (auto& x : w) x = std::string(1, char('a' + rng.index(3)));
  return w;
}

void expect_identities(const AlignmentCounts& c) {
  EXPECT_EQ(c.hits + c.sub + c.del, c.ref_len);
  EXPECT_EQ(c.hits + c.sub + c.ins, c.hyp_len);
}

TEST(AlignTest, Identity) {
  Words w{"a", "b", "c"};
  auto c = align(w, w);
  EXPECT_EQ(c.errors(), 0u);
  EXPECT_EQ(c.hits, 3u);
}

TEST(AlignTest, SingleSubstitution) {
  auto c = align(Words{"a", "b", "c"}, Words{"a", "x", "c"});
  EXPECT_EQ(c.sub, 1u);
  EXPECT_EQ(c.ins + c.del, 0u);
}

TEST(AlignTest, TwoDeletions) {
  Words ref{"a", "b", "c", "d"}, hyp{"a", "c"};
  auto c = align(ref, hyp);
  EXPECT_EQ(c.del, 2u);
  EXPECT_EQ(c.sub + c.ins, 0u);
  EXPECT_EQ(brute_force_distance(ref, 0, hyp, 0), 2u);
  EXPECT_DOUBLE_EQ(c.error_rate(), 0.5);
}

TEST(AlignTest, EmptySequences) {
  auto c = align(Words{}, Words{});
  EXPECT_EQ(c.errors(), 0u);
  EXPECT_EQ(c.error_rate(), 0.0);
  auto d = align(Words{"a", "b"}, Words{});
  EXPECT_EQ(d.del, 2u);
  auto i = align(Words{}, Words{"a"});
  EXPECT_EQ(i.ins, 1u);
  EXPECT_EQ(i.error_rate(), 1.0);
}

TEST(AlignTest, PrefersSubstitutionOverDeleteInsert) {
  auto c = align(Words{"a"}, Words{"b"});
  EXPECT_EQ(c.sub, 1u);
  EXPECT_EQ(c.ins + c.del, 0u);
}

TEST(AlignTest, MatchesBruteForceOnRandomPairs) {
  SeededRng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    Words ref = random_words(rng), hyp = random_words(rng);
    auto c = align(ref, hyp);
    EXPECT_EQ(c.errors(), brute_force_distance(ref, 0, hyp, 0));
    expect_identities(c);
  }
}

// Equal-cost paths may split edits differently, so only the distance and
// the length difference are symmetric.
TEST(AlignTest, SwapSymmetry) {
  SeededRng rng(100);
  for (int trial = 0; trial < 500; ++trial) {
    Words a = random_words(rng), b = random_words(rng);
    auto ab = align(a, b), ba = align(b, a);
    EXPECT_EQ(ab.errors(), ba.errors());
    EXPECT_EQ(ab.ins + ba.ins, ab.del + ba.del);
    expect_identities(ba);
  }
}

UtteranceOutcome outcome(std::string id, Words hyp, std::size_t steps = 1) {
  UtteranceOutcome o;
  o.id = std::move(id);
  o.hypothesis = std::move(hyp);
  o.steps = steps;
  o.stop_reason = StopReason::kEarlyStop;
  return o;
}

TEST(CorpusReportTest, PooledWer) {
  std::vector<UtteranceOutcome> out{outcome("u1", {"a", "b"}), outcome("u2", {"a"})};
  std::map<std::string, Words> refs{{"u1", {"a", "b"}}, {"u2", {"a", "b"}}};
  auto r = corpus_report(out, refs);
  EXPECT_DOUBLE_EQ(r.wer, 0.25);
  EXPECT_EQ(r.total.del, 1u);
}

TEST(CorpusReportTest, AllEmptyHypotheses) {
  std::vector<UtteranceOutcome> out{outcome("u1", {}), outcome("u2", {})};
  std::map<std::string, Words> refs{{"u1", {"a", "b", "c"}}, {"u2", {"a"}}};
  auto r = corpus_report(out, refs);
  EXPECT_EQ(r.total.del, 4u);
  EXPECT_EQ(r.avg_hyp_length, 0.0);
  EXPECT_DOUBLE_EQ(r.wer, 1.0);
}

TEST(CorpusReportTest, MeanSteps) {
  std::vector<UtteranceOutcome> out{outcome("u1", {"a"}, 27), outcome("u2", {"a"}, 24),
                                    outcome("u3", {"a"}, 30)};
  std::map<std::string, Words> refs{{"u1", {"a"}}, {"u2", {"a"}}, {"u3", {"a"}}};
  auto r = corpus_report(out, refs);
  EXPECT_DOUBLE_EQ(r.avg_steps, 27.0);
  EXPECT_EQ(r.stop_reasons.at("early_stop"), 3u);
}

TEST(CorpusReportTest, IdMismatchListsMissingIds) {
  std::vector<UtteranceOutcome> out{outcome("u1", {"a"}), outcome("u3", {"a"})};
  std::map<std::string, Words> refs{{"u1", {"a"}}, {"u2", {"a"}}};
  try {
    corpus_report(out, refs);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'u2'"), std::string::npos);
    EXPECT_NE(msg.find("'u3'"), std::string::npos);
  }
}

TEST(CorpusReportTest, FailuresCountAsEmpty) {
  auto o = outcome("u1", {"a"});
  o.failed = true;
  std::vector<UtteranceOutcome> out{o};
  std::map<std::string, Words> refs{{"u1", {"a", "b"}}};
  auto r = corpus_report(out, refs);
  EXPECT_EQ(r.total.del, 2u);
  EXPECT_EQ(r.failures, 1u);
}

TEST(CorpusReportTest, AggregateIdentitiesOnFuzzedCorpora) {
  SeededRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UtteranceOutcome> out;
    std::map<std::string, Words> refs;
    const std::size_t n = 1 + rng.index(10);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "u" + std::to_string(i);
      out.push_back(outcome(id, random_words(rng), rng.index(30)));
      refs[id] = random_words(rng);
    }
    auto r = corpus_report(out, refs);
    AlignmentCounts sum;
    double steps = 0.0;
    for (const auto& [id, c] : r.per_utterance) sum += c;
    for (const auto& o : out) steps += double(o.steps);
    EXPECT_EQ(sum, r.total);
    EXPECT_DOUBLE_EQ(r.wer, r.total.error_rate());
    EXPECT_DOUBLE_EQ(r.avg_steps, steps / double(n));
    expect_identities(r.total);
  }
}

TEST(FormatTableTest, HasColumnsAndRows) {
  std::vector<UtteranceOutcome> out{outcome("u1", {"a"})};
  std::map<std::string, Words> refs{{"u1", {"a", "b"}}};
  auto t = format_table({{"proposed", corpus_report(out, refs)}});
  EXPECT_NE(t.find("WER[%]"), std::string::npos);
  EXPECT_NE(t.find("del"), std::string::npos);
  EXPECT_NE(t.find("proposed"), std::string::npos);
  EXPECT_NE(t.find("50.00"), std::string::npos);
}

}  // namespace
}  // namespace lenbeam
