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

// Batch decoding, comparison and verification behind the command line tool.
// Everything here is deterministic: results are ordered by utterance id and
// no report depends on timing or thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lenbeam/dataset.hpp"
#include "lenbeam/eval.hpp"
#include "lenbeam/fused_scorer.hpp"
#include "lenbeam/heuristics.hpp"
#include "lenbeam/oracle.hpp"
#include "lenbeam/proposed_search.hpp"
#include "lenbeam/random_model.hpp"
#include "lenbeam/simple_search.hpp"

namespace lenbeam {

enum class SearchMode { kSimple, kHeuristic, kProposed };

inline std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::kSimple:
      return "simple";
    case SearchMode::kHeuristic:
      return "heuristic";
    case SearchMode::kProposed:
      return "proposed";
  }
  return "unknown";
}

inline SearchMode parse_mode(const std::string& text) {
  if (text == "simple") return SearchMode::kSimple;
  if (text == "heuristic") return SearchMode::kHeuristic;
  if (text == "proposed") return SearchMode::kProposed;
  throw ConfigError("unknown mode '" + text + "'");
}

struct DecodeConfig {
  SearchMode mode = SearchMode::kProposed;
  PruneConfig prune;
  HeuristicConfig heuristics;
  std::size_t k = 1;
  double lm_scale = 0.0;
  double max_steps_factor = 1.0;

  // Heuristic knobs belong to heuristic mode only.
  void validate() const {
    prune.validate();
    heuristics.validate();
    if (k == 0) throw ConfigError("--k-best must be >= 1");
    if (!(lm_scale >= 0.0) || !std::isfinite(lm_scale))
      throw ConfigError("--lm-scale must be >= 0");
    if (!(max_steps_factor > 0.0) || !std::isfinite(max_steps_factor))
      throw ConfigError("--max-steps-factor must be > 0");
    if (mode != SearchMode::kHeuristic && heuristics.any())
      throw ConfigError(std::string("heuristic flags are not allowed in ") +
                        std::string(to_string(mode)) + " mode");
  }

  std::size_t step_cap(std::size_t input_length) const {
    const double cap = std::ceil(max_steps_factor * double(input_length) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(cap));
  }
};

using DefaultScorer = FusedScorer<TableModel>;

inline DefaultScorer make_scorer(const UtteranceRecord& rec, double lm_scale) {
  if (lm_scale > 0.0 && !rec.lm)
    throw ConfigError("--lm-scale is set but the utterance has no lm");
  return DefaultScorer(rec.model, lm_scale > 0.0 ? rec.lm : nullptr, lm_scale);
}

template <Scorer S>
DecodeResult run_search(const S& scorer, const DecodeConfig& cfg,
                        std::size_t input_length) {
  const std::size_t cap = cfg.step_cap(input_length);
  if (cfg.mode == SearchMode::kProposed)
    return proposed_beam_search(scorer, ProposedSearchOptions{cfg.prune, cap, cfg.k});
  return simple_beam_search(
      scorer, SimpleSearchOptions{cfg.prune, cfg.heuristics, cap, cfg.k});
}

/// log q of a complete label sequence under `scorer`.
template <Scorer S>
LogProb sequence_score(const S& scorer, const LabelSequence& labels) {
  auto state = scorer.initial_state();
  LogProb total = LogProb::one();
  Label last = kStartLabel;
  for (Label l : labels) {
    auto out = scorer.step(state, last);
    total += out.scores.at(l);
    if (scorer.vocabulary().is_eos(l)) break;
    state = std::move(out.next);
    last = l;
  }
  return total;
}

struct UtteranceResult {
  std::string id;
  std::vector<std::string> reference;
  std::optional<DecodeResult> result;  // empty when decoding failed
  std::string error;
  std::vector<std::string> output;  // MAP output without EOS
};

inline UtteranceResult decode_utterance(const UtteranceRecord& rec,
                                        const DecodeConfig& cfg) {
  UtteranceResult out{rec.id, rec.reference, std::nullopt, {}, {}};
  try {
    const auto scorer = make_scorer(rec, cfg.lm_scale);
    DecodeResult r = run_search(scorer, cfg, rec.input_length);
    out.output = rec.model->vocabulary().decode(map_decision(r.kbest).output());
    out.result = std::move(r);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline std::vector<UtteranceResult> decode_all(
    const std::vector<UtteranceRecord>& records, const DecodeConfig& cfg,
    std::size_t jobs = 1) {
  cfg.validate();
  std::vector<UtteranceResult> out(records.size());
  parallel_for(records.size(), jobs,
               [&](std::size_t i) { out[i] = decode_utterance(records[i], cfg); });
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

inline CorpusReport report_for(const std::vector<UtteranceResult>& results) {
  std::vector<UtteranceOutcome> outcomes;
  std::map<std::string, std::vector<std::string>> refs;
  for (const auto& r : results) {
    UtteranceOutcome o;
    o.id = r.id;
    o.failed = !r.result;
    if (r.result) {
      o.hypothesis = r.output;
      o.steps = r.result->steps_taken;
      o.stop_reason = r.result->stop_reason;
    }
    outcomes.push_back(std::move(o));
    refs[r.id] = r.reference;
  }
  return corpus_report(outcomes, refs);
}

inline bool any_failed(const std::vector<UtteranceResult>& results) {
  return std::any_of(results.begin(), results.end(),
                     [](const auto& r) { return !r.result; });
}

// ---------------------------------------------------------------------------
// JSON rendering. Floats keep 12 significant digits; -inf becomes null.

inline nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double rounded = std::strtod(buf, nullptr);
  if (rounded == 0.0) rounded = 0.0;  // drops the sign of -0
  return rounded;
}

inline nlohmann::json json_number(LogProb x) { return json_number(x.value()); }

inline nlohmann::json to_json(const DecodeConfig& cfg) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json_number(*v) : nlohmann::json(nullptr);
  };
  return {{"mode", std::string(to_string(cfg.mode))},
          {"beam_size", cfg.prune.beam_size},
          {"score_threshold", opt(cfg.prune.score_threshold)},
          {"k_best", cfg.k},
          {"length_norm", cfg.heuristics.length_normalize},
          {"eos_factor", opt(cfg.heuristics.eos_threshold_factor)},
          {"length_reward", opt(cfg.heuristics.length_reward)},
          {"lm_scale", json_number(cfg.lm_scale)},
          {"max_steps_factor", json_number(cfg.max_steps_factor)}};
}

inline nlohmann::json to_json(const EndedHypothesis& h, const Vocabulary& vocab) {
  return {{"output", vocab.decode(h.output())},
          {"raw_score", json_number(h.raw_score)},
          {"p_b", json_number(h.p_b)},
          {"p_not_end", json_number(h.p_not_end)},
          {"final_score", json_number(h.final_score)},
          {"rank_score", json_number(h.rank_score)}};
}

inline nlohmann::json to_json(const AlignmentCounts& c) {
  return {{"ins", c.ins},         {"del", c.del},         {"sub", c.sub},
          {"hits", c.hits},       {"ref_len", c.ref_len}, {"hyp_len", c.hyp_len},
          {"error_rate", json_number(c.error_rate())}};
}

inline nlohmann::json to_json(const CorpusReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [id, c] : r.per_utterance) {
    auto j = to_json(c);
    j["id"] = id;
    per.push_back(std::move(j));
  }
  return {{"wer", json_number(r.wer)},
          {"totals", to_json(r.total)},
          {"avg_hyp_length", json_number(r.avg_hyp_length)},
          {"avg_ref_length", json_number(r.avg_ref_length)},
          {"avg_steps", json_number(r.avg_steps)},
          {"failures", r.failures},
          {"stop_reasons", r.stop_reasons},
          {"per_utterance", std::move(per)}};
}

/// One JSONL line per utterance.
inline nlohmann::json result_line(const UtteranceResult& r,
                                  const std::vector<UtteranceRecord>& records) {
  nlohmann::json j{{"id", r.id}};
  if (!r.result) {
    j["error"] = r.error;
    return j;
  }
  const Vocabulary* vocab = nullptr;
  for (const auto& rec : records) {
    if (rec.id == r.id) vocab = &rec.model->vocabulary();
  }
  const auto& best = map_decision(r.result->kbest);
  j["output"] = r.output;
  j["raw_score"] = json_number(best.raw_score);
  j["p_b"] = json_number(best.p_b);
  j["p_not_end"] = json_number(best.p_not_end);
  j["final_score"] = json_number(best.final_score);
  j["rank_score"] = json_number(best.rank_score);
  j["steps"] = r.result->steps_taken;
  j["stop_reason"] = std::string(to_string(r.result->stop_reason));
  nlohmann::json kbest = nlohmann::json::array();
  for (const auto& h : r.result->kbest.entries()) kbest.push_back(to_json(h, *vocab));
  j["kbest"] = std::move(kbest);
  return j;
}

// ---------------------------------------------------------------------------
// compare

struct NamedConfig {
  std::string name;
  DecodeConfig config;
};

/// A configuration chose a hypothesis that its own scorer rates below the
/// choice of another configuration.
struct Inversion {
  std::string id;
  std::size_t config = 0;
  std::vector<std::string> chosen;
  double chosen_raw = 0.0;
  std::size_t preferred_by = 0;
  std::vector<std::string> preferred;
  double preferred_raw = 0.0;
};

struct Comparison {
  std::vector<std::vector<UtteranceResult>> runs;  // per config, id order
  std::vector<CorpusReport> reports;
  nlohmann::json disagreements = nlohmann::json::array();
  std::vector<Inversion> inversions;
};

inline Comparison compare_configs(const std::vector<UtteranceRecord>& records,
                                  const std::vector<NamedConfig>& configs,
                                  std::size_t jobs = 1) {
  if (configs.size() < 2) throw ConfigError("compare needs at least two configurations");
  Comparison cmp;
  for (const auto& c : configs) {
    cmp.runs.push_back(decode_all(records, c.config, jobs));
    cmp.reports.push_back(report_for(cmp.runs.back()));
  }
  std::vector<const UtteranceRecord*> by_id;
  for (const auto& r : cmp.runs[0]) {
    for (const auto& rec : records) {
      if (rec.id == r.id) by_id.push_back(&rec);
    }
  }
  for (std::size_t u = 0; u < by_id.size(); ++u) {
    const UtteranceRecord& rec = *by_id[u];
    const Vocabulary& vocab = rec.model->vocabulary();
    nlohmann::json choices = nlohmann::json::array();
    bool disagree = false;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto& r = cmp.runs[c][u];
      nlohmann::json ch{{"config", configs[c].name}};
      if (r.result) {
        const auto& best = map_decision(r.result->kbest);
        ch["output"] = r.output;
        ch["raw_score"] = json_number(best.raw_score);
        ch["final_score"] = json_number(best.final_score);
        ch["rank_score"] = json_number(best.rank_score);
      } else {
        ch["error"] = r.error;
      }
      if (r.output != cmp.runs[0][u].output || !r.result) disagree = true;
      choices.push_back(std::move(ch));
    }
    nlohmann::json inv = nlohmann::json::array();
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto& mine = cmp.runs[c][u];
      if (!mine.result) continue;
      DefaultScorer scorer = make_scorer(rec, configs[c].config.lm_scale);
      const auto& chosen = map_decision(mine.result->kbest);
      const LogProb chosen_raw = sequence_score(scorer, chosen.labels);
      for (std::size_t o = 0; o < configs.size(); ++o) {
        const auto& other = cmp.runs[o][u];
        if (o == c || !other.result) continue;
        const auto& alt = map_decision(other.result->kbest).labels;
        if (alt == chosen.labels) continue;
        const LogProb alt_raw = sequence_score(scorer, alt);
        if (alt_raw.value() > chosen_raw.value() + 1e-12) {
          Inversion x{rec.id, c, vocab.decode(chosen.output()), chosen_raw.value(), o,
                      vocab.decode(LabelSequence(alt.begin(), alt.end() - 1)),
                      alt_raw.value()};
          inv.push_back({{"config", configs[c].name},
                         {"chosen", x.chosen},
                         {"chosen_raw", json_number(x.chosen_raw)},
                         {"preferred_by", configs[o].name},
                         {"preferred", x.preferred},
                         {"preferred_raw", json_number(x.preferred_raw)}});
          cmp.inversions.push_back(std::move(x));
        }
      }
    }
    if (disagree || !inv.empty()) {
      cmp.disagreements.push_back(
          {{"id", rec.id}, {"choices", std::move(choices)}, {"inversions", std::move(inv)}});
    }
  }
  return cmp;
}

inline nlohmann::json to_json(const Comparison& cmp,
                              const std::vector<NamedConfig>& configs) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    auto corpus = to_json(cmp.reports[c]);
    corpus.erase("per_utterance");
    rows.push_back({{"name", configs[c].name},
                    {"flags", to_json(configs[c].config)},
                    {"corpus", std::move(corpus)}});
  }
  return {{"configs", std::move(rows)},
          {"inversion_count", cmp.inversions.size()},
          {"disagreements", cmp.disagreements}};
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleCheckOptions {
  std::uint64_t seed = 1;
  std::size_t models = 100;
  std::size_t max_length = 6;
  double tolerance = 1e-9;
  double residual_threshold = 1e-3;
  std::vector<std::size_t> beam_sizes{2, 4, 8};
};

struct PropertyResult {
  std::string name;
  std::string status = "pass";  // pass, fail or skipped
  double max_deviation = 0.0;
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  std::string detail;
};

namespace detail {

inline bool same_kbest(const KBestStore& a, const KBestStore& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].labels != b[i].labels || a[i].final_score != b[i].final_score)
      return false;
  }
  return true;
}

}  // namespace detail

/// Runs every oracle property over `models`. Scorers must be enumerable
/// under `opts.max_length`.
template <Scorer S>
std::vector<PropertyResult> oracle_check(const std::vector<S>& models,
                                         const OracleCheckOptions& opts) {
  auto property = [](const char* name) {
    PropertyResult p;
    p.name = name;
    return p;
  };
  PropertyResult identity = property("unlimited_beam_identity");
  PropertyResult mass = property("not_end_product_equals_step_mass");
  PropertyResult search_identity = property("proposed_search_final_equals_raw");
  PropertyResult lengths = property("length_distribution_cross_check");
  PropertyResult conservation = property("conservation");
  PropertyResult ending_mass = property("ending_mass_near_one");
  PropertyResult exactness = property("simple_search_equals_exact_map");
  PropertyResult early = property("early_stopping_exactness");
  double max_residual = 0.0;
  const EnumerationLimit limit{opts.max_length, 1'000'000};

  for (const S& scorer : models) {
    const auto replay = replay_with_unlimited_beam(scorer, limit, HUGE_VAL);
    identity.max_deviation = std::max(identity.max_deviation, replay.max_final_deviation);
    mass.max_deviation = std::max(mass.max_deviation, replay.max_mass_deviation);
    ++identity.checked;
    ++mass.checked;
    if (replay.max_final_deviation > opts.tolerance) ++identity.mismatches;
    if (replay.max_mass_deviation > opts.tolerance) ++mass.mismatches;

    const auto table = enumerate_posteriors(scorer, limit);
    const std::size_t unlimited = table.endings.size() + 1;
    ProposedSearchOptions full{PruneConfig{unlimited * scorer.vocabulary().size(), {}},
                               opts.max_length, unlimited, false};
    const auto decoded = proposed_beam_search(scorer, full);
    double dev = 0.0;
    const auto reachable = std::count_if(
        table.endings.begin(), table.endings.end(),
        [](const auto& e) { return !e.second.is_zero(); });
    bool complete = decoded.kbest.size() == std::size_t(reachable);
    for (const auto& h : decoded.kbest.entries()) {
      auto it = table.endings.find(h.labels);
      if (it == table.endings.end()) {
        complete = false;
        continue;
      }
      dev = std::max(dev, detail::log_deviation(h.final_score, it->second));
    }
    search_identity.max_deviation = std::max(search_identity.max_deviation, dev);
    ++search_identity.checked;
    if (!complete || dev > opts.tolerance) ++search_identity.mismatches;

    const auto dist = length_distribution(scorer, limit);
    lengths.max_deviation = std::max(lengths.max_deviation, dist.max_deviation);
    ++lengths.checked;
    if (dist.max_deviation > opts.tolerance) ++lengths.mismatches;

    std::vector<LogProb> parts{table.residual};
    for (const auto& [_, q] : table.endings) parts.push_back(q);
    const double total = log_sum_exp(parts).probability();
    max_residual = std::max(max_residual, table.residual.probability());
    conservation.max_deviation = std::max(conservation.max_deviation, std::abs(total - 1.0));
    ++conservation.checked;
    if (std::abs(total - 1.0) > opts.tolerance) ++conservation.mismatches;
    const double ended = 1.0 - table.residual.probability();
    ending_mass.max_deviation = std::max(ending_mass.max_deviation, 1.0 - ended);
    ++ending_mass.checked;
    if (1.0 - ended > opts.residual_threshold) ++ending_mass.mismatches;

    ++exactness.checked;
    try {
      const auto map = exact_map(scorer, limit);
      SimpleSearchOptions so{PruneConfig{unlimited * scorer.vocabulary().size(), {}},
                             HeuristicConfig{}, opts.max_length, 1};
      const auto simple = simple_beam_search(scorer, so);
      if (simple.kbest.empty() || map_decision(simple.kbest).labels != map.labels)
        ++exactness.mismatches;
    } catch (const SearchError&) {
      // No ending within L: nothing to compare.
    }

    for (std::size_t beam : opts.beam_sizes) {
      for (std::size_t k : {std::size_t(1), std::size_t(3)}) {
        ProposedSearchOptions o{PruneConfig{beam, {}}, opts.max_length, k, true};
        const auto stopped = proposed_beam_search(scorer, o);
        o.early_stopping = false;
        const auto capped = proposed_beam_search(scorer, o);
        ++early.checked;
        if (!detail::same_kbest(stopped.kbest, capped.kbest)) ++early.mismatches;
      }
    }
  }

  std::vector<PropertyResult> out{identity,     mass,        search_identity,
                                  lengths,      conservation, ending_mass,
                                  exactness,    early};
  for (auto& p : out) {
    if (p.mismatches > 0) p.status = "fail";
  }
  // The ending mass only approaches one when L leaves little residual mass.
  if (max_residual > opts.residual_threshold) {
    auto& cons = out[5];
    cons.status = "skipped";
    cons.mismatches = 0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "residual mass %.3g above threshold %.3g",
                  max_residual, opts.residual_threshold);
    cons.detail = buf;
  }
  return out;
}

/// Seeded random models: vocabulary sizes cycle through 2, 3 and 4.
inline std::vector<TableModel> random_oracle_models(std::uint64_t seed,
                                                    std::size_t count) {
  SeededRng rng(seed);
  std::vector<TableModel> out;
  for (std::size_t i = 0; i < count; ++i) {
    RandomModelSpec spec;
    spec.vocab_size = 2 + i % 3;
    out.push_back(make_random_table_model(rng, spec));
  }
  return out;
}

inline nlohmann::json to_json(const std::vector<PropertyResult>& props) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : props) {
    nlohmann::json j{{"name", p.name},
                     {"status", p.status},
                     {"max_deviation", json_number(p.max_deviation)},
                     {"checked", p.checked},
                     {"mismatches", p.mismatches}};
    if (!p.detail.empty()) j["detail"] = p.detail;
    out.push_back(std::move(j));
  }
  return out;
}

inline bool all_passed(const std::vector<PropertyResult>& props) {
  return std::none_of(props.begin(), props.end(),
                      [](const auto& p) { return p.status == "fail"; });
}

}  // namespace lenbeam
