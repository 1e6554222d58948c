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

// Acceptance checks. Prints one PASS/FAIL line per criterion followed by
// the measured numbers, and exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lenbeam/lenbeam.hpp"

namespace fs = std::filesystem;
using namespace lenbeam;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "NOT ") + what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

constexpr std::size_t kExhaustiveBeam = 5000;

std::vector<UtteranceRecord> biased_suite() {
  std::vector<UtteranceRecord> out;
  for (auto& u : make_biased_suite(BiasedSuiteSpec{})) {
    out.push_back({u.id, std::make_shared<const TableModel>(u.model), nullptr,
                   u.input_length, u.model.vocabulary().decode(u.reference)});
  }
  return out;
}

std::size_t hardware_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// 1. Unlimited-beam identity, measured on the search itself.
Outcome unlimited_beam_identity() {
  Outcome o;
  double final_dev = 0.0, mass_dev = 0.0;
  std::size_t missing = 0;
  const EnumerationLimit limit{6, 1'000'000};
  for (const auto& m : random_oracle_models(1, 100)) {
    const auto table = enumerate_posteriors(m, limit);
    SearchTrace trace;
    ProposedSearchOptions opts{PruneConfig{100'000, std::nullopt}, 6, 100'000, false};
    const auto r = proposed_beam_search(m, opts, &trace);
    std::size_t reachable = 0;
    for (const auto& [_, q] : table.endings) reachable += !q.is_zero();
    if (r.kbest.size() != reachable) ++missing;
    for (const auto& h : r.kbest.entries())
      final_dev = std::max(final_dev, std::abs(h.final_score.value() -
                                               table.endings.at(h.labels).value()));
    for (const auto& t : trace)
      mass_dev = std::max(mass_dev, std::abs(t.not_end_before.value() - t.step_mass.value()));
  }
  o.require(missing == 0, "every ending reached");
  o.require(final_dev < 1e-9, "max |final - raw| = " + fmt("%.3g", final_dev) + " < 1e-9");
  o.require(mass_dev < 1e-9, "max |prod(1-p_n) - step mass| = " + fmt("%.3g", mass_dev) +
                                 " < 1e-9");
  return o;
}

// 2. Early stopping returns the same k-best as running to the cap.
Outcome early_stopping_exactness() {
  Outcome o;
  std::size_t runs = 0, mismatches = 0;
  for (const auto& m : random_oracle_models(2, 100)) {
    for (std::size_t beam : {2, 4, 8}) {
      for (std::size_t k : {1, 3}) {
        ProposedSearchOptions opts{PruneConfig{beam, std::nullopt}, 6, k, true};
        const auto stopped = proposed_beam_search(m, opts);
        opts.early_stopping = false;
        const auto capped = proposed_beam_search(m, opts);
        ++runs;
        bool same = stopped.kbest.size() == capped.kbest.size();
        for (std::size_t i = 0; same && i < capped.kbest.size(); ++i) {
          same = stopped.kbest[i].labels == capped.kbest[i].labels &&
                 stopped.kbest[i].final_score == capped.kbest[i].final_score;
        }
        mismatches += !same;
      }
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + "/" + std::to_string(runs) +
                                 " k-best mismatches");
  return o;
}

// 3. Length bias: simple search deletes, proposed search keeps the length.
Outcome length_bias(const std::vector<UtteranceRecord>& suite,
                    std::vector<std::pair<std::size_t, CorpusReport>>& proposed_runs) {
  Outcome o;
  DecodeConfig simple;
  simple.mode = SearchMode::kSimple;
  simple.prune.beam_size = kExhaustiveBeam;
  const auto sr = report_for(decode_all(suite, simple, hardware_jobs()));
  const double ratio = sr.avg_hyp_length / sr.avg_ref_length;
  o.require(ratio < 0.3, "simple/" + std::to_string(kExhaustiveBeam) + " length ratio " +
                             fmt("%.3f", ratio) + " < 0.3");
  o.require(sr.total.del > sr.total.ins + sr.total.sub,
            "simple deletions dominate (del " + std::to_string(sr.total.del) + ", ins+sub " +
                std::to_string(sr.total.ins + sr.total.sub) + ")");

  std::vector<std::vector<std::string>> first_outputs;
  for (std::size_t beam : {std::size_t(8), std::size_t(64), kExhaustiveBeam}) {
    DecodeConfig p;
    p.prune.beam_size = beam;
    const auto results = decode_all(suite, p, hardware_jobs());
    const auto r = report_for(results);
    proposed_runs.emplace_back(beam, r);
    const double rel = r.avg_hyp_length / r.avg_ref_length - 1.0;
    o.require(std::abs(rel) <= 0.05, "proposed/" + std::to_string(beam) + " length " +
                                         fmt("%.2f", r.avg_hyp_length) + " vs ref " +
                                         fmt("%.2f", r.avg_ref_length));
    o.require(r.wer < 0.05, "proposed/" + std::to_string(beam) + " WER " +
                                fmt("%.2f%%", 100 * r.wer) + " < 5%");
    std::vector<std::vector<std::string>> outputs;
    for (const auto& u : results) outputs.push_back(u.output);
    if (first_outputs.empty())
      first_outputs = outputs;
    else
      o.require(outputs == first_outputs,
                "proposed/" + std::to_string(beam) + " outputs identical to beam 8");
  }
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LENBEAM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 4. Length normalization over-corrects; found through the compare command.
Outcome over_correction() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "lenbeam_acceptance_loop";
  fs::remove_all(dir);
  const std::string ds = (dir / "dataset.jsonl").string();
  o.require(run_cli("generate-suite --count 0 --looping --out " + dir.string()) == 0,
            "suite generated");
  const int rc = run_cli("compare --dataset " + ds + " --out " + (dir / "cmp").string() +
                         " --config \"--mode heuristic --length-norm --beam-size 5000\"" +
                         " --config \"--mode proposed --beam-size 5000\"");
  o.require(rc == 0, "compare exit 0");
  if (rc != 0) return o;
  std::ifstream in(dir / "cmp" / "compare.json");
  const auto doc = nlohmann::json::parse(in);
  std::size_t heuristic_inversions = 0, proposed_inversions = 0;
  for (const auto& d : doc["disagreements"]) {
    for (const auto& inv : d["inversions"]) {
      const std::string who = inv["config"];
      if (who.find("heuristic") != std::string::npos) {
        ++heuristic_inversions;
        o.require(inv["chosen_raw"].get<double>() < inv["preferred_raw"].get<double>(),
                  "heuristic choice (length " + std::to_string(inv["chosen"].size()) +
                      ", raw " + fmt("%.3f", inv["chosen_raw"]) + ") worse than proposed " +
                      "choice (raw " + fmt("%.3f", inv["preferred_raw"]) + ")");
      } else {
        ++proposed_inversions;
      }
    }
  }
  o.require(heuristic_inversions >= 1, "heuristic inversions: " +
                                           std::to_string(heuristic_inversions));
  o.require(proposed_inversions == 0, "proposed inversions: " +
                                          std::to_string(proposed_inversions));
  return o;
}

// 5. Arithmetic anchor.
Outcome arithmetic_anchor() {
  Outcome o;
  const double v = length_normalized_score(LogProb(-10.55), 3);
  o.require(std::abs(v - (-3.52)) <= 0.005, "-10.55 / 3 = " + fmt("%.4f", v));
  return o;
}

std::size_t edit_distance(const std::vector<int>& a, std::size_t i,
                          const std::vector<int>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  return std::min({(a[i] == b[j] ? 0 : 1) + edit_distance(a, i + 1, b, j + 1),
                   1 + edit_distance(a, i + 1, b, j), 1 + edit_distance(a, i, b, j + 1)});
}

// 6. Oracle agreement.
Outcome oracle_agreement() {
  Outcome o;
  std::size_t map_mismatch = 0;
  const EnumerationLimit limit{6, 1'000'000};
  for (const auto& m : random_oracle_models(6, 100)) {
    const auto map = exact_map(m, limit);
    const auto r = simple_beam_search(m, PruneConfig{100'000, std::nullopt},
                                      HeuristicConfig{}, limit.max_length, 1);
    if (r.kbest.empty() || r.kbest[0].labels != map.labels) ++map_mismatch;
  }
  o.require(map_mismatch == 0, std::to_string(map_mismatch) + "/100 exact-MAP mismatches");

  SeededRng rng(66);
  std::size_t align_mismatch = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<int> a(rng.index(7)), b(rng.index(7));
    for (int& x : a) x = int(rng.index(3));
    for (int& x : b) x = int(rng.index(3));
    if (align(a, b).errors() != edit_distance(a, 0, b, 0)) ++align_mismatch;
  }
  o.require(align_mismatch == 0, std::to_string(align_mismatch) + "/500 alignment mismatches");
  return o;
}

// 7. Search steps as the beam grows.
Outcome step_efficiency(const std::vector<UtteranceRecord>& suite,
                        const std::vector<std::pair<std::size_t, CorpusReport>>& proposed) {
  Outcome o;
  double p_small = 0.0, p_large = 0.0;
  for (const auto& [beam, r] : proposed) {
    if (beam == 8) p_small = r.avg_steps;
    if (beam == kExhaustiveBeam) p_large = r.avg_steps;
  }
  const double p_ratio = p_large / p_small;
  o.require(p_ratio <= 1.1, "proposed steps " + fmt("%.2f", p_small) + " -> " +
                                fmt("%.2f", p_large) + " (x" + fmt("%.2f", p_ratio) +
                                ") within 1.1x");

  DecodeConfig h;
  h.mode = SearchMode::kHeuristic;
  h.heuristics.length_normalize = true;
  h.heuristics.eos_threshold_factor = 1.0;
  h.prune.beam_size = 8;
  const double h_small = report_for(decode_all(suite, h, hardware_jobs())).avg_steps;
  h.prune.beam_size = kExhaustiveBeam;
  const double h_large = report_for(decode_all(suite, h, hardware_jobs())).avg_steps;
  const double h_ratio = h_large / h_small;
  o.require(h_ratio >= 1.5, "heuristic steps " + fmt("%.2f", h_small) + " -> " +
                                fmt("%.2f", h_large) + " (x" + fmt("%.2f", h_ratio) +
                                ") grow >= 1.5x");
  return o;
}

bool report(int id, const char* name, double limit_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = fn();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0) o.require(secs < limit_s, "runtime " + fmt("%.1f", secs) + " s < " +
                                                 fmt("%.0f", limit_s) + " s");
  std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main() {
  const auto suite = biased_suite();
  std::vector<std::pair<std::size_t, CorpusReport>> proposed_runs;
  bool ok = true;
  ok &= report(1, "unlimited-beam identity", 30, unlimited_beam_identity);
  ok &= report(2, "early-stopping exactness", 60, early_stopping_exactness);
  ok &= report(3, "length-bias reproduction", 120,
               [&] { return length_bias(suite, proposed_runs); });
  ok &= report(4, "heuristic over-correction", 0, over_correction);
  ok &= report(5, "length-normalization arithmetic", 0, arithmetic_anchor);
  ok &= report(6, "oracle agreement", 0, oracle_agreement);
  ok &= report(7, "step-efficiency direction", 0,
               [&] { return step_efficiency(suite, proposed_runs); });
  std::printf("%s\n", ok ? "all criteria passed" : "some criteria failed");
  return ok ? 0 : 1;
}
