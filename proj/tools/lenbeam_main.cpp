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

// Usage:
//   lenbeam decode --dataset suite/dataset.jsonl --out runs/p64 --mode proposed
//   lenbeam compare --dataset suite/dataset.jsonl --out runs/cmp
//       --config "--mode simple --beam-size 5000" --config "--mode proposed"
//   lenbeam oracle-check --seed 7
//   lenbeam generate-suite --out suite
//
// Exit status: 0 success, 1 decode or verification failure, 2 usage or
// parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lenbeam/lenbeam.hpp"

namespace fs = std::filesystem;
using namespace lenbeam;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct DecodeFlags {
  std::string mode = "proposed";
  std::size_t beam_size = 64;
  double score_threshold = 0.0;
  std::size_t k_best = 1;
  bool length_norm = false;
  double eos_factor = 1.0;
  double length_reward = 0.0;
  double lm_scale = 0.0;
  double max_steps_factor = 1.0;

  CLI::Option* threshold_opt = nullptr;
  CLI::Option* eos_opt = nullptr;
  CLI::Option* reward_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--mode", mode, "simple, heuristic or proposed")
        ->check(CLI::IsMember({"simple", "heuristic", "proposed"}))
        ->capture_default_str();
    app.add_option("--beam-size", beam_size, "beam size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    threshold_opt = app.add_option("--score-threshold", score_threshold,
                                   "prune below best minus this margin (8 is a common choice)");
    app.add_option("--k-best", k_best, "ended hypotheses kept")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--length-norm", length_norm, "rank by score over length (heuristic mode)");
    eos_opt = app.add_option("--eos-factor", eos_factor, "EOS threshold factor (heuristic mode)");
    reward_opt = app.add_option("--length-reward", length_reward,
                                "per-label reward (heuristic mode)");
    app.add_option("--lm-scale", lm_scale, "LM scale alpha")->capture_default_str();
    app.add_option("--max-steps-factor", max_steps_factor, "step cap = factor * T")
        ->capture_default_str();
  }

  DecodeConfig config() const {
    DecodeConfig c;
    c.mode = parse_mode(mode);
    c.prune.beam_size = beam_size;
    if (threshold_opt->count()) c.prune.score_threshold = score_threshold;
    c.k = k_best;
    c.heuristics.length_normalize = length_norm;
    if (eos_opt->count()) c.heuristics.eos_threshold_factor = eos_factor;
    if (reward_opt->count()) c.heuristics.length_reward = length_reward;
    c.lm_scale = lm_scale;
    c.max_steps_factor = max_steps_factor;
    c.validate();
    return c;
  }
};

DecodeConfig parse_config_string(const std::string& text) {
  CLI::App app{"config"};
  DecodeFlags flags;
  flags.attach(app);
  app.parse(text, false);
  return flags.config();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run_decode(const std::string& dataset, const fs::path& out_dir,
               const DecodeConfig& cfg, std::size_t jobs) {
  const auto records = load_dataset(dataset);
  const auto results = decode_all(records, cfg, jobs);
  const auto report = report_for(results);

  std::string lines;
  for (const auto& r : results) lines += result_line(r, records).dump() + "\n";
  write_file(out_dir / "results.jsonl", lines);
  nlohmann::json doc{{"dataset", fs::path(dataset).filename().string()},
                     {"flags", to_json(cfg)},
                     {"corpus", to_json(report)}};
  write_file(out_dir / "report.json", dump(doc));
  const std::string table = format_table({{std::string(to_string(cfg.mode)), report}});
  write_file(out_dir / "summary.txt", table);
  std::cout << table;

  for (const auto& r : results) {
    if (!r.result) std::cerr << r.id << ": " << r.error << "\n";
  }
  return any_failed(results) ? kFailure : kOk;
}

int run_compare(const std::string& dataset, const fs::path& out_dir,
                const std::vector<NamedConfig>& configs, std::size_t jobs) {
  const auto records = load_dataset(dataset);
  const auto cmp = compare_configs(records, configs, jobs);
  auto doc = to_json(cmp, configs);
  doc["dataset"] = fs::path(dataset).filename().string();
  write_file(out_dir / "compare.json", dump(doc));
  std::vector<std::pair<std::string, CorpusReport>> rows;
  for (std::size_t i = 0; i < configs.size(); ++i)
    rows.emplace_back(configs[i].name, cmp.reports[i]);
  std::string table = format_table(rows);
  table += "inversions: " + std::to_string(cmp.inversions.size()) + "\n";
  write_file(out_dir / "summary.txt", table);
  std::cout << table;
  for (const auto& run : cmp.runs) {
    if (any_failed(run)) return kFailure;
  }
  return kOk;
}

int run_oracle_check(const OracleCheckOptions& opts,
                     const std::vector<std::string>& model_files,
                     const std::string& out_path) {
  std::vector<TableModel> models;
  if (model_files.empty()) {
    models = random_oracle_models(opts.seed, opts.models);
  } else {
    for (const auto& f : model_files) models.push_back(load_table_model(f));
  }
  const auto props = oracle_check(models, opts);
  nlohmann::json doc{{"seed", opts.seed},
                     {"models", models.size()},
                     {"max_length", opts.max_length},
                     {"tolerance", json_number(opts.tolerance)},
                     {"properties", to_json(props)},
                     {"passed", all_passed(props)}};
  if (out_path.empty())
    std::cout << dump(doc);
  else
    write_file(out_path, dump(doc));
  for (const auto& p : props) {
    std::cerr << (p.status == "pass" ? "PASS " : p.status == "fail" ? "FAIL " : "SKIP ")
              << p.name << " max_deviation=" << p.max_deviation << "\n";
  }
  return all_passed(props) ? kOk : kFailure;
}

int run_generate(const fs::path& out_dir, const BiasedSuiteSpec& spec,
                 bool looping) {
  auto suite = make_biased_suite(spec);
  if (looping) suite.push_back(make_looping_utterance());
  std::string lines;
  for (const auto& u : suite) {
    const fs::path model = fs::path("models") / (u.id + ".json");
    fs::create_directories(out_dir / "models");
    save_table_model(u.model, out_dir / model);
    nlohmann::json rec{{"id", u.id},
                       {"model", model.generic_string()},
                       {"input_length_T", u.input_length},
                       {"reference", u.model.vocabulary().decode(u.reference)}};
    lines += rec.dump() + "\n";
  }
  write_file(out_dir / "dataset.jsonl", lines);
  std::cout << "wrote " << suite.size() << " utterances to "
            << (out_dir / "dataset.jsonl").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam search decoding with explicit length modeling"};
  app.require_subcommand(1);

  std::size_t jobs = 1;
  std::string dataset;
  std::string out_dir = ".";

  auto* decode = app.add_subcommand("decode", "decode a dataset with one configuration");
  DecodeFlags flags;
  flags.attach(*decode);
  decode->add_option("--dataset", dataset, "dataset JSONL")->required();
  decode->add_option("--out", out_dir, "output directory")->capture_default_str();
  decode->add_option("--jobs", jobs, "parallel utterances")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "decode with several configurations");
  std::vector<std::string> config_strings;
  compare->add_option("--dataset", dataset, "dataset JSONL")->required();
  compare->add_option("--out", out_dir, "output directory")->capture_default_str();
  compare->add_option("--config", config_strings, "decode flags, quoted; repeat")
      ->required();
  compare->add_option("--jobs", jobs, "parallel utterances")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "verify the exact identities");
  OracleCheckOptions oracle_opts;
  std::vector<std::string> model_files;
  std::string report_path;
  oracle->add_option("--seed", oracle_opts.seed, "random model seed")->capture_default_str();
  oracle->add_option("--models", oracle_opts.models, "random model count")
      ->capture_default_str();
  oracle->add_option("--max-length", oracle_opts.max_length, "enumeration length L")
      ->capture_default_str();
  oracle->add_option("--model", model_files, "check these model files instead");
  oracle->add_option("--report", report_path, "write the JSON report here");

  auto* generate = app.add_subcommand("generate-suite", "write a length-biased test suite");
  BiasedSuiteSpec suite;
  bool looping = false;
  generate->add_option("--out", out_dir, "output directory")->required();
  generate->add_option("--count", suite.count)->capture_default_str();
  generate->add_option("--seed", suite.seed)->capture_default_str();
  generate->add_option("--min-length", suite.min_length)->capture_default_str();
  generate->add_option("--max-length", suite.max_length)->capture_default_str();
  generate->add_option("--eos-leak", suite.eos_leak)->capture_default_str();
  generate->add_option("--on-target-mass", suite.on_target_mass)->capture_default_str();
  generate->add_flag("--looping", looping, "append the looping utterance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*decode) return run_decode(dataset, out_dir, flags.config(), jobs);
    if (*compare) {
      std::vector<NamedConfig> configs;
      for (const auto& s : config_strings) configs.push_back({s, parse_config_string(s)});
      if (configs.size() < 2) throw ConfigError("compare needs at least two --config");
      return run_compare(dataset, out_dir, configs, jobs);
    }
    if (*oracle) return run_oracle_check(oracle_opts, model_files, report_path);
    if (*generate) return run_generate(out_dir, suite, looping);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
