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

// JSON model files:
//
//   { "vocab": ["a", "b"], "eos": "</s>",
//     "contexts": { "": [0.4, 0.4, 0.2], "a": [0.8, 0.1, 0.1] } }
//
// Vectors follow vocabulary order. When "eos" is missing from "vocab" it is
// appended as the last entry. Context keys are space-separated histories.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lenbeam/error.hpp"
#include "lenbeam/table_model.hpp"

namespace lenbeam {

inline std::vector<std::string> split_labels(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline TableModel table_model_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("model must be a JSON object");
    for (const char* field : {"vocab", "eos", "contexts"}) {
      if (!doc.contains(field))
        throw ParseError(std::string("model is missing \"") + field + "\"");
    }
    auto vocab = Vocabulary::with_eos(
        doc.at("vocab").get<std::vector<std::string>>(),
        doc.at("eos").get<std::string>());
    if (!doc.at("contexts").is_object())
      throw ParseError("\"contexts\" must be an object");
    TableModel::ContextTable contexts;
    for (const auto& [key, value] : doc.at("contexts").items()) {
      LabelSequence history;
      for (const auto& name : split_labels(key)) {
        auto label = vocab.find(name);
        if (!label)
          throw ParseError("context '" + key + "' uses unknown label '" +
                           name + "'");
        history.push_back(*label);
      }
      if (!contexts.emplace(history, value.get<std::vector<double>>()).second)
        throw ParseError("duplicate context '" + key + "'");
    }
    return TableModel(std::move(vocab), contexts);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
}

inline nlohmann::json to_json(const TableModel& model) {
  const Vocabulary& vocab = model.vocabulary();
  nlohmann::json contexts = nlohmann::json::object();
  for (const auto& [history, probs] : model.probabilities())
    contexts[vocab.join(history)] = probs;
  return {{"vocab", vocab.labels()},
          {"eos", vocab.label(vocab.eos())},
          {"contexts", std::move(contexts)}};
}

inline TableModel load_table_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return table_model_from_json(doc);
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void save_table_model(const TableModel& model,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path.string());
  out << to_json(model).dump(1) << '\n';
}

}  // namespace lenbeam
