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

// Datasets are JSONL, one utterance per line:
//
//   {"id": "utt000", "model": "models/utt000.json", "lm": "lm.json",
//    "input_length_T": 24, "reference": ["a", "c", "b"]}
//
// "model" and "lm" are paths relative to the dataset file or inline model
// objects; "lm" is optional. Blank lines are skipped.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lenbeam/error.hpp"
#include "lenbeam/model_io.hpp"
#include "lenbeam/table_model.hpp"

namespace lenbeam {

struct UtteranceRecord {
  std::string id;
  std::shared_ptr<const TableModel> model;
  std::shared_ptr<const TableModel> lm;  // null without an LM
  std::size_t input_length = 0;          // T
  std::vector<std::string> reference;
};

namespace detail {

// Model files shared by many utterances are loaded once.
class ModelCache {
 public:
  explicit ModelCache(std::filesystem::path base) : base_(std::move(base)) {}

  std::shared_ptr<const TableModel> get(const nlohmann::json& ref) {
    if (ref.is_object())
      return std::make_shared<const TableModel>(table_model_from_json(ref));
    if (!ref.is_string())
      throw ParseError("model must be a path or an inline object");
    std::filesystem::path path = ref.get<std::string>();
    if (path.is_relative()) path = base_ / path;
    const std::string key = path.lexically_normal().string();
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, std::make_shared<const TableModel>(
                                   load_table_model(path))).first;
    return it->second;
  }

 private:
  std::filesystem::path base_;
  std::map<std::string, std::shared_ptr<const TableModel>> cache_;
};

}  // namespace detail

/// Parses a dataset stream. `base` resolves relative model paths. Every
/// error is a ParseError carrying the 1-based line number.
inline std::vector<UtteranceRecord> parse_dataset(
    std::istream& in, const std::filesystem::path& base) {
  detail::ModelCache models(base);
  std::vector<UtteranceRecord> out;
  std::set<std::string> ids;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto doc = nlohmann::json::parse(text);
      if (!doc.is_object()) throw ParseError("record must be a JSON object");
      for (const char* field : {"id", "model", "input_length_T", "reference"}) {
        if (!doc.contains(field))
          throw ParseError(std::string("missing \"") + field + "\"");
      }
      UtteranceRecord rec;
      rec.id = doc.at("id").get<std::string>();
      if (!ids.insert(rec.id).second)
        throw ParseError("duplicate id '" + rec.id + "'");
      rec.model = models.get(doc.at("model"));
      if (doc.contains("lm") && !doc.at("lm").is_null()) {
        rec.lm = models.get(doc.at("lm"));
        if (!(rec.lm->vocabulary() == rec.model->vocabulary()))
          throw ParseError("lm vocabulary differs from the model's");
      }
      const auto& t = doc.at("input_length_T");
      if (!t.is_number_integer() || t.get<long long>() < 1)
        throw ParseError("input_length_T must be an integer >= 1");
      rec.input_length = t.get<std::size_t>();
      const auto& ref = doc.at("reference");
      rec.reference = ref.is_string() ? split_labels(ref.get<std::string>())
                                      : ref.get<std::vector<std::string>>();
      const Vocabulary& vocab = rec.model->vocabulary();
      for (const auto& label : rec.reference) {
        auto l = vocab.find(label);
        if (!l) throw ParseError("reference label '" + label + "' not in vocabulary");
        if (vocab.is_eos(*l)) throw ParseError("reference contains EOS");
      }
      out.push_back(std::move(rec));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line);
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
  }
  return out;
}

inline std::vector<UtteranceRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset " + path.string());
  return parse_dataset(in, path.parent_path());
}

}  // namespace lenbeam
