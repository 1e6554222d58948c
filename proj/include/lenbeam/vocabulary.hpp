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
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"

namespace lenbeam {

using Label = std::uint32_t;
using LabelSequence = std::vector<Label>;

// Pseudo label fed to a scorer's first step (the sentence-start symbol).
inline constexpr Label kStartLabel = std::numeric_limits<Label>::max();

/// Ordered set of distinct output labels, one of which is the sequence-end
/// label. Probability vectors are indexed by label position.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> labels, Label eos)
      : labels_(std::move(labels)), eos_(eos) {
    if (labels_.size() < 2)
      throw ConfigError("vocabulary needs at least one label besides EOS");
    if (eos_ >= labels_.size()) throw ConfigError("EOS index out of range");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], static_cast<Label>(i)).second)
        throw ConfigError("duplicate label '" + labels_[i] + "'");
    }
  }

  // Appends `eos` to `labels` unless it is already present.
  static Vocabulary with_eos(std::vector<std::string> labels,
                             const std::string& eos) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == eos) return Vocabulary(std::move(labels), Label(i));
    }
    labels.push_back(eos);
    const auto eos_index = static_cast<Label>(labels.size() - 1);
    return Vocabulary(std::move(labels), eos_index);
  }

  std::size_t size() const { return labels_.size(); }
  Label eos() const { return eos_; }
  bool is_eos(Label label) const { return label == eos_; }
  const std::string& label(Label index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Label> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Label at(const std::string& name) const {
    auto found = find(name);
    if (!found) throw ConfigError("unknown label '" + name + "'");
    return *found;
  }

  LabelSequence encode(const std::vector<std::string>& names) const {
    LabelSequence out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(at(n));
    return out;
  }

  std::vector<std::string> decode(const LabelSequence& seq) const {
    std::vector<std::string> out;
    out.reserve(seq.size());
    for (Label l : seq) out.push_back(label(l));
    return out;
  }

  // Space-joined rendering, the same form used for context keys.
  std::string join(const LabelSequence& seq) const {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out += ' ';
      out += label(seq[i]);
    }
    return out;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.eos_ == b.eos_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  Label eos_;
  std::unordered_map<std::string, Label> index_;
};

}  // namespace lenbeam
