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

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lenbeam/error.hpp"
#include "lenbeam/hypothesis.hpp"

namespace lenbeam {

struct AlignmentCounts {
  std::size_t ins = 0;
  std::size_t del = 0;
  std::size_t sub = 0;
  std::size_t hits = 0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  std::size_t errors() const { return ins + del + sub; }

  // Errors over reference length; an empty reference scores 0 when the
  // hypothesis is empty too and 1 otherwise.
  double error_rate() const {
    if (ref_len == 0) return errors() == 0 ? 0.0 : 1.0;
    return double(errors()) / double(ref_len);
  }

  AlignmentCounts& operator+=(const AlignmentCounts& o) {
    ins += o.ins;
    del += o.del;
    sub += o.sub;
    hits += o.hits;
    ref_len += o.ref_len;
    hyp_len += o.hyp_len;
    return *this;
  }

  friend bool operator==(const AlignmentCounts&, const AlignmentCounts&) = default;
};

/// Unit-cost Levenshtein alignment. Among minimal alignments the backtrace
/// (from the end) prefers a diagonal move (hit or substitution), then a
/// deletion, then an insertion.
template <typename T>
AlignmentCounts align(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  AlignmentCounts c;
  c.ref_len = n;
  c.hyp_len = m;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        ++(same ? c.hits : c.sub);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++c.del;
      --i;
    } else {
      ++c.ins;
      --j;
    }
  }
  return c;
}

template <typename T>
AlignmentCounts align(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return align(std::span<const T>(ref), std::span<const T>(hyp));
}

/// One decoded utterance as seen by the report.
struct UtteranceOutcome {
  std::string id;
  std::vector<std::string> hypothesis;  // MAP output, EOS excluded
  std::size_t steps = 0;
  StopReason stop_reason = StopReason::kMaxLength;
  bool failed = false;  // no decision; counted with an empty hypothesis
};

struct CorpusReport {
  std::vector<std::pair<std::string, AlignmentCounts>> per_utterance;
  AlignmentCounts total;
  double wer = 0.0;
  double avg_hyp_length = 0.0;
  double avg_ref_length = 0.0;
  double avg_steps = 0.0;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> stop_reasons;
};

/// Aggregates outcomes against references keyed by utterance id. Both sides
/// must cover the same ids.
inline CorpusReport corpus_report(
    std::span<const UtteranceOutcome> outcomes,
    const std::map<std::string, std::vector<std::string>>& references) {
  std::set<std::string> seen;
  std::vector<std::string> missing_refs;
  for (const auto& o : outcomes) {
    if (!seen.insert(o.id).second)
      throw Error("duplicate utterance id '" + o.id + "'");
    if (!references.contains(o.id)) missing_refs.push_back(o.id);
  }
  std::vector<std::string> missing_results;
  for (const auto& [id, ref] : references) {
    if (!seen.contains(id)) missing_results.push_back(id);
  }
  if (!missing_refs.empty() || !missing_results.empty()) {
    std::string msg = "utterance ids do not match;";
    for (const auto& id : missing_results) msg += " no result for '" + id + "';";
    for (const auto& id : missing_refs) msg += " no reference for '" + id + "';";
    throw Error(msg);
  }

  CorpusReport r;
  double steps = 0.0;
  for (const auto& o : outcomes) {
    const auto& ref = references.at(o.id);
    const std::vector<std::string> empty;
    auto counts = align(ref, o.failed ? empty : o.hypothesis);
    r.per_utterance.emplace_back(o.id, counts);
    r.total += counts;
    steps += double(o.steps);
    ++r.stop_reasons[std::string(to_string(o.stop_reason))];
    if (o.failed) ++r.failures;
  }
  if (!outcomes.empty()) {
    const double n = double(outcomes.size());
    r.avg_hyp_length = double(r.total.hyp_len) / n;
    r.avg_ref_length = double(r.total.ref_len) / n;
    r.avg_steps = steps / n;
  }
  r.wer = r.total.error_rate();
  return r;
}

/// Plain-text summary table, one row per named report.
inline std::string format_table(
    const std::vector<std::pair<std::string, CorpusReport>>& rows) {
  std::size_t width = 6;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %7s %6s %6s %6s %7s %7s %7s\n",
                int(width), "config", "WER[%]", "ins", "del", "sub", "len",
                "ref", "steps");
  out += buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s %7.2f %6zu %6zu %6zu %7.2f %7.2f %7.2f\n",
                  int(width), name.c_str(), 100.0 * r.wer, r.total.ins,
                  r.total.del, r.total.sub, r.avg_hyp_length, r.avg_ref_length,
                  r.avg_steps);
    out += buf;
  }
  return out;
}

}  // namespace lenbeam
