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
#include <cmath>
#include <compare>
#include <limits>
#include <span>

#include "lenbeam/error.hpp"

namespace lenbeam {

/// Natural-log probability. Adding two values multiplies the underlying
/// probabilities; negative infinity is probability zero and absorbs under
/// addition.
class LogProb {
 public:
  constexpr LogProb() = default;
  constexpr explicit LogProb(double value) : value_(value) {}

  static constexpr LogProb zero() {
    return LogProb(-std::numeric_limits<double>::infinity());
  }
  static constexpr LogProb one() { return LogProb(0.0); }
  static LogProb from_probability(double p) {
    return p <= 0.0 ? zero() : LogProb(std::log(p));
  }

  constexpr double value() const { return value_; }
  double probability() const { return std::exp(value_); }
  bool is_zero() const { return std::isinf(value_) && value_ < 0; }

  constexpr LogProb& operator+=(LogProb other) {
    value_ += other.value_;
    return *this;
  }
  friend constexpr LogProb operator+(LogProb a, LogProb b) { return a += b; }

  // Division of probabilities. Callers guard the zero/zero case.
  friend constexpr LogProb operator-(LogProb a, LogProb b) {
    return LogProb(a.value_ - b.value_);
  }

  // Raises the probability to `exponent`. A zero exponent yields one even
  // for a zero-probability operand.
  LogProb pow(double exponent) const {
    return exponent == 0.0 ? one() : LogProb(exponent * value_);
  }

  friend constexpr auto operator<=>(LogProb, LogProb) = default;

 private:
  double value_ = 0.0;
};

/// log(sum(exp(v))) with max subtraction. Throws on empty input.
inline LogProb log_sum_exp(std::span<const LogProb> values) {
  if (values.empty()) throw Error("empty log-sum");
  const LogProb max = *std::max_element(values.begin(), values.end());
  if (max.is_zero()) return LogProb::zero();
  double acc = 0.0;
  for (LogProb v : values) acc += std::exp(v.value() - max.value());
  return LogProb(max.value() + std::log(acc));
}

// log(1 - exp(x)) for x <= 0; -inf once x reaches zero.
inline LogProb log1m_exp(LogProb x) {
  if (x.value() >= 0.0) return LogProb::zero();
  // Two branches keep the relative error small near both ends.
  if (x.value() > -0.6931471805599453)
    return LogProb(std::log(-std::expm1(x.value())));
  return LogProb(std::log1p(-std::exp(x.value())));
}

}  // namespace lenbeam
