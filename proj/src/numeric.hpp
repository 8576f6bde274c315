// Copyright 2026 The quanta Authors.
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

#ifndef QUANTA_SRC_NUMERIC_HPP
#define QUANTA_SRC_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace quanta::detail {

  /// Neumaier compensated summation.
  class CompensatedSum {
  public:
    void add(double x) {
      const double t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
      else
        comp_ += (x - t) + sum_;
      sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
  };

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  /// Streaming log(sum exp(x_i)); -inf terms are ignored.
  class LogSumExp {
  public:
    void add(double log_term) {
      if (log_term == kNegInf)
        return;
      if (log_term <= max_) {
        acc_.add(std::exp(log_term - max_));
      } else {
        // rescale what we have so far to the new maximum
        const double shrink = max_ == kNegInf ? 0.0 : std::exp(max_ - log_term);
        CompensatedSum rescaled;
        rescaled.add(acc_.value() * shrink);
        rescaled.add(1.0);
        acc_ = rescaled;
        max_ = log_term;
      }
    }
    double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(acc_.value()); }

  private:
    double max_ = kNegInf;
    CompensatedSum acc_;
  };

  inline double log_sum_exp(std::span<const double> terms) {
    const double m = terms.empty() ? kNegInf : *std::max_element(terms.begin(), terms.end());
    if (m == kNegInf)
      return kNegInf;
    CompensatedSum s;
    for (double t : terms)
      if (t != kNegInf)
        s.add(std::exp(t - m));
    return m + std::log(s.value());
  }

  inline double safe_log(double x) { return x > 0 ? std::log(x) : kNegInf; }

}

#endif
