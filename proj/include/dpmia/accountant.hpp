// Copyright 2026 The dpmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Optimal k-fold composition of (epsilon, delta)-DP mechanisms and the
// hypothesis-testing view of the resulting privacy region.
//
// Composing k mechanisms that are each (eps, delta)-DP yields a mechanism
// that is simultaneously ((k - 2i) eps, 1 - (1 - delta)^k (1 - delta_i))-DP
// for every i in 0..floor(k/2), where
//
//   delta_i = sum_{l<i} C(k,l) (e^{(k-l)eps} - e^{(k-2i+l)eps}) / (1+e^eps)^k.
//
// The sum is evaluated in log space so that k in the hundreds is stable.

#ifndef DPMIA_ACCOUNTANT_HPP_
#define DPMIA_ACCOUNTANT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpmia/mechanism_spec.hpp"
#include "dpmia/stats.hpp"

namespace dpmia {

struct PrivacyRegionPoint {
  double epsilon_total = 0;
  double delta_total = 0;
};

struct ErrorPair {
  double alpha = 0;  // false positive rate
  double beta = 0;   // false negative rate
};

namespace internal {

// log(1 + e^x) without overflow.
inline double Log1pExp(double x) {
  return x > 30 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace internal

inline std::vector<PrivacyRegionPoint> CompositionDeltas(double epsilon,
                                                         double delta, int k) {
  if (k < 1) throw std::invalid_argument("composition needs k >= 1");
  if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(delta >= 0 && delta <= 1)) {
    throw std::invalid_argument("delta must lie in [0, 1]");
  }
  const double log_norm = k * internal::Log1pExp(epsilon);
  const double log_keep = k * std::log1p(-delta);  // log (1 - delta)^k
  std::vector<PrivacyRegionPoint> points;
  points.reserve(k / 2 + 1);
  std::vector<double> terms;
  for (int i = 0; i <= k / 2; ++i) {
    terms.clear();
    for (int l = 0; l < i; ++l) {
      // C(k,l) e^{(k-l)eps} (1 - e^{(2l-2i)eps}); the bracket is >= 0.
      const double bracket = -std::expm1((2.0 * l - 2.0 * i) * epsilon);
      if (bracket <= 0) continue;
      terms.push_back(LogChoose(k, l) + (k - l) * epsilon + std::log(bracket) -
                      log_norm);
    }
    const double delta_i =
        terms.empty() ? 0.0 : std::min(1.0, std::exp(LogSumExp(terms)));
    // 1 - (1-delta)^k (1-delta_i)
    const double total = -std::expm1(log_keep + std::log1p(-delta_i));
    points.push_back({(k - 2.0 * i) * epsilon, std::clamp(total, 0.0, 1.0)});
  }
  return points;
}

// Smallest alpha + beta allowed by an (eps, delta)-DP test region:
//   alpha + e^eps beta >= 1 - delta  and  e^eps alpha + beta >= 1 - delta.
// The optimum sits at the intersection alpha = beta = (1-delta)/(1+e^eps).
inline ErrorPair TradeoffMinError(const PrivacyRegionPoint& point) {
  if (!(point.delta_total >= 0 && point.delta_total <= 1)) {
    throw std::invalid_argument("delta_total must lie in [0, 1]");
  }
  double rate = 0;
  if (std::isfinite(point.epsilon_total)) {
    rate = (1 - point.delta_total) *
           std::exp(-internal::Log1pExp(point.epsilon_total));
  }
  rate = std::clamp(rate, 0.0, 1.0);
  return {rate, rate};
}

// Upper bound on balanced attack accuracy against k observations of the
// mechanism. The composed mechanism satisfies every region point at once, so
// the binding point is the one giving the lowest accuracy.
inline double ExpectedAttackAccuracy(double epsilon, double delta, int k) {
  if (k < 1) throw std::invalid_argument("composition needs k >= 1");
  if (!std::isfinite(epsilon)) return 1.0;
  double best = 1.0;
  for (const PrivacyRegionPoint& p : CompositionDeltas(epsilon, delta, k)) {
    const ErrorPair e = TradeoffMinError(p);
    best = std::min(best, 1 - (e.alpha + e.beta) / 2);
  }
  return std::clamp(best, 0.5, 1.0);
}

inline double ExpectedAttackAccuracy(const MechanismSpec& mechanism, int k) {
  return ExpectedAttackAccuracy(mechanism.epsilon, mechanism.delta, k);
}

}  // namespace dpmia

#endif  // DPMIA_ACCOUNTANT_HPP_
