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

// Accuracy, ROC and AUC for scored membership decisions.

#ifndef DPMIA_METRICS_HPP_
#define DPMIA_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "dpmia/stats.hpp"

namespace dpmia {

// Balanced accuracy from false-positive rate alpha and false-negative
// rate beta.
inline double AccuracyFromErrors(double alpha, double beta) {
  return 0.5 * (1 - alpha) + 0.5 * (1 - beta);
}

struct ConfusionCounts {
  std::int64_t true_positive = 0;
  std::int64_t false_negative = 0;
  std::int64_t true_negative = 0;
  std::int64_t false_positive = 0;

  std::int64_t members() const { return true_positive + false_negative; }
  std::int64_t nonmembers() const { return true_negative + false_positive; }
  std::int64_t total() const { return members() + nonmembers(); }
  std::int64_t successes() const { return true_positive + true_negative; }
  double Accuracy() const {
    return total() ? static_cast<double>(successes()) / total() : 0.0;
  }
  double FalsePositiveRate() const {
    return nonmembers() ? static_cast<double>(false_positive) / nonmembers() : 0.0;
  }
  double FalseNegativeRate() const {
    return members() ? static_cast<double>(false_negative) / members() : 0.0;
  }
};

inline ConfusionCounts CountDecisions(std::span<const int> labels,
                                      std::span<const int> decisions) {
  if (labels.size() != decisions.size()) {
    throw std::invalid_argument("labels and decisions differ in length");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      ++(decisions[i] ? c.true_positive : c.false_negative);
    } else {
      ++(decisions[i] ? c.false_positive : c.true_negative);
    }
  }
  return c;
}

struct RocPoint {
  double threshold = 0;
  double fpr = 0;
  double tpr = 0;
};

struct RocCurve {
  // From (0, 0) to (1, 1); point i classifies score >= threshold as member.
  std::vector<RocPoint> points;
  double auc = 0;

  // Largest TPR whose FPR does not exceed `fpr`.
  double TprAtFpr(double fpr) const {
    double best = 0;
    for (const RocPoint& p : points) {
      if (p.fpr <= fpr) best = std::max(best, p.tpr);
    }
    return best;
  }
};

// Sweeps every distinct score as a threshold. Tied scores move together,
// so the trapezoid AUC equals the Mann-Whitney statistic with ties
// counted as one half.
inline RocCurve RocFromScores(std::span<const double> scores,
                              std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length");
  }
  std::int64_t pos = 0;
  for (int l : labels) pos += l ? 1 : 0;
  const std::int64_t neg = static_cast<std::int64_t>(labels.size()) - pos;
  if (pos == 0 || neg == 0) {
    throw std::invalid_argument("ROC needs both members and non-members");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  RocCurve roc;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0, 0});
  std::int64_t tp = 0, fp = 0;
  // Twice the area in units of 1 / (pos * neg), kept integral.
  std::int64_t area2 = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    std::int64_t dtp = 0, dfp = 0;
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      ++(labels[order[i]] ? dtp : dfp);
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    roc.points.push_back({s, static_cast<double>(fp) / neg,
                          static_cast<double>(tp) / pos});
  }
  roc.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * neg);
  return roc;
}

struct ProportionInterval {
  double low = 0;
  double high = 0;
};

// Normal-approximation interval for a proportion.
inline ProportionInterval NormalInterval(double p, std::int64_t n,
                                         double confidence = 0.95) {
  if (n <= 0) return {0, 1};
  const double z = NormalQuantile(0.5 + confidence / 2);
  const double half = z * std::sqrt(std::max(0.0, p * (1 - p)) / n);
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

}  // namespace dpmia

#endif  // DPMIA_METRICS_HPP_
