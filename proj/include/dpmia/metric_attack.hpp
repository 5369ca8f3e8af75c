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

// Metric-based membership inference against noisy aggregates.
//
// The attacker builds labelled shadow aggregates, scores every aggregate by
// looking only at the target's positive observations, and calibrates a
// threshold on the shadow scores:
//
//   one-threshold: score = sum of residuals at the positive cells
//   two-threshold: score = number of positive cells whose residual clears a
//                  per-cell threshold
//
// A residual is the released value minus the attacker's background counts.
// Shadow aggregates carry no background, so their residual is the value.

#ifndef DPMIA_METRIC_ATTACK_HPP_
#define DPMIA_METRIC_ATTACK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/ecdf.hpp"
#include "dpmia/mechanism.hpp"
#include "dpmia/rng.hpp"
#include "dpmia/score_model.hpp"
#include "dpmia/stats.hpp"
#include "dpmia/trace.hpp"

namespace dpmia {

// Labelled shadow aggregates. The first floor(m/2) are members (target
// added before perturbation), the rest non-members.
struct ShadowSet {
  std::vector<NoisyAggregate> aggregates;
  std::vector<int> labels;
  TraceMatrix target;

  std::size_t size() const { return aggregates.size(); }
};

struct AttackOutcome {
  double score = 0;
  double threshold = 0;
  int decision = 0;
};

// Thresholds for the target's positive observations, in row-major cell
// order. `cells` holds flat indices.
struct PerCellThresholds {
  int sites = 0;
  int epochs = 0;
  std::vector<int> cells;
  std::vector<double> thresholds;

  std::size_t size() const { return cells.size(); }

  double At(int flat_index) const {
    const auto it = std::lower_bound(cells.begin(), cells.end(), flat_index);
    if (it == cells.end() || *it != flat_index) {
      throw std::invalid_argument(
          "no threshold for cell (" + std::to_string(flat_index / epochs) +
          "," + std::to_string(flat_index % epochs) + ")");
    }
    return thresholds[static_cast<std::size_t>(it - cells.begin())];
  }
};

inline void to_json(nlohmann::json& j, const PerCellThresholds& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    entries.push_back({{"site", t.cells[i] / t.epochs},
                       {"epoch", t.cells[i] % t.epochs},
                       {"threshold", t.thresholds[i]}});
  }
  j = nlohmann::json{{"sites", t.sites}, {"epochs", t.epochs},
                     {"thresholds", entries}};
}

// Score of a full-grid residual vector.
using Scorer = std::function<double(std::span<const double> residual)>;

// Builds m shadow aggregates, each the sum of round(n (1 - theta)) traces
// drawn without replacement from `aux`, with the target added to the first
// floor(m/2), all perturbed by `mechanism`. Aggregate i uses its own RNG
// stream derived from `seed`.
inline ShadowSet GenerateShadowSet(const TraceDataset& aux, std::size_t n,
                                   double theta, std::size_t m,
                                   const TraceMatrix& target,
                                   const MechanismSpec& mechanism,
                                   std::uint64_t seed) {
  if (!(theta >= 0 && theta <= 1)) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (!target.SameShape(aux.sites(), aux.epochs())) {
    throw std::invalid_argument("shadow set: target dimension mismatch");
  }
  const auto sampled = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1 - theta)));
  if (sampled > aux.size()) {
    throw std::invalid_argument(
        "shadow set: need " + std::to_string(sampled) +
        " auxiliary traces per aggregate but only " +
        std::to_string(aux.size()) + " are available");
  }
  ShadowSet shadow{{}, {}, target};
  shadow.aggregates.reserve(m);
  shadow.labels.reserve(m);
  std::vector<std::size_t> order(aux.size());
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = Rng::Stream(seed, i);
    std::iota(order.begin(), order.end(), 0);
    rng.PartialShuffle(std::span<std::size_t>(order), sampled);
    AggregateMatrix agg = AggregateSubset(
        aux, std::span<const std::size_t>(order.data(), sampled));
    const int label = i < m / 2 ? 1 : 0;
    if (label == 1) agg.Add(target);
    shadow.aggregates.push_back(Perturb(agg, mechanism, rng));
    shadow.labels.push_back(label);
  }
  return shadow;
}

inline double ScoreOneResidual(std::span<const double> residual,
                               const TraceMatrix& target) {
  if (residual.size() != static_cast<std::size_t>(target.size())) {
    throw std::invalid_argument("score: dimension mismatch");
  }
  double s = 0;
  for (int index : target.support()) s += residual[index];
  return s;
}

// Sum over positive observations of (released - background).
inline double ScoreOne(const NoisyAggregate& release,
                       const AggregateMatrix& background,
                       const TraceMatrix& target) {
  if (!target.SameShape(release.sites(), release.epochs())) {
    throw std::invalid_argument("score: target dimension mismatch");
  }
  return ScoreOneResidual(Residual(release, background), target);
}

inline int ScoreTwoResidual(std::span<const double> residual,
                            const TraceMatrix& target,
                            const PerCellThresholds& thresholds) {
  if (residual.size() != static_cast<std::size_t>(target.size())) {
    throw std::invalid_argument("score: dimension mismatch");
  }
  int count = 0;
  for (int index : target.support()) {
    if (residual[index] >= thresholds.At(index)) ++count;
  }
  return count;
}

// Number of positive observations whose residual reaches its threshold.
inline int ScoreTwo(const NoisyAggregate& release,
                    const AggregateMatrix& background,
                    const TraceMatrix& target,
                    const PerCellThresholds& thresholds) {
  if (!target.SameShape(release.sites(), release.epochs())) {
    throw std::invalid_argument("score: target dimension mismatch");
  }
  return ScoreTwoResidual(Residual(release, background), target, thresholds);
}

// Member iff score >= threshold.
inline int Decide(double score, double threshold) {
  return score < threshold ? 0 : 1;
}

inline Scorer OneThresholdScorer(const TraceMatrix& target) {
  return [&target](std::span<const double> r) {
    return ScoreOneResidual(r, target);
  };
}

inline Scorer TwoThresholdScorer(const TraceMatrix& target,
                                 const PerCellThresholds& thresholds) {
  return [&target, &thresholds](std::span<const double> r) {
    return static_cast<double>(ScoreTwoResidual(r, target, thresholds));
  };
}

struct ShadowScores {
  std::vector<double> member;
  std::vector<double> nonmember;
};

inline ShadowScores ScoreShadows(const ShadowSet& shadow, const Scorer& scorer) {
  ShadowScores out;
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    const double s = scorer(shadow.aggregates[i].values());
    (shadow.labels[i] == 1 ? out.member : out.nonmember).push_back(s);
  }
  return out;
}

namespace internal {

inline void RequireBothClasses(const ShadowScores& scores) {
  if (scores.member.empty() || scores.nonmember.empty()) {
    throw std::invalid_argument(
        "threshold estimation needs member and non-member shadows");
  }
}

}  // namespace internal

// Midpoint of the mean member and mean non-member shadow scores.
inline double EstimateThresholdMaxAcc(const ShadowSet& shadow,
                                      const Scorer& scorer) {
  const ShadowScores scores = ScoreShadows(shadow, scorer);
  internal::RequireBothClasses(scores);
  return 0.5 * (Mean(scores.member) + Mean(scores.nonmember));
}

// Fits a Gaussian to each class with the averaged standard deviation and
// returns the non-member quantile at 1 - alpha, so that the expected false
// positive rate is alpha.
inline double EstimateThresholdFixedError(const ShadowSet& shadow,
                                          const Scorer& scorer, double alpha) {
  if (!(alpha > 0 && alpha < 1)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const ShadowScores scores = ScoreShadows(shadow, scorer);
  internal::RequireBothClasses(scores);
  const double mu0 = Mean(scores.nonmember);
  const double sd = 0.5 * (StdDev(scores.nonmember) + StdDev(scores.member));
  if (!(sd > 0)) {
    throw std::invalid_argument(
        "fixed-error threshold: shadow scores have zero variance");
  }
  return mu0 + sd * NormalQuantile(1 - alpha);
}

namespace internal {

// Per positive cell, the shadow values split by class.
struct CellSamples {
  std::vector<std::vector<double>> member;
  std::vector<std::vector<double>> nonmember;
};

inline CellSamples CollectCellSamples(const ShadowSet& shadow) {
  const auto& support = shadow.target.support();
  CellSamples out;
  out.member.resize(support.size());
  out.nonmember.resize(support.size());
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    const auto values = shadow.aggregates[i].values();
    auto& dest = shadow.labels[i] == 1 ? out.member : out.nonmember;
    for (std::size_t c = 0; c < support.size(); ++c) {
      dest[c].push_back(values[support[c]]);
    }
  }
  return out;
}

}  // namespace internal

// Per positive cell, midpoint of the member and non-member cell means.
inline PerCellThresholds PerCellThresholdsMaxAcc(const ShadowSet& shadow) {
  const auto& support = shadow.target.support();
  PerCellThresholds out{shadow.target.sites(), shadow.target.epochs(),
                        support, {}};
  out.thresholds.assign(support.size(), 0);
  if (support.empty()) return out;
  const std::size_t members = static_cast<std::size_t>(
      std::count(shadow.labels.begin(), shadow.labels.end(), 1));
  if (members == 0 || members == shadow.size()) {
    throw std::invalid_argument(
        "threshold estimation needs member and non-member shadows");
  }
  std::vector<double> sum_member(support.size(), 0);
  std::vector<double> sum_nonmember(support.size(), 0);
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    const auto values = shadow.aggregates[i].values();
    auto& sums = shadow.labels[i] == 1 ? sum_member : sum_nonmember;
    for (std::size_t c = 0; c < support.size(); ++c) {
      sums[c] += values[support[c]];
    }
  }
  const double n1 = static_cast<double>(members);
  const double n0 = static_cast<double>(shadow.size() - members);
  for (std::size_t c = 0; c < support.size(); ++c) {
    out.thresholds[c] = 0.5 * (sum_member[c] / n1 + sum_nonmember[c] / n0);
  }
  return out;
}

// Per positive cell, the smoothed non-member CDF inverted at 1 - alpha_c.
// `alphas` is indexed like the target's positive observations.
inline PerCellThresholds PerCellThresholdsFixedError(
    const ShadowSet& shadow, std::span<const double> alphas) {
  const auto& support = shadow.target.support();
  if (alphas.size() != support.size()) {
    throw std::invalid_argument("need one alpha per positive observation");
  }
  PerCellThresholds out{shadow.target.sites(), shadow.target.epochs(),
                        support, {}};
  out.thresholds.assign(support.size(), 0);
  if (support.empty()) return out;
  const internal::CellSamples samples = internal::CollectCellSamples(shadow);
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (!(alphas[c] > 0 && alphas[c] < 1)) {
      throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (samples.member[c].empty() || samples.nonmember[c].empty()) {
      throw std::invalid_argument(
          "threshold estimation needs member and non-member shadows");
    }
    try {
      const SmoothedCdf cdf = SmoothedCdf::FromSamples(samples.nonmember[c]);
      out.thresholds[c] = cdf.Quantile(1 - alphas[c]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(
          std::string(e.what()) + " at cell (" +
          std::to_string(support[c] / out.epochs) + "," +
          std::to_string(support[c] % out.epochs) + ")");
    }
  }
  return out;
}

// Smoothed empirical score distributions of the shadow set.
inline EmpiricalPair EmpiricalScoreModel(const ShadowSet& shadow,
                                         const Scorer& scorer) {
  const ShadowScores scores = ScoreShadows(shadow, scorer);
  internal::RequireBothClasses(scores);
  return {SmoothedCdf::FromSamples(scores.nonmember),
          SmoothedCdf::FromSamples(scores.member)};
}

// Per-cell moments of the clean residual when the attacker aggregates
// `sample_count` traces drawn without replacement from `aux`
// (hypergeometric mean and variance).
struct CellMoments {
  std::vector<double> means;
  std::vector<double> variances;
};

inline CellMoments AuxiliaryCellMoments(const TraceDataset& aux,
                                        std::size_t sample_count) {
  const double total = static_cast<double>(aux.size());
  const double k = static_cast<double>(sample_count);
  if (k > total) throw std::invalid_argument("sample exceeds auxiliary set");
  const std::vector<double> freq = aux.CellFrequencies();
  CellMoments out{std::vector<double>(freq.size()),
                  std::vector<double>(freq.size())};
  const double fpc = total > 1 ? (total - k) / (total - 1) : 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    out.means[i] = k * freq[i];
    out.variances[i] = k * freq[i] * (1 - freq[i]) * fpc;
  }
  return out;
}

// Inner product of the target with the residual, minus the mean inner
// product of the reference traces with the residual.
inline double ReferenceAttackScoreResidual(std::span<const double> residual,
                                           const TraceMatrix& target,
                                           const TraceDataset& references) {
  if (residual.size() != static_cast<std::size_t>(target.size()) ||
      !target.SameShape(references.sites(), references.epochs())) {
    throw std::invalid_argument("reference attack: dimension mismatch");
  }
  double reference_mean = 0;
  for (const TraceMatrix& r : references) {
    reference_mean += ScoreOneResidual(residual, r);
  }
  reference_mean /= static_cast<double>(references.size());
  return ScoreOneResidual(residual, target) - reference_mean;
}

inline double ReferenceAttackScore(const NoisyAggregate& release,
                                   const AggregateMatrix& background,
                                   const TraceMatrix& target,
                                   const TraceDataset& references) {
  return ReferenceAttackScoreResidual(Residual(release, background), target,
                                      references);
}

inline Scorer ReferenceScorer(const TraceMatrix& target,
                              const TraceDataset& references) {
  return [&target, &references](std::span<const double> r) {
    return ReferenceAttackScoreResidual(r, target, references);
  };
}

}  // namespace dpmia

#endif  // DPMIA_METRIC_ATTACK_HPP_
