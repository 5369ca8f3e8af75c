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

// Analytic and empirical models of attack-score distributions, and the
// accuracy-maximising threshold for each model.
//
// Every model is a pair (non-member distribution P, member distribution Q).
// The attack declares "member" when score >= threshold, so the balanced
// accuracy at threshold t is  1/2 Q(s >= t) + 1/2 P(s < t).

#ifndef DPMIA_SCORE_MODEL_HPP_
#define DPMIA_SCORE_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/accountant.hpp"
#include "dpmia/ecdf.hpp"
#include "dpmia/mechanism.hpp"
#include "dpmia/stats.hpp"
#include "dpmia/trace.hpp"

namespace dpmia {

// Gaussian approximation of both score distributions.
struct GaussianPair {
  double mu_nonmember = 0;
  double mu_member = 0;
  double sd_nonmember = 0;
  double sd_member = 0;
};

// Count of successes over independent per-cell indicators. Homogeneous rates
// give a Binomial pair; heterogeneous rates a Poisson-binomial pair.
struct BinomialPair {
  std::vector<double> p_nonmember;
  std::vector<double> p_member;

  static BinomialPair Homogeneous(int n, double p_nonmember, double p_member) {
    if (n < 0) throw std::invalid_argument("binomial pair needs n >= 0");
    return {std::vector<double>(n, p_nonmember),
            std::vector<double>(n, p_member)};
  }
  int trials() const { return static_cast<int>(p_member.size()); }
};

// Smoothed empirical CDFs of shadow scores.
struct EmpiricalPair {
  SmoothedCdf nonmember;
  SmoothedCdf member;
};

using ScoreModel = std::variant<GaussianPair, BinomialPair, EmpiricalPair>;

struct ThresholdAccuracy {
  double threshold = 0;
  double accuracy = 0.5;
};

struct GaussianParams {
  double mean = 0;
  double sd = 0;
  // Set when n < 5, where the normal approximation is not trusted.
  bool small_sample_warning = false;
};

// Normal approximation of Binomial(n, p).
inline GaussianParams CltBinomialApprox(int n, double p) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must lie in [0, 1]");
  return {n * p, std::sqrt(n * p * (1 - p)), n < 5};
}

// Exact distribution of a sum of independent Bernoulli(p_i).
inline std::vector<double> PoissonBinomialPmf(std::span<const double> probs) {
  std::vector<double> pmf(probs.size() + 1, 0);
  pmf[0] = 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!(p >= 0 && p <= 1)) {
      throw std::invalid_argument("probability outside [0, 1]");
    }
    for (std::size_t s = i + 1; s > 0; --s) {
      pmf[s] = pmf[s] * (1 - p) + pmf[s - 1] * p;
    }
    pmf[0] *= 1 - p;
  }
  return pmf;
}

inline bool IsHomogeneous(std::span<const double> probs) {
  return std::all_of(probs.begin(), probs.end(),
                     [&](double p) { return p == probs.front(); });
}

// Exact Binomial pmf in log space, used for homogeneous pairs.
inline std::vector<double> BinomialPmf(int n, double p) {
  std::vector<double> pmf(n + 1, 0);
  if (p <= 0) {
    pmf[0] = 1;
    return pmf;
  }
  if (p >= 1) {
    pmf[n] = 1;
    return pmf;
  }
  for (int s = 0; s <= n; ++s) {
    pmf[s] = std::exp(LogChoose(n, s) + s * std::log(p) +
                      (n - s) * std::log1p(-p));
  }
  return pmf;
}

inline std::vector<double> CountPmf(std::span<const double> probs) {
  if (!probs.empty() && IsHomogeneous(probs)) {
    return BinomialPmf(static_cast<int>(probs.size()), probs.front());
  }
  return PoissonBinomialPmf(probs);
}

// Gaussian score model for the summed-residual score.
//
// cell_means / cell_variances describe the clean residual aggregate at every
// cell (all zeros for an informed attacker). The member distribution is
// shifted by one per positive observation because the target contributes a
// single one to each of its cells.
inline GaussianPair AnalyticOneThresholdModel(
    std::span<const double> cell_means, std::span<const double> cell_variances,
    const TraceMatrix& target, const MechanismSpec& mechanism) {
  const auto cells = static_cast<std::size_t>(target.size());
  if (cell_means.size() != cells || cell_variances.size() != cells) {
    throw std::invalid_argument("one-threshold model: dimension mismatch");
  }
  double mu = 0;
  double variance = 0;
  for (int index : target.support()) {
    if (cell_variances[index] < 0) {
      throw std::invalid_argument("negative cell variance at cell " +
                                  std::to_string(index));
    }
    mu += cell_means[index];
    variance += cell_variances[index] + mechanism.NoiseVariance();
  }
  const double sd = std::sqrt(variance);
  return {mu, mu + target.CountOnes(), sd, sd};
}

// Informed attacker: the residual at each positive cell is pure noise
// (plus one for members).
inline GaussianPair InformedOneThresholdModel(int n_obs,
                                              const MechanismSpec& mechanism) {
  const double sd = std::sqrt(n_obs * mechanism.NoiseVariance());
  return {0.0, static_cast<double>(n_obs), sd, sd};
}

// Per-cell false positive / false negative rates of thresholding a positive
// observation at `offset`: non-member cells are noise centred at 0, member
// cells noise centred at 1.
inline ErrorPair PerCellErrorRates(const MechanismSpec& mechanism,
                                   double offset = 0.5) {
  return {1 - MechanismCdf(mechanism, 0.0, offset),
          MechanismCdf(mechanism, 1.0, offset)};
}

inline BinomialPair AnalyticTwoThresholdModel(int n_obs, double alpha_prime,
                                              double beta_prime) {
  if (!(alpha_prime >= 0 && alpha_prime <= 1 && beta_prime >= 0 &&
        beta_prime <= 1)) {
    throw std::invalid_argument("per-cell rates must lie in [0, 1]");
  }
  return BinomialPair::Homogeneous(n_obs, alpha_prime, 1 - beta_prime);
}

// Moment-matched Gaussian of a (Poisson-)binomial pair.
inline GaussianPair CltApprox(const BinomialPair& pair) {
  auto moments = [](std::span<const double> ps) {
    double mean = 0, var = 0;
    for (double p : ps) {
      mean += p;
      var += p * (1 - p);
    }
    return std::pair{mean, std::sqrt(var)};
  };
  const auto [m0, s0] = moments(pair.p_nonmember);
  const auto [m1, s1] = moments(pair.p_member);
  return {m0, m1, s0, s1};
}

namespace internal {

// P(X >= t) for N(mu, sd^2); a point mass when sd == 0.
inline double GaussTailAtLeast(double t, double mu, double sd) {
  if (sd == 0) return mu >= t ? 1.0 : 0.0;
  return NormalCdf((mu - t) / sd);
}

inline double GaussianPairAccuracy(const GaussianPair& g, double t) {
  return 0.5 * GaussTailAtLeast(t, g.mu_member, g.sd_member) +
         0.5 * (1 - GaussTailAtLeast(t, g.mu_nonmember, g.sd_nonmember));
}

}  // namespace internal

inline ThresholdAccuracy ModelAccuracy(const GaussianPair& g) {
  std::vector<double> candidates = {0.5 * (g.mu_member + g.mu_nonmember),
                                    g.mu_member, g.mu_nonmember};
  const double s0 = g.sd_nonmember, s1 = g.sd_member;
  if (s0 > 0 && s1 > 0 && s0 != s1) {
    // Equal-density points of the two normals.
    const double a = 1 / (2 * s1 * s1) - 1 / (2 * s0 * s0);
    const double b = g.mu_nonmember / (s0 * s0) - g.mu_member / (s1 * s1);
    const double c = g.mu_member * g.mu_member / (2 * s1 * s1) -
                     g.mu_nonmember * g.mu_nonmember / (2 * s0 * s0) +
                     std::log(s1 / s0);
    const double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      candidates.push_back((-b + std::sqrt(disc)) / (2 * a));
      candidates.push_back((-b - std::sqrt(disc)) / (2 * a));
    }
  }
  ThresholdAccuracy best{std::numeric_limits<double>::infinity(), 0.5};
  for (double t : candidates) {
    const double acc = internal::GaussianPairAccuracy(g, t);
    if (acc > best.accuracy) best = {t, acc};
  }
  return best;
}

// Exhaustive scan over integer thresholds 0..n+1 with exact tail sums.
inline ThresholdAccuracy ModelAccuracy(const BinomialPair& pair) {
  if (pair.p_member.size() != pair.p_nonmember.size()) {
    throw std::invalid_argument("binomial pair: size mismatch");
  }
  const std::vector<double> member = CountPmf(pair.p_member);
  const std::vector<double> nonmember = CountPmf(pair.p_nonmember);
  const int n = pair.trials();
  // tail_member = Q(s >= t), below_nonmember = P(s < t)
  double tail_member = 1;
  double below_nonmember = 0;
  ThresholdAccuracy best{0, 0.5 * tail_member + 0.5 * below_nonmember};
  for (int t = 1; t <= n + 1; ++t) {
    tail_member -= member[t - 1];
    below_nonmember += nonmember[t - 1];
    const double acc = 0.5 * tail_member + 0.5 * below_nonmember;
    if (acc > best.accuracy + 1e-15) best = {static_cast<double>(t), acc};
  }
  best.accuracy = std::clamp(best.accuracy, 0.0, 1.0);
  return best;
}

inline ThresholdAccuracy ModelAccuracy(const EmpiricalPair& pair) {
  std::vector<double> candidates = pair.member.knots_x();
  candidates.insert(candidates.end(), pair.nonmember.knots_x().begin(),
                    pair.nonmember.knots_x().end());
  ThresholdAccuracy best{std::numeric_limits<double>::infinity(), 0.5};
  for (double t : candidates) {
    const double acc =
        0.5 * (1 - pair.member.Cdf(t)) + 0.5 * pair.nonmember.Cdf(t);
    if (acc > best.accuracy) best = {t, acc};
  }
  return best;
}

inline ThresholdAccuracy ModelAccuracy(const ScoreModel& model) {
  return std::visit([](const auto& m) { return ModelAccuracy(m); }, model);
}

inline void to_json(nlohmann::json& j, const GaussianPair& g) {
  j = nlohmann::json{{"kind", "gaussian_pair"},
                     {"mu_nonmember", g.mu_nonmember},
                     {"mu_member", g.mu_member},
                     {"sd_nonmember", g.sd_nonmember},
                     {"sd_member", g.sd_member}};
}

inline void to_json(nlohmann::json& j, const BinomialPair& b) {
  j = nlohmann::json{{"kind", "binomial_pair"},
                     {"n", b.trials()},
                     {"p_nonmember", b.p_nonmember},
                     {"p_member", b.p_member}};
}

inline void to_json(nlohmann::json& j, const EmpiricalPair& e) {
  j = nlohmann::json{{"kind", "empirical_pair"},
                     {"nonmember_cdf", e.nonmember},
                     {"member_cdf", e.member}};
}

inline nlohmann::json ScoreModelToJson(const ScoreModel& model) {
  nlohmann::json j;
  std::visit([&](const auto& m) { to_json(j, m); }, model);
  return j;
}

}  // namespace dpmia

#endif  // DPMIA_SCORE_MODEL_HPP_
