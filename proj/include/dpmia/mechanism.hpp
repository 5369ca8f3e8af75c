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

// Additive-noise mechanisms over aggregate matrices.

#ifndef DPMIA_MECHANISM_HPP_
#define DPMIA_MECHANISM_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dpmia/mechanism_spec.hpp"
#include "dpmia/rng.hpp"
#include "dpmia/stats.hpp"
#include "dpmia/trace.hpp"

namespace dpmia {

// l_p sensitivity of the per-cell count query after clipping to
// `clip_bound` ones per epoch.
inline double Sensitivity(int clip_bound, int p) {
  if (clip_bound < 1) throw std::invalid_argument("clip bound must be >= 1");
  if (p != 1 && p != 2) throw std::invalid_argument("p must be 1 or 2");
  return static_cast<double>(clip_bound);
}

inline double SampleNoise(const MechanismSpec& mechanism, Rng& rng) {
  return mechanism.family == NoiseFamily::kLaplace
             ? rng.Laplace(mechanism.noise_scale)
             : rng.Gaussian(mechanism.noise_scale);
}

inline NoisyAggregate Perturb(const AggregateMatrix& aggregate,
                              const MechanismSpec& mechanism, Rng& rng) {
  std::vector<double> values(aggregate.counts().size());
  const auto counts = aggregate.counts();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<double>(counts[i]) + SampleNoise(mechanism, rng);
  }
  return NoisyAggregate(aggregate.sites(), aggregate.epochs(),
                        std::move(values), mechanism);
}

inline NoisyAggregate Perturb(const AggregateMatrix& aggregate,
                              const MechanismSpec& mechanism,
                              std::uint64_t seed) {
  Rng rng(seed);
  return Perturb(aggregate, mechanism, rng);
}

// CDF at x of the mechanism's noise distribution centred at `shift`.
inline double MechanismCdf(const MechanismSpec& mechanism, double shift,
                           double x) {
  const double z = x - shift;
  if (mechanism.noiseless()) return z >= 0 ? 1.0 : 0.0;
  if (mechanism.family == NoiseFamily::kLaplace) {
    const double b = mechanism.noise_scale;
    return z < 0 ? 0.5 * std::exp(z / b) : 1 - 0.5 * std::exp(-z / b);
  }
  return NormalCdf(z / mechanism.noise_scale);
}

}  // namespace dpmia

#endif  // DPMIA_MECHANISM_HPP_
