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

// MLP meta-classifier over the target's positive observations.

#ifndef DPMIA_META_CLASSIFIER_HPP_
#define DPMIA_META_CLASSIFIER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dpmia/metric_attack.hpp"
#include "dpmia/mlp.hpp"
#include "dpmia/trace.hpp"

namespace dpmia {

// Residual values at the target's positive cells, one row per shadow.
inline FeatureMatrix ShadowFeatures(const ShadowSet& shadow) {
  const auto& support = shadow.target.support();
  FeatureMatrix out{shadow.size(), support.size(), {}};
  out.data.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < shadow.size(); ++r) {
    const auto values = shadow.aggregates[r].values();
    auto row = out.Row(r);
    for (std::size_t c = 0; c < support.size(); ++c) row[c] = values[support[c]];
  }
  return out;
}

inline std::vector<double> TargetFeatures(std::span<const double> residual,
                                          const TraceMatrix& target) {
  if (residual.size() != static_cast<std::size_t>(target.size())) {
    throw std::invalid_argument("meta-classifier: dimension mismatch");
  }
  std::vector<double> x;
  x.reserve(target.support().size());
  for (int index : target.support()) x.push_back(residual[index]);
  return x;
}

struct MetaClassifierConfig {
  // 0 uses one hidden unit per positive observation.
  int hidden = 0;
  TrainConfig train;
};

struct MetaClassifier {
  // Weights act on raw (unstandardised) features.
  MlpModel model;
  std::vector<double> epoch_loss;

  // Log-odds of membership; the decision threshold is 0.
  double Score(std::span<const double> residual, const TraceMatrix& target) const {
    return MlpLogit(model, TargetFeatures(residual, target));
  }
};

// Trains on standardised shadow features, then folds the standardisation
// into the first layer.
inline MetaClassifier TrainMetaClassifier(const ShadowSet& shadow,
                                          const MetaClassifierConfig& cfg) {
  FeatureMatrix x = ShadowFeatures(shadow);
  if (x.rows == 0) throw std::invalid_argument("meta-classifier: empty shadow set");
  const int n_in = static_cast<int>(x.cols);
  const int hidden = cfg.hidden > 0 ? cfg.hidden : std::max(1, n_in);

  std::vector<double> mean(x.cols, 0), sd(x.cols, 0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) mean[c] += row[c];
  }
  for (double& m : mean) m /= static_cast<double>(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) {
      sd[c] += (row[c] - mean[c]) * (row[c] - mean[c]);
    }
  }
  for (double& s : sd) {
    s = std::sqrt(s / static_cast<double>(x.rows));
    if (!(s > 0)) s = 1;
  }
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) row[c] = (row[c] - mean[c]) / sd[c];
  }

  TrainResult trained =
      MlpTrain(MlpModel::RandomInit(n_in, hidden, cfg.train.seed), x,
               shadow.labels, cfg.train);
  MlpModel& m = trained.model;
  for (int j = 0; j < hidden; ++j) {
    double shift = 0;
    for (int i = 0; i < n_in; ++i) {
      m.W1(i, j) /= sd[i];
      shift += m.W1(i, j) * mean[i];
    }
    m.W1(n_in, j) -= shift;
  }
  return {std::move(m), std::move(trained.epoch_loss)};
}

}  // namespace dpmia

#endif  // DPMIA_META_CLASSIFIER_HPP_
