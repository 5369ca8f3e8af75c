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

// One-hidden-layer sigmoid MLP used as a membership meta-classifier.
//
//   h_j = sigmoid(sum_i W1[i][j] x_i + W1[n_in][j])
//   f(x) = sigmoid(sum_j w2[j] h_j + w2[n_hidden])
//
// hidden_weights is (n_in + 1) x n_hidden row-major, the last row holding
// the hidden biases; output_weights has n_hidden + 1 entries, the last being
// the output bias.

#ifndef DPMIA_MLP_HPP_
#define DPMIA_MLP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/rng.hpp"

namespace dpmia {

inline double Sigmoid(double x) {
  if (x >= 0) return 1 / (1 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1 + e);
}

// log(1 + e^x)
inline double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct MlpModel {
  int n_in = 0;
  int n_hidden = 0;
  std::vector<double> hidden_weights;
  std::vector<double> output_weights;

  static MlpModel Zeros(int n_in, int n_hidden) {
    if (n_in < 0 || n_hidden < 1) {
      throw std::invalid_argument("MLP needs n_in >= 0 and n_hidden >= 1");
    }
    MlpModel m;
    m.n_in = n_in;
    m.n_hidden = n_hidden;
    m.hidden_weights.assign(static_cast<std::size_t>(n_in + 1) * n_hidden, 0);
    m.output_weights.assign(static_cast<std::size_t>(n_hidden) + 1, 0);
    return m;
  }

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for both layers.
  static MlpModel RandomInit(int n_in, int n_hidden, std::uint64_t seed) {
    MlpModel m = Zeros(n_in, n_hidden);
    Rng rng(seed);
    const double r1 = 1 / std::sqrt(std::max(1, n_in));
    for (double& w : m.hidden_weights) w = (2 * rng.Uniform() - 1) * r1;
    const double r2 = 1 / std::sqrt(n_hidden);
    for (double& w : m.output_weights) w = (2 * rng.Uniform() - 1) * r2;
    return m;
  }

  double& W1(int i, int j) {
    return hidden_weights[static_cast<std::size_t>(i) * n_hidden + j];
  }
  double W1(int i, int j) const {
    return hidden_weights[static_cast<std::size_t>(i) * n_hidden + j];
  }
  double HiddenBias(int j) const { return W1(n_in, j); }
  double OutputBias() const { return output_weights[n_hidden]; }

  std::size_t ParameterCount() const {
    return hidden_weights.size() + output_weights.size();
  }

  void Validate() const {
    if (n_in < 0 || n_hidden < 1 ||
        hidden_weights.size() !=
            static_cast<std::size_t>(n_in + 1) * n_hidden ||
        output_weights.size() != static_cast<std::size_t>(n_hidden) + 1) {
      throw std::invalid_argument("MLP dimensions are inconsistent");
    }
    auto finite = [](double w) { return std::isfinite(w); };
    if (!std::all_of(hidden_weights.begin(), hidden_weights.end(), finite) ||
        !std::all_of(output_weights.begin(), output_weights.end(), finite)) {
      throw std::invalid_argument("MLP has non-finite weights");
    }
  }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Output pre-activation (log-odds of membership).
inline double MlpLogit(const MlpModel& model, std::span<const double> x,
                       std::span<double> hidden_out = {}) {
  if (x.size() != static_cast<std::size_t>(model.n_in)) {
    throw std::invalid_argument("MLP expects " + std::to_string(model.n_in) +
                                " inputs, got " + std::to_string(x.size()));
  }
  const int h = model.n_hidden;
  std::vector<double> local;
  std::span<double> hidden = hidden_out;
  if (hidden.size() != static_cast<std::size_t>(h)) {
    local.assign(h, 0);
    hidden = local;
  }
  const double* w = model.hidden_weights.data();
  const double* bias = w + static_cast<std::size_t>(model.n_in) * h;
  std::copy(bias, bias + h, hidden.begin());
  for (int i = 0; i < model.n_in; ++i) {
    const double xi = x[i];
    const double* row = w + static_cast<std::size_t>(i) * h;
    for (int j = 0; j < h; ++j) hidden[j] += xi * row[j];
  }
  double z = model.output_weights[h];
  for (int j = 0; j < h; ++j) {
    hidden[j] = Sigmoid(hidden[j]);
    z += model.output_weights[j] * hidden[j];
  }
  return z;
}

inline double MlpForward(const MlpModel& model, std::span<const double> x) {
  return Sigmoid(MlpLogit(model, x));
}

// Dense row-major feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> Row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
  std::span<double> Row(std::size_t r) { return {data.data() + r * cols, cols}; }
};

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 500;
  // 0 selects full-batch updates.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  // "gd" (plain gradient descent) or "adam".
  std::string optimizer = "gd";
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void Validate() const {
    if (!(learning_rate > 0)) {
      throw std::invalid_argument("learning_rate must be positive");
    }
    if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (optimizer != "gd" && optimizer != "adam") {
      throw std::invalid_argument("optimizer must be 'gd' or 'adam'");
    }
  }
};

struct LossAndGradient {
  double loss = 0;
  std::vector<double> gradient;  // hidden_weights then output_weights
};

namespace internal {

// Adds the gradient of the summed cross-entropy over rows [begin, end) of
// `order` into `grad`; returns the summed loss.
inline double AccumulateGradient(const MlpModel& model,
                                 const FeatureMatrix& features,
                                 std::span<const int> labels,
                                 std::span<const std::size_t> rows,
                                 std::span<double> grad) {
  const int h = model.n_hidden;
  const int n = model.n_in;
  std::vector<double> hidden(h);
  std::vector<double> delta(h);
  double* g1 = grad.data();
  double* g2 = grad.data() + model.hidden_weights.size();
  double loss = 0;
  for (std::size_t r : rows) {
    const auto x = features.Row(r);
    const double z = MlpLogit(model, x, hidden);
    const double y = labels[r];
    loss += Softplus(z) - y * z;
    const double dz = Sigmoid(z) - y;
    for (int j = 0; j < h; ++j) {
      g2[j] += dz * hidden[j];
      delta[j] = dz * model.output_weights[j] * hidden[j] * (1 - hidden[j]);
    }
    g2[h] += dz;
    for (int i = 0; i < n; ++i) {
      const double xi = x[i];
      double* row = g1 + static_cast<std::size_t>(i) * h;
      for (int j = 0; j < h; ++j) row[j] += xi * delta[j];
    }
    double* brow = g1 + static_cast<std::size_t>(n) * h;
    for (int j = 0; j < h; ++j) brow[j] += delta[j];
  }
  return loss;
}

inline void CheckTrainingData(const MlpModel& model,
                              const FeatureMatrix& features,
                              std::span<const int> labels) {
  if (features.cols != static_cast<std::size_t>(model.n_in)) {
    throw std::invalid_argument("feature width does not match the model");
  }
  if (labels.size() != features.rows) {
    throw std::invalid_argument("labels and features differ in length");
  }
}

}  // namespace internal

// Mean binary cross-entropy and its gradient over all rows.
inline LossAndGradient MlpLossAndGradient(const MlpModel& model,
                                          const FeatureMatrix& features,
                                          std::span<const int> labels) {
  internal::CheckTrainingData(model, features, labels);
  LossAndGradient out;
  out.gradient.assign(model.ParameterCount(), 0);
  std::vector<std::size_t> rows(features.rows);
  std::iota(rows.begin(), rows.end(), 0);
  out.loss = internal::AccumulateGradient(model, features, labels, rows,
                                          out.gradient);
  const double scale = features.rows ? 1.0 / features.rows : 0.0;
  out.loss *= scale;
  for (double& g : out.gradient) g *= scale;
  return out;
}

inline double MlpLoss(const MlpModel& model, const FeatureMatrix& features,
                      std::span<const int> labels) {
  internal::CheckTrainingData(model, features, labels);
  double loss = 0;
  for (std::size_t r = 0; r < features.rows; ++r) {
    const double z = MlpLogit(model, features.Row(r));
    loss += Softplus(z) - labels[r] * z;
  }
  return features.rows ? loss / features.rows : 0.0;
}

struct TrainResult {
  MlpModel model;
  // Mean training loss over each epoch's batches.
  std::vector<double> epoch_loss;
};

// Minimises binary cross-entropy. Mini-batches (when batch_size > 0) are
// drawn from a per-epoch shuffle seeded by cfg.seed.
inline TrainResult MlpTrain(MlpModel model, const FeatureMatrix& features,
                            std::span<const int> labels,
                            const TrainConfig& cfg) {
  cfg.Validate();
  model.Validate();
  internal::CheckTrainingData(model, features, labels);
  TrainResult result{std::move(model), {}};
  if (cfg.epochs == 0 || features.rows == 0) return result;
  MlpModel& m = result.model;

  const std::size_t n_params = m.ParameterCount();
  const std::size_t n_hidden_params = m.hidden_weights.size();
  std::vector<double> grad(n_params);
  std::vector<double> first(n_params, 0), second(n_params, 0);
  std::vector<std::size_t> order(features.rows);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch =
      cfg.batch_size == 0 ? features.rows
                          : std::min(cfg.batch_size, features.rows);
  const bool adam = cfg.optimizer == "adam";
  std::int64_t step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch < features.rows) {
      Rng rng = Rng::Stream(cfg.seed, static_cast<std::uint64_t>(epoch));
      rng.Shuffle(std::span<std::size_t>(order));
    }
    double epoch_loss = 0;
    for (std::size_t start = 0; start < features.rows; start += batch) {
      const std::size_t end = std::min(start + batch, features.rows);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss = internal::AccumulateGradient(
          m, features, labels,
          std::span<const std::size_t>(order.data() + start, end - start),
          grad);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("MLP training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch) + " (learning rate " +
                                 std::to_string(cfg.learning_rate) + ")");
      }
      epoch_loss += loss;
      const double scale = 1.0 / static_cast<double>(end - start);
      ++step;
      const double c1 = adam ? 1 - std::pow(cfg.adam_beta1, step) : 1;
      const double c2 = adam ? 1 - std::pow(cfg.adam_beta2, step) : 1;
      for (std::size_t p = 0; p < n_params; ++p) {
        const double g = grad[p] * scale;
        double update = g;
        if (adam) {
          first[p] = cfg.adam_beta1 * first[p] + (1 - cfg.adam_beta1) * g;
          second[p] = cfg.adam_beta2 * second[p] + (1 - cfg.adam_beta2) * g * g;
          update = (first[p] / c1) /
                   (std::sqrt(second[p] / c2) + cfg.adam_epsilon);
        }
        double& w = p < n_hidden_params ? m.hidden_weights[p]
                                        : m.output_weights[p - n_hidden_params];
        w -= cfg.learning_rate * update;
      }
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(features.rows));
  }
  return result;
}

// Single hidden node computing sigmoid(a (sum x - T)), output
// sigmoid(b h - b/2): crosses 1/2 exactly where sum x crosses T.
inline MlpModel EncodeOneThreshold(int n_in, double threshold, double a,
                                   double b) {
  if (!(a > 0 && b > 0)) throw std::invalid_argument("a and b must be > 0");
  MlpModel m = MlpModel::Zeros(n_in, 1);
  for (int i = 0; i < n_in; ++i) m.W1(i, 0) = a;
  m.W1(n_in, 0) = -a * threshold;
  m.output_weights[0] = b;
  m.output_weights[1] = -b / 2;
  return m;
}

// One hidden node per input computing sigmoid(a (x_i - T_i)); the output
// thresholds the soft count at T - 1/2, so it fires iff at least T inputs
// clear their own thresholds (for integer T).
inline MlpModel EncodeTwoThreshold(int n_in,
                                   std::span<const double> cell_thresholds,
                                   double threshold, double a, double b) {
  if (!(a > 0 && b > 0)) throw std::invalid_argument("a and b must be > 0");
  if (cell_thresholds.size() != static_cast<std::size_t>(n_in)) {
    throw std::invalid_argument("need one per-cell threshold per input");
  }
  if (n_in < 1) throw std::invalid_argument("two-threshold encoding needs n_in >= 1");
  MlpModel m = MlpModel::Zeros(n_in, n_in);
  for (int i = 0; i < n_in; ++i) {
    m.W1(i, i) = a;
    m.W1(n_in, i) = -a * cell_thresholds[i];
    m.output_weights[i] = b;
  }
  m.output_weights[n_in] = -b * (threshold - 0.5);
  return m;
}

struct WeightReport {
  // Population std / |mean| of the non-bias first-layer weights.
  double first_layer_cv = 0;
  // mean |diagonal| / mean |off-diagonal|; only for square first layers.
  // +inf when every off-diagonal weight is zero.
  std::optional<double> diagonal_dominance;
  // Mean |w| off the diagonal, square first layer only.
  std::optional<double> off_diagonal_mean;
  double hidden_bias_mean = 0;
  double hidden_bias_min = 0;
  double hidden_bias_max = 0;
  double output_bias = 0;
  // Fraction of hidden units whose bias has the opposite sign to their
  // diagonal weight (square layers only).
  std::optional<double> opposite_sign_fraction;
};

inline WeightReport MakeWeightReport(const MlpModel& model) {
  model.Validate();
  WeightReport r;
  const int n = model.n_in, h = model.n_hidden;
  const std::size_t count = static_cast<std::size_t>(n) * h;
  if (count > 0) {
    double sum = 0;
    for (std::size_t p = 0; p < count; ++p) sum += model.hidden_weights[p];
    const double mean = sum / count;
    double ss = 0;
    for (std::size_t p = 0; p < count; ++p) {
      ss += (model.hidden_weights[p] - mean) * (model.hidden_weights[p] - mean);
    }
    const double sd = std::sqrt(ss / count);
    if (sd == 0) {
      r.first_layer_cv = 0;
    } else {
      r.first_layer_cv = mean == 0 ? std::numeric_limits<double>::infinity()
                                   : sd / std::abs(mean);
    }
  }
  if (n == h && n > 0) {
    double diag = 0, off = 0;
    int opposite = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < h; ++j) {
        (i == j ? diag : off) += std::abs(model.W1(i, j));
      }
      if (model.W1(i, i) * model.HiddenBias(i) < 0) ++opposite;
    }
    diag /= n;
    const double off_mean = n > 1 ? off / (static_cast<double>(n) * (n - 1)) : 0;
    r.off_diagonal_mean = off_mean;
    r.diagonal_dominance = off_mean == 0
                               ? std::numeric_limits<double>::infinity()
                               : diag / off_mean;
    r.opposite_sign_fraction = static_cast<double>(opposite) / n;
  }
  r.hidden_bias_min = std::numeric_limits<double>::infinity();
  r.hidden_bias_max = -std::numeric_limits<double>::infinity();
  double bias_sum = 0;
  for (int j = 0; j < h; ++j) {
    const double bj = model.HiddenBias(j);
    bias_sum += bj;
    r.hidden_bias_min = std::min(r.hidden_bias_min, bj);
    r.hidden_bias_max = std::max(r.hidden_bias_max, bj);
  }
  r.hidden_bias_mean = bias_sum / h;
  r.output_bias = model.OutputBias();
  return r;
}

namespace internal {

inline nlohmann::json FiniteOrString(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace internal

inline void to_json(nlohmann::json& j, const WeightReport& r) {
  j = nlohmann::json{
      {"first_layer_cv", internal::FiniteOrString(r.first_layer_cv)},
      {"bias_summary",
       {{"hidden_bias_mean", r.hidden_bias_mean},
        {"hidden_bias_min", r.hidden_bias_min},
        {"hidden_bias_max", r.hidden_bias_max},
        {"output_bias", r.output_bias}}}};
  if (r.diagonal_dominance) {
    j["diagonal_dominance"] = internal::FiniteOrString(*r.diagonal_dominance);
    j["off_diagonal_mean"] = *r.off_diagonal_mean;
  }
  if (r.opposite_sign_fraction) {
    j["opposite_sign_fraction"] = *r.opposite_sign_fraction;
  }
}

inline void to_json(nlohmann::json& j, const MlpModel& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i <= m.n_in; ++i) {
    rows.push_back(std::vector<double>(
        m.hidden_weights.begin() + static_cast<std::ptrdiff_t>(i) * m.n_hidden,
        m.hidden_weights.begin() +
            static_cast<std::ptrdiff_t>(i + 1) * m.n_hidden));
  }
  j = nlohmann::json{{"n_in", m.n_in},
                     {"n_hidden", m.n_hidden},
                     {"activation", "sigmoid"},
                     {"hidden_weights", rows},
                     {"output_weights", m.output_weights}};
}

inline void from_json(const nlohmann::json& j, MlpModel& m) {
  const int n_in = j.at("n_in").get<int>();
  const int n_hidden = j.at("n_hidden").get<int>();
  MlpModel out = MlpModel::Zeros(n_in, n_hidden);
  const auto& rows = j.at("hidden_weights");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n_in) + 1) {
    throw std::invalid_argument("hidden_weights must have n_in + 1 rows");
  }
  for (int i = 0; i <= n_in; ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    if (row.size() != static_cast<std::size_t>(n_hidden)) {
      throw std::invalid_argument("hidden_weights row " + std::to_string(i) +
                                  " must have n_hidden entries");
    }
    std::copy(row.begin(), row.end(),
              out.hidden_weights.begin() +
                  static_cast<std::ptrdiff_t>(i) * n_hidden);
  }
  out.output_weights = j.at("output_weights").get<std::vector<double>>();
  out.Validate();
  m = std::move(out);
}

enum class EncodingKind { kOneThreshold, kTwoThreshold };

struct ApproximationRow {
  double a = 0;
  double b = 0;
  double mean_abs_error = 0;
  double disagreement_rate = 0;
};

struct ApproximationSweepSpec {
  EncodingKind kind = EncodingKind::kOneThreshold;
  int n_in = 2;
  double threshold = 1;
  std::vector<double> cell_thresholds;  // two-threshold only
  std::vector<double> a_grid;
  std::vector<double> b_grid;
  std::size_t sample_count = 10000;
  std::uint64_t seed = 0;
  // Inputs closer than this to a decision boundary are redrawn.
  double boundary_margin = 0;
};

namespace internal {

// Encodings without the positivity check so that a = b = 0 can be swept.
inline MlpModel EncodeForSweep(const ApproximationSweepSpec& s, double a,
                               double b) {
  if (s.kind == EncodingKind::kOneThreshold) {
    MlpModel m = MlpModel::Zeros(s.n_in, 1);
    for (int i = 0; i < s.n_in; ++i) m.W1(i, 0) = a;
    m.W1(s.n_in, 0) = -a * s.threshold;
    m.output_weights = {b, -b / 2};
    return m;
  }
  MlpModel m = MlpModel::Zeros(s.n_in, s.n_in);
  for (int i = 0; i < s.n_in; ++i) {
    m.W1(i, i) = a;
    m.W1(s.n_in, i) = -a * s.cell_thresholds[i];
    m.output_weights[i] = b;
  }
  m.output_weights[s.n_in] = -b * (s.threshold - 0.5);
  return m;
}

}  // namespace internal

// Step rule that the encodings approximate.
inline int StepRule(const ApproximationSweepSpec& s, std::span<const double> x) {
  if (s.kind == EncodingKind::kOneThreshold) {
    return std::accumulate(x.begin(), x.end(), 0.0) >= s.threshold ? 1 : 0;
  }
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= s.cell_thresholds[i]) ++count;
  }
  return count >= s.threshold ? 1 : 0;
}

// Random inputs shared by every grid point: one-threshold coordinates are
// uniform on [T/n - w, T/n + w] with w = max(1, |T/n|); two-threshold
// coordinates uniform on [T_i - 1, T_i + 1].
inline FeatureMatrix SweepInputs(const ApproximationSweepSpec& s) {
  if (s.n_in < 1) throw std::invalid_argument("sweep needs n_in >= 1");
  if (s.kind == EncodingKind::kTwoThreshold &&
      s.cell_thresholds.size() != static_cast<std::size_t>(s.n_in)) {
    throw std::invalid_argument("need one per-cell threshold per input");
  }
  FeatureMatrix inputs{s.sample_count, static_cast<std::size_t>(s.n_in), {}};
  inputs.data.resize(inputs.rows * inputs.cols);
  Rng rng(s.seed);
  const double centre = s.threshold / s.n_in;
  const double width = std::max(1.0, std::abs(centre));
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    auto x = inputs.Row(r);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) {
        throw std::invalid_argument("boundary margin leaves no admissible inputs");
      }
      bool ok = true;
      if (s.kind == EncodingKind::kOneThreshold) {
        double sum = 0;
        for (int i = 0; i < s.n_in; ++i) {
          x[i] = centre + (2 * rng.Uniform() - 1) * width;
          sum += x[i];
        }
        ok = std::abs(sum - s.threshold) >= s.boundary_margin;
      } else {
        for (int i = 0; i < s.n_in; ++i) {
          x[i] = s.cell_thresholds[i] + (2 * rng.Uniform() - 1);
          if (std::abs(x[i] - s.cell_thresholds[i]) < s.boundary_margin) {
            ok = false;
          }
        }
      }
      if (ok) break;
    }
  }
  return inputs;
}

inline std::vector<ApproximationRow> ApproximationErrorSweep(
    const ApproximationSweepSpec& s) {
  if (s.a_grid.empty() || s.b_grid.empty()) {
    throw std::invalid_argument("sweep grids must be non-empty");
  }
  const FeatureMatrix inputs = SweepInputs(s);
  std::vector<int> truth(inputs.rows);
  for (std::size_t r = 0; r < inputs.rows; ++r) truth[r] = StepRule(s, inputs.Row(r));
  std::vector<ApproximationRow> rows;
  for (double a : s.a_grid) {
    for (double b : s.b_grid) {
      const MlpModel m = internal::EncodeForSweep(s, a, b);
      double abs_err = 0;
      std::size_t disagree = 0;
      for (std::size_t r = 0; r < inputs.rows; ++r) {
        const double out = MlpForward(m, inputs.Row(r));
        abs_err += std::abs(out - truth[r]);
        if ((out >= 0.5 ? 1 : 0) != truth[r]) ++disagree;
      }
      const double n = static_cast<double>(inputs.rows);
      rows.push_back({a, b, abs_err / n, static_cast<double>(disagree) / n});
    }
  }
  return rows;
}

}  // namespace dpmia

#endif  // DPMIA_MLP_HPP_
