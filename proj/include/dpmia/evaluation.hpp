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

// Membership-inference game, attack calibration, and result tables.

#ifndef DPMIA_EVALUATION_HPP_
#define DPMIA_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/accountant.hpp"
#include "dpmia/mechanism.hpp"
#include "dpmia/mechanism_spec.hpp"
#include "dpmia/meta_classifier.hpp"
#include "dpmia/metric_attack.hpp"
#include "dpmia/metrics.hpp"
#include "dpmia/rng.hpp"
#include "dpmia/score_model.hpp"
#include "dpmia/trace.hpp"

namespace dpmia {

enum class AttackerKind { kInformed, kAuxiliary };

enum class AttackKind { kOneThreshold, kTwoThreshold, kMetaClassifier, kReference };

enum class ThresholdRule { kMaxAccuracy, kFixedError };

inline std::string ToString(AttackerKind kind) {
  return kind == AttackerKind::kInformed ? "informed" : "auxiliary";
}

inline std::string ToString(AttackKind kind) {
  switch (kind) {
    case AttackKind::kOneThreshold: return "one_threshold";
    case AttackKind::kTwoThreshold: return "two_threshold";
    case AttackKind::kMetaClassifier: return "meta_classifier";
    case AttackKind::kReference: return "reference";
  }
  return "unknown";
}

inline std::string ToString(ThresholdRule rule) {
  return rule == ThresholdRule::kMaxAccuracy ? "max_accuracy" : "fixed_error";
}

inline AttackerKind ParseAttackerKind(const std::string& name) {
  if (name == "informed") return AttackerKind::kInformed;
  if (name == "auxiliary") return AttackerKind::kAuxiliary;
  throw std::invalid_argument("unknown attacker '" + name +
                              "' (expected informed or auxiliary)");
}

inline AttackKind ParseAttackKind(const std::string& name) {
  for (AttackKind k : {AttackKind::kOneThreshold, AttackKind::kTwoThreshold,
                       AttackKind::kMetaClassifier, AttackKind::kReference}) {
    if (ToString(k) == name) return k;
  }
  throw std::invalid_argument(
      "unknown attack '" + name +
      "' (expected one_threshold, two_threshold, meta_classifier or reference)");
}

inline ThresholdRule ParseThresholdRule(const std::string& name) {
  if (name == "max_accuracy") return ThresholdRule::kMaxAccuracy;
  if (name == "fixed_error") return ThresholdRule::kFixedError;
  throw std::invalid_argument("unknown threshold rule '" + name + "'");
}

struct GameConfig {
  AttackerKind attacker = AttackerKind::kInformed;
  MechanismSpec mechanism = MechanismSpec::Laplace(0.5, 1);
  // Traces in each released aggregate, not counting the target.
  std::size_t n_traces = 100;
  // Build a synthetic target with exactly this many ones; unset draws a
  // real trace from the data with target_seed.
  std::optional<int> positive_observations;
  std::size_t trials = 10000;
  std::vector<AttackKind> attacks = {AttackKind::kOneThreshold,
                                     AttackKind::kTwoThreshold};
  std::size_t shadow_count = 2000;
  std::size_t reference_count = 100;
  ThresholdRule threshold_rule = ThresholdRule::kMaxAccuracy;
  // Target false-positive rate for ThresholdRule::kFixedError.
  double fixed_error_alpha = 0.1;
  MetaClassifierConfig meta;
  // Fixes the target (s_z).
  std::uint64_t target_seed = 1;
  // Master seed for clipping, splitting, shadows, training and the per-trial
  // dataset draws (s_D).
  std::uint64_t seed = 2;
  int threads = 1;

  void Validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (n_traces < 1) throw std::invalid_argument("n_traces must be >= 1");
    if (attacks.empty()) throw std::invalid_argument("no attacks configured");
    if (shadow_count < 2) {
      throw std::invalid_argument("shadow_count must be >= 2");
    }
    if (positive_observations && *positive_observations < 0) {
      throw std::invalid_argument("positive_observations must be >= 0");
    }
    if (threshold_rule == ThresholdRule::kFixedError &&
        !(fixed_error_alpha > 0 && fixed_error_alpha < 1)) {
      throw std::invalid_argument("fixed_error_alpha must lie in (0, 1)");
    }
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    meta.train.Validate();
  }
};

struct TrialRecord {
  int member = 0;
  double score = 0;
  int decision = 0;
  bool success = false;
};

struct AttackResult {
  AttackKind attack = AttackKind::kOneThreshold;
  // Final decision threshold on the score (count threshold for the
  // two-threshold attack, 0 on the log-odds for the meta-classifier).
  double threshold = 0;
  std::vector<TrialRecord> records;
  ConfusionCounts counts;
  double accuracy = 0;
  ProportionInterval ci;
  double auc = 0.5;
  RocCurve roc;
  std::optional<double> analytic_accuracy;
  // Meta-classifier only: the trained model and its loss curve.
  std::optional<MlpModel> model;
  std::vector<double> epoch_loss;
};

struct GameResult {
  int positive_observations = 0;
  double expected_bound = 0.5;
  std::vector<AttackResult> attacks;

  const AttackResult& Get(AttackKind kind) const {
    for (const AttackResult& r : attacks) {
      if (r.attack == kind) return r;
    }
    throw std::out_of_range("attack " + ToString(kind) + " was not run");
  }
};

// Balanced-accuracy bookkeeping from the per-trial records.
inline AttackResult SummarizeTrials(AttackKind attack,
                                    std::vector<TrialRecord> records) {
  AttackResult out;
  out.attack = attack;
  std::vector<int> labels, decisions;
  std::vector<double> scores;
  for (const TrialRecord& r : records) {
    labels.push_back(r.member);
    decisions.push_back(r.decision);
    scores.push_back(r.score);
  }
  out.counts = CountDecisions(labels, decisions);
  out.accuracy = out.counts.Accuracy();
  out.ci = NormalInterval(out.accuracy, out.counts.total());
  if (out.counts.members() > 0 && out.counts.nonmembers() > 0) {
    out.roc = RocFromScores(scores, labels);
    out.auc = out.roc.auc;
  }
  out.records = std::move(records);
  return out;
}

// Target with exactly k ones at the highest-frequency cells of `data`
// (ties to the lower flat index), never exceeding clip_bound ones in an
// epoch column.
inline TraceMatrix SyntheticTarget(const TraceDataset& data, int k,
                                   int clip_bound) {
  const int sites = data.sites(), epochs = data.epochs();
  if (k > static_cast<std::int64_t>(clip_bound) * epochs || k > sites * epochs) {
    throw std::invalid_argument(
        "cannot place " + std::to_string(k) + " positive observations with " +
        std::to_string(epochs) + " epochs and clip bound " +
        std::to_string(clip_bound));
  }
  const std::vector<double> freq = data.CellFrequencies();
  std::vector<int> order(freq.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return freq[a] > freq[b]; });
  std::vector<int> column(epochs, 0);
  std::vector<int> ones;
  for (int index : order) {
    if (static_cast<int>(ones.size()) == k) break;
    const int e = index % epochs;
    if (column[e] >= clip_bound) continue;
    ++column[e];
    ones.push_back(index);
  }
  return TraceMatrix::FromSupport(sites, epochs, ones);
}

namespace internal {

enum SeedStream : std::uint64_t {
  kClipStream = 1,
  kSplitStream = 2,
  kShadowStream = 3,
  kTrainStream = 4,
  kTrialStream = 5,
};

struct Calibrated {
  AttackKind kind;
  double threshold = 0;
  PerCellThresholds cells;
  std::optional<MetaClassifier> meta;
};

inline double ScoreResidual(const Calibrated& attack,
                            std::span<const double> residual,
                            const TraceMatrix& target,
                            const TraceDataset* references) {
  switch (attack.kind) {
    case AttackKind::kOneThreshold:
      return ScoreOneResidual(residual, target);
    case AttackKind::kTwoThreshold:
      return ScoreTwoResidual(residual, target, attack.cells);
    case AttackKind::kMetaClassifier:
      return attack.meta->Score(residual, target);
    case AttackKind::kReference:
      return ReferenceAttackScoreResidual(residual, target, *references);
  }
  return 0;
}

inline double CalibrateScalar(const ShadowSet& shadow, const Scorer& scorer,
                              const GameConfig& cfg) {
  return cfg.threshold_rule == ThresholdRule::kMaxAccuracy
             ? EstimateThresholdMaxAcc(shadow, scorer)
             : EstimateThresholdFixedError(shadow, scorer,
                                           cfg.fixed_error_alpha);
}

template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace internal

// Analytic accuracy of an attack when a closed form exists.
inline std::optional<double> AnalyticAccuracy(AttackKind attack,
                                              const GameConfig& cfg,
                                              const TraceMatrix& target,
                                              const TraceDataset& pool) {
  const int k = target.CountOnes();
  if (k == 0) {
    if (attack == AttackKind::kOneThreshold ||
        attack == AttackKind::kTwoThreshold) {
      return 0.5;
    }
    return std::nullopt;
  }
  if (attack == AttackKind::kOneThreshold) {
    if (cfg.attacker == AttackerKind::kInformed) {
      if (cfg.mechanism.noiseless()) return 1.0;
      return ModelAccuracy(InformedOneThresholdModel(k, cfg.mechanism)).accuracy;
    }
    const CellMoments moments = AuxiliaryCellMoments(pool, cfg.n_traces);
    const GaussianPair g = AnalyticOneThresholdModel(
        moments.means, moments.variances, target, cfg.mechanism);
    if (!(g.sd_nonmember > 0)) return std::nullopt;
    return ModelAccuracy(g).accuracy;
  }
  if (attack == AttackKind::kTwoThreshold &&
      cfg.attacker == AttackerKind::kInformed) {
    const ErrorPair rates = PerCellErrorRates(cfg.mechanism);
    return ModelAccuracy(AnalyticTwoThresholdModel(k, rates.alpha, rates.beta))
        .accuracy;
  }
  return std::nullopt;
}

// Runs cfg.trials rounds of the membership game on `data`.
//
// The data are clipped, the target z is fixed (synthetic, or drawn with
// target_seed and removed), and the remaining traces are split in half into
// the challenger's pool and the attacker's auxiliary pool. Each trial draws
// a fresh D of n_traces from the challenger's pool; trial t has b = t mod 2,
// so members and non-members are balanced.
inline GameResult RunGame(const GameConfig& cfg, const TraceDataset& data) {
  cfg.Validate();
  const int clip = cfg.mechanism.clip_bound;
  const TraceDataset clipped =
      ClipDataset(data, clip, DeriveSeed(cfg.seed, internal::kClipStream));

  std::vector<TraceMatrix> rest;
  std::optional<TraceMatrix> chosen;
  if (cfg.positive_observations) {
    chosen = SyntheticTarget(clipped, *cfg.positive_observations, clip);
    rest.assign(clipped.begin(), clipped.end());
  } else {
    if (clipped.size() < 3) {
      throw std::invalid_argument("insufficient traces: need at least 3");
    }
    Rng rng(cfg.target_seed);
    const std::size_t index = rng.UniformInt(clipped.size());
    chosen = clipped[index];
    for (std::size_t i = 0; i < clipped.size(); ++i) {
      if (i != index) rest.push_back(clipped[i]);
    }
  }
  const TraceMatrix target = *chosen;
  if (rest.size() < 2) {
    throw std::invalid_argument("insufficient traces: need at least 2 besides the target");
  }
  const std::vector<double> halves = {0.5, 0.5};
  const std::vector<TraceDataset> parts =
      SplitDataset(TraceDataset(std::move(rest)), halves,
                   DeriveSeed(cfg.seed, internal::kSplitStream));
  const TraceDataset& pool = parts[0];
  const TraceDataset& aux = parts[1];
  if (pool.size() < cfg.n_traces) {
    throw std::invalid_argument(
        "insufficient traces: each aggregate needs " +
        std::to_string(cfg.n_traces) + " traces but the challenger pool has " +
        std::to_string(pool.size()));
  }

  const double theta = cfg.attacker == AttackerKind::kInformed ? 1.0 : 0.0;
  const ShadowSet shadow = GenerateShadowSet(
      aux, cfg.n_traces, theta, cfg.shadow_count, target, cfg.mechanism,
      DeriveSeed(cfg.seed, internal::kShadowStream));

  std::optional<TraceDataset> references;
  std::vector<internal::Calibrated> calibrated;
  for (AttackKind kind : cfg.attacks) {
    internal::Calibrated c{kind, 0, {}, std::nullopt};
    switch (kind) {
      case AttackKind::kOneThreshold:
        c.threshold = internal::CalibrateScalar(shadow, OneThresholdScorer(target), cfg);
        break;
      case AttackKind::kTwoThreshold: {
        if (cfg.threshold_rule == ThresholdRule::kMaxAccuracy) {
          c.cells = PerCellThresholdsMaxAcc(shadow);
        } else {
          const std::vector<double> alphas(target.support().size(),
                                           cfg.fixed_error_alpha);
          c.cells = PerCellThresholdsFixedError(shadow, alphas);
        }
        c.threshold = internal::CalibrateScalar(
            shadow, TwoThresholdScorer(target, c.cells), cfg);
        break;
      }
      case AttackKind::kMetaClassifier: {
        MetaClassifierConfig meta = cfg.meta;
        meta.train.seed = DeriveSeed(cfg.seed, internal::kTrainStream);
        c.meta = TrainMetaClassifier(shadow, meta);
        c.threshold = 0;
        break;
      }
      case AttackKind::kReference: {
        if (!references) {
          const std::size_t count = std::min(cfg.reference_count, aux.size());
          if (count == 0) throw std::invalid_argument("no reference traces");
          references = TraceDataset(std::vector<TraceMatrix>(
              aux.begin(), aux.begin() + static_cast<std::ptrdiff_t>(count)));
        }
        c.threshold = internal::CalibrateScalar(
            shadow, ReferenceScorer(target, *references), cfg);
        break;
      }
    }
    calibrated.push_back(std::move(c));
  }

  std::vector<std::vector<TrialRecord>> records(
      calibrated.size(), std::vector<TrialRecord>(cfg.trials));
  const std::uint64_t trial_master = DeriveSeed(cfg.seed, internal::kTrialStream);
  const TraceDataset* refs = references ? &*references : nullptr;
  internal::ParallelFor(cfg.trials, cfg.threads, [&](std::size_t begin,
                                                     std::size_t end) {
    std::vector<std::size_t> order(pool.size());
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = Rng::Stream(trial_master, t);
      const int member = static_cast<int>(t % 2);
      std::iota(order.begin(), order.end(), 0);
      rng.PartialShuffle(std::span<std::size_t>(order), cfg.n_traces);
      AggregateMatrix agg = AggregateSubset(
          pool, std::span<const std::size_t>(order.data(), cfg.n_traces));
      const AggregateMatrix background =
          cfg.attacker == AttackerKind::kInformed
              ? agg
              : AggregateMatrix(agg.sites(), agg.epochs());
      if (member) agg.Add(target);
      const NoisyAggregate release = Perturb(agg, cfg.mechanism, rng);
      const std::vector<double> residual = Residual(release, background);
      for (std::size_t a = 0; a < calibrated.size(); ++a) {
        TrialRecord& r = records[a][t];
        r.member = member;
        r.score = internal::ScoreResidual(calibrated[a], residual, target, refs);
        r.decision = Decide(r.score, calibrated[a].threshold);
        r.success = r.decision == r.member;
      }
    }
  });

  GameResult result;
  result.positive_observations = target.CountOnes();
  result.expected_bound =
      result.positive_observations == 0
          ? 0.5
          : ExpectedAttackAccuracy(cfg.mechanism, result.positive_observations);
  for (std::size_t a = 0; a < calibrated.size(); ++a) {
    AttackResult r = SummarizeTrials(calibrated[a].kind, std::move(records[a]));
    r.threshold = calibrated[a].threshold;
    r.analytic_accuracy = AnalyticAccuracy(calibrated[a].kind, cfg, target, pool);
    if (calibrated[a].meta) {
      r.model = calibrated[a].meta->model;
      r.epoch_loss = calibrated[a].meta->epoch_loss;
    }
    result.attacks.push_back(std::move(r));
  }
  return result;
}

struct ResultRow {
  int k = 0;
  std::size_t shadow_count = 0;
  AttackKind attack = AttackKind::kOneThreshold;
  AttackerKind attacker = AttackerKind::kInformed;
  std::string mechanism;
  double accuracy = 0;
  double ci_low = 0;
  double ci_high = 0;
  double auc = 0;
  std::optional<double> analytic;
  double bound = 0;
};

inline std::vector<ResultRow> ResultRows(const GameConfig& cfg,
                                         const GameResult& game) {
  std::vector<ResultRow> rows;
  for (const AttackResult& a : game.attacks) {
    rows.push_back({game.positive_observations, cfg.shadow_count, a.attack,
                    cfg.attacker, cfg.mechanism.Label(), a.accuracy, a.ci.low,
                    a.ci.high, a.auc, a.analytic_accuracy, game.expected_bound});
  }
  return rows;
}

// One game per k with a synthetic target of exactly k positive
// observations.
inline std::vector<ResultRow> SweepPositiveObservations(
    GameConfig cfg, const TraceDataset& data, std::span<const int> k_grid) {
  std::vector<ResultRow> rows;
  for (int k : k_grid) {
    cfg.positive_observations = k;
    const auto part = ResultRows(cfg, RunGame(cfg, data));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

// One game per shadow count; trials use the same seeds, so every m is
// evaluated on the same releases.
inline std::vector<ResultRow> SweepShadowCount(
    GameConfig cfg, const TraceDataset& data,
    std::span<const std::size_t> m_grid) {
  std::vector<ResultRow> rows;
  for (std::size_t m : m_grid) {
    cfg.shadow_count = m;
    const auto part = ResultRows(cfg, RunGame(cfg, data));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

struct GapRow {
  int k = 0;
  AttackKind attack = AttackKind::kOneThreshold;
  double expected_bound = 0;
  double empirical_accuracy = 0;
  double gap = 0;
};

inline std::vector<GapRow> GapReport(GameConfig cfg, const TraceDataset& data,
                                     std::span<const int> k_grid) {
  if (cfg.attacker != AttackerKind::kInformed) {
    throw std::invalid_argument("gap report needs the informed attacker");
  }
  std::vector<GapRow> rows;
  for (int k : k_grid) {
    cfg.positive_observations = k;
    const GameResult game = RunGame(cfg, data);
    for (const AttackResult& a : game.attacks) {
      rows.push_back({game.positive_observations, a.attack, game.expected_bound,
                      a.accuracy, game.expected_bound - a.accuracy});
    }
  }
  return rows;
}

namespace internal {

inline std::string Fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace internal

inline void WriteResultsCsv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "k,attack,attacker,mechanism,accuracy,ci_low,ci_high,auc,"
         "shadow_count,analytic,bound\n";
  for (const ResultRow& r : rows) {
    out << r.k << ',' << ToString(r.attack) << ',' << ToString(r.attacker)
        << ',' << r.mechanism << ',' << internal::Fixed(r.accuracy) << ','
        << internal::Fixed(r.ci_low) << ',' << internal::Fixed(r.ci_high) << ','
        << internal::Fixed(r.auc) << ',' << r.shadow_count << ','
        << (r.analytic ? internal::Fixed(*r.analytic) : "") << ','
        << internal::Fixed(r.bound) << '\n';
  }
}

inline void to_json(nlohmann::json& j, const ResultRow& r) {
  j = nlohmann::json{{"k", r.k},
                     {"attack", ToString(r.attack)},
                     {"attacker", ToString(r.attacker)},
                     {"mechanism", r.mechanism},
                     {"accuracy", r.accuracy},
                     {"ci_low", r.ci_low},
                     {"ci_high", r.ci_high},
                     {"auc", r.auc},
                     {"shadow_count", r.shadow_count},
                     {"bound", r.bound}};
  j["analytic"] = r.analytic ? nlohmann::json(*r.analytic) : nlohmann::json();
}

inline void WriteGapCsv(std::ostream& out, std::span<const GapRow> rows) {
  out << "k,attack,expected_bound,empirical_accuracy,gap\n";
  for (const GapRow& r : rows) {
    out << r.k << ',' << ToString(r.attack) << ','
        << internal::Fixed(r.expected_bound) << ','
        << internal::Fixed(r.empirical_accuracy) << ',' << internal::Fixed(r.gap)
        << '\n';
  }
}

inline void WriteRocCsv(std::ostream& out, std::span<const AttackResult> attacks) {
  out << "attack,threshold,fpr,tpr\n";
  for (const AttackResult& a : attacks) {
    for (const RocPoint& p : a.roc.points) {
      out << ToString(a.attack) << ','
          << (std::isinf(p.threshold) ? std::string("inf")
                                      : internal::Fixed(p.threshold, 9))
          << ',' << internal::Fixed(p.fpr, 9) << ',' << internal::Fixed(p.tpr, 9)
          << '\n';
    }
  }
}

inline void WriteTrialsCsv(std::ostream& out, const GameResult& game) {
  out << "attack,trial,member,score,decision,success\n";
  for (const AttackResult& a : game.attacks) {
    for (std::size_t t = 0; t < a.records.size(); ++t) {
      const TrialRecord& r = a.records[t];
      out << ToString(a.attack) << ',' << t << ',' << r.member << ','
          << internal::Fixed(r.score, 9) << ',' << r.decision << ','
          << (r.success ? 1 : 0) << '\n';
    }
  }
}

}  // namespace dpmia

#endif  // DPMIA_EVALUATION_HPP_
