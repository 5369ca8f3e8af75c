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

#include "dpmia/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpmia/mechanism_spec.hpp"
#include "dpmia/metrics.hpp"
#include "dpmia/trace.hpp"
#include "gtest/gtest.h"

namespace dpmia {
namespace {

const MechanismSpec kNoiseless =
    MechanismSpec::FromNoiseScale(NoiseFamily::kLaplace, 0, 1);

TraceDataset Data(int sites = 4, int epochs = 64, std::size_t n = 200,
                  std::uint64_t seed = 11) {
  std::vector<double> rates(static_cast<std::size_t>(sites) * epochs);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    rates[i] = 0.05 + 0.2 * static_cast<double>((i * 37) % 101) / 100.0;
  }
  return GenerateSyntheticTraces(sites, epochs, rates, n, seed);
}

GameConfig Small() {
  GameConfig cfg;
  cfg.n_traces = 20;
  cfg.trials = 4000;
  cfg.shadow_count = 2000;
  return cfg;
}

TEST(EnumTest, RoundTrip) {
  for (AttackKind k : {AttackKind::kOneThreshold, AttackKind::kTwoThreshold,
                       AttackKind::kMetaClassifier, AttackKind::kReference}) {
    EXPECT_EQ(ParseAttackKind(ToString(k)), k);
  }
  EXPECT_EQ(ParseAttackerKind("auxiliary"), AttackerKind::kAuxiliary);
  EXPECT_EQ(ParseThresholdRule(ToString(ThresholdRule::kFixedError)),
            ThresholdRule::kFixedError);
  EXPECT_THROW(ParseAttackKind("three_threshold"), std::invalid_argument);
  EXPECT_THROW(ParseAttackerKind("partial"), std::invalid_argument);
  EXPECT_THROW(ParseThresholdRule("median"), std::invalid_argument);
}

TEST(GameConfigTest, Validation) {
  GameConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.trials = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = GameConfig();
  cfg.shadow_count = 1;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = GameConfig();
  cfg.attacks.clear();
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  cfg = GameConfig();
  cfg.positive_observations = -1;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
}

TEST(SyntheticTargetTest, HighestFrequencyCellsWithColumnCap) {
  // Cell frequencies over three traces of a 2x3 grid.
  const TraceDataset data({TraceMatrix(2, 3, {1, 1, 0, 1, 0, 0}),
                           TraceMatrix(2, 3, {1, 1, 0, 0, 0, 1}),
                           TraceMatrix(2, 3, {1, 0, 0, 1, 0, 1})});
  // Frequencies: cell0 3, cell3 2, cell1 2, cell5 2, cells 2 and 4 zero.
  EXPECT_EQ(SyntheticTarget(data, 2, 2).support(), (std::vector<int>{0, 1}));
  // With one per column, cell 3 (epoch 0) is skipped after cell 0.
  EXPECT_EQ(SyntheticTarget(data, 3, 1).support(), (std::vector<int>{0, 1, 5}));
  EXPECT_EQ(SyntheticTarget(data, 0, 1).CountOnes(), 0);
  EXPECT_THROW(SyntheticTarget(data, 4, 1), std::invalid_argument);
  EXPECT_EQ(SyntheticTarget(data, 6, 2).CountOnes(), 6);
}

TEST(RunGameTest, NoiselessInformedIsPerfect) {
  GameConfig cfg = Small();
  cfg.mechanism = kNoiseless;
  cfg.trials = 500;
  cfg.shadow_count = 20;
  const GameResult g = RunGame(cfg, Data());
  EXPECT_GT(g.positive_observations, 0);
  EXPECT_DOUBLE_EQ(g.expected_bound, 1.0);
  for (const AttackResult& a : g.attacks) {
    EXPECT_DOUBLE_EQ(a.accuracy, 1.0) << ToString(a.attack);
    EXPECT_DOUBLE_EQ(a.auc, 1.0);
  }
}

TEST(RunGameTest, HugeNoiseIsCoinFlip) {
  GameConfig cfg = Small();
  cfg.mechanism = MechanismSpec::FromNoiseScale(NoiseFamily::kLaplace, 1e9, 1);
  cfg.trials = 10000;
  cfg.positive_observations = 30;
  const GameResult g = RunGame(cfg, Data());
  for (const AttackResult& a : g.attacks) {
    EXPECT_NEAR(a.accuracy, 0.5, 0.015) << ToString(a.attack);
  }
}

TEST(RunGameTest, TwoThresholdMatchesBinomialModel) {
  GameConfig cfg = Small();
  cfg.trials = 100000;
  cfg.shadow_count = 10000;
  cfg.positive_observations = 60;
  cfg.attacks = {AttackKind::kTwoThreshold};
  const GameResult g = RunGame(cfg, Data(4, 128));
  ASSERT_EQ(g.positive_observations, 60);
  // Oracle: per-cell error a = 0.5 exp(-0.25) for Laplace eps 0.5, then the
  // best count threshold between Binomial(60, 1 - a) and Binomial(60, a).
  const double a = 0.5 * std::exp(-0.25);
  auto pmf = [](int n, int x, double p) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                    std::lgamma(n - x + 1.0) + x * std::log(p) +
                    (n - x) * std::log1p(-p));
  };
  double best_accuracy = 0;
  for (int t = 0; t <= 61; ++t) {
    double member_hit = 0, nonmember_miss = 0;
    for (int x = 0; x <= 60; ++x) {
      if (x >= t) member_hit += pmf(60, x, 1 - a);
      if (x < t) nonmember_miss += pmf(60, x, a);
    }
    best_accuracy = std::max(best_accuracy, 0.5 * member_hit + 0.5 * nonmember_miss);
  }
  EXPECT_NEAR(g.attacks[0].accuracy, best_accuracy, 0.01);
  ASSERT_TRUE(g.attacks[0].analytic_accuracy.has_value());
  EXPECT_NEAR(*g.attacks[0].analytic_accuracy, best_accuracy, 1e-12);
}

TEST(RunGameTest, RecordsAreConsistent) {
  GameConfig cfg = Small();
  cfg.trials = 1000;
  cfg.positive_observations = 20;
  cfg.attacks = {AttackKind::kOneThreshold, AttackKind::kTwoThreshold,
                 AttackKind::kReference};
  const GameResult g = RunGame(cfg, Data());
  for (const AttackResult& a : g.attacks) {
    ASSERT_EQ(a.records.size(), 1000u);
    int members = 0, successes = 0;
    for (std::size_t t = 0; t < a.records.size(); ++t) {
      const TrialRecord& r = a.records[t];
      EXPECT_EQ(r.member, static_cast<int>(t % 2));
      EXPECT_EQ(r.success, r.decision == r.member);
      EXPECT_EQ(r.decision, r.score >= a.threshold ? 1 : 0);
      members += r.member;
      successes += r.success;
    }
    EXPECT_EQ(members, 500);
    EXPECT_EQ(a.counts.successes(), successes);
    EXPECT_EQ(a.accuracy, static_cast<double>(successes) / 1000);
    EXPECT_EQ(a.counts.total(), 1000);
    EXPECT_EQ(a.counts.true_positive + a.counts.false_negative, 500);
    // Error rates reproduce the success rate when the classes are balanced.
    if (a.counts.members() == a.counts.nonmembers()) {
      EXPECT_NEAR(AccuracyFromErrors(a.counts.FalsePositiveRate(),
                                     a.counts.FalseNegativeRate()),
                  a.accuracy, 1e-15);
    }
    EXPECT_LE(a.ci.low, a.accuracy);
    EXPECT_GE(a.ci.high, a.accuracy);
  }
}

TEST(RunGameTest, DeterministicAcrossThreadCounts) {
  GameConfig cfg = Small();
  cfg.trials = 999;
  cfg.positive_observations = 25;
  const TraceDataset data = Data();
  const GameResult a = RunGame(cfg, data);
  cfg.threads = 3;
  const GameResult b = RunGame(cfg, data);
  ASSERT_EQ(a.attacks.size(), b.attacks.size());
  for (std::size_t i = 0; i < a.attacks.size(); ++i) {
    EXPECT_EQ(a.attacks[i].threshold, b.attacks[i].threshold);
    for (std::size_t t = 0; t < a.attacks[i].records.size(); ++t) {
      EXPECT_EQ(a.attacks[i].records[t].score, b.attacks[i].records[t].score);
    }
  }
  std::ostringstream csv_a, csv_b;
  WriteTrialsCsv(csv_a, a);
  WriteTrialsCsv(csv_b, b);
  EXPECT_EQ(csv_a.str(), csv_b.str());

  cfg.seed = 99;
  const GameResult c = RunGame(cfg, data);
  std::ostringstream csv_c;
  WriteTrialsCsv(csv_c, c);
  EXPECT_NE(csv_a.str(), csv_c.str());
}

TEST(RunGameTest, NaturalTargetIsRemovedFromData) {
  GameConfig cfg = Small();
  cfg.trials = 200;
  cfg.shadow_count = 50;
  cfg.mechanism = kNoiseless;
  cfg.target_seed = 5;
  const GameResult a = RunGame(cfg, Data());
  EXPECT_GT(a.positive_observations, 0);
  cfg.target_seed = 6;
  const GameResult b = RunGame(cfg, Data());
  EXPECT_GT(b.positive_observations, 0);
  EXPECT_DOUBLE_EQ(a.attacks[0].accuracy, 1.0);
}

TEST(RunGameTest, InsufficientTraces) {
  GameConfig cfg = Small();
  cfg.n_traces = 150;
  EXPECT_THROW(RunGame(cfg, Data()), std::invalid_argument);
  cfg.n_traces = 1;
  EXPECT_THROW(RunGame(cfg, Data(2, 2, 2)), std::invalid_argument);
  cfg.positive_observations = 100;
  EXPECT_THROW(RunGame(cfg, Data(2, 8, 20)), std::invalid_argument);
}

TEST(RunGameTest, ZeroObservationsIsCoinFlip) {
  GameConfig cfg = Small();
  cfg.trials = 1000;
  cfg.shadow_count = 100;
  cfg.positive_observations = 0;
  cfg.attacks = {AttackKind::kOneThreshold, AttackKind::kTwoThreshold,
                 AttackKind::kReference, AttackKind::kMetaClassifier};
  cfg.meta.train.epochs = 5;
  const GameResult g = RunGame(cfg, Data());
  EXPECT_DOUBLE_EQ(g.expected_bound, 0.5);
  for (const AttackResult& a : g.attacks) {
    if (a.attack == AttackKind::kReference) {
      // Still scores against the references, but the scores carry no
      // membership signal.
      EXPECT_NEAR(a.accuracy, 0.5, 0.05);
    } else {
      EXPECT_DOUBLE_EQ(a.accuracy, 0.5) << ToString(a.attack);
    }
  }
}

TEST(RunGameTest, MetaClassifierExportsModel) {
  GameConfig cfg = Small();
  cfg.trials = 2000;
  cfg.positive_observations = 10;
  cfg.attacks = {AttackKind::kMetaClassifier};
  cfg.meta.train.epochs = 100;
  const GameResult g = RunGame(cfg, Data());
  const AttackResult& a = g.attacks[0];
  ASSERT_TRUE(a.model.has_value());
  EXPECT_EQ(a.model->n_in, 10);
  EXPECT_EQ(a.model->n_hidden, 10);
  EXPECT_EQ(a.epoch_loss.size(), 100u);
  EXPECT_GT(a.accuracy, 0.6);
  EXPECT_FALSE(a.analytic_accuracy.has_value());
}

TEST(RunGameTest, FixedErrorRuleHoldsFalsePositives) {
  GameConfig cfg = Small();
  cfg.trials = 20000;
  cfg.shadow_count = 10000;
  cfg.positive_observations = 30;
  cfg.threshold_rule = ThresholdRule::kFixedError;
  cfg.fixed_error_alpha = 0.05;
  cfg.attacks = {AttackKind::kOneThreshold};
  const GameResult g = RunGame(cfg, Data());
  EXPECT_NEAR(g.attacks[0].counts.FalsePositiveRate(), 0.05, 0.015);
}

TEST(RunGameTest, InformedBeatsAuxiliary) {
  GameConfig cfg = Small();
  cfg.trials = 20000;
  cfg.positive_observations = 40;
  const TraceDataset data = Data();
  const GameResult informed = RunGame(cfg, data);
  cfg.attacker = AttackerKind::kAuxiliary;
  const GameResult aux = RunGame(cfg, data);
  for (std::size_t i = 0; i < informed.attacks.size(); ++i) {
    EXPECT_GE(informed.attacks[i].accuracy, aux.attacks[i].accuracy - 0.02);
  }
  // The auxiliary one-threshold attack has a Gaussian model built from the
  // pool's cell moments.
  ASSERT_TRUE(aux.attacks[0].analytic_accuracy.has_value());
  EXPECT_NEAR(aux.attacks[0].accuracy, *aux.attacks[0].analytic_accuracy, 0.02);
}

TEST(SweepTest, PositiveObservations) {
  GameConfig cfg = Small();
  cfg.trials = 10000;
  const std::vector<int> ks = {0, 20, 40, 60};
  const auto rows = SweepPositiveObservations(cfg, Data(4, 128), ks);
  ASSERT_EQ(rows.size(), 8u);
  std::map<AttackKind, double> last;
  for (const ResultRow& r : rows) {
    if (r.k == 0) {
      EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
    }
    if (last.count(r.attack)) {
      EXPECT_GE(r.accuracy, last[r.attack] - 0.01);
    }
    last[r.attack] = r.accuracy;
    EXPECT_EQ(r.mechanism, cfg.mechanism.Label());
  }
  EXPECT_EQ(rows[6].k, 60);
  EXPECT_EQ(rows[6].attack, AttackKind::kOneThreshold);
  EXPECT_GE(*rows[7].analytic, *rows[6].analytic);
  EXPECT_GE(rows[7].accuracy, rows[6].accuracy);
}

TEST(SweepTest, ShadowCount) {
  GameConfig cfg = Small();
  cfg.trials = 10000;
  cfg.positive_observations = 30;
  const std::vector<std::size_t> ms = {2, 500, 2000, 8000};
  const auto rows = SweepShadowCount(cfg, Data(), ms);
  ASSERT_EQ(rows.size(), 8u);
  // m = 2 runs; from 500 on the metric attacks barely move.
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].shadow_count, ms[i / 2]);
    EXPECT_NEAR(rows[i].accuracy, rows[i % 2 + 6].accuracy, 0.02);
  }
}

TEST(GapReportTest, BoundDominatesAndOrdering) {
  GameConfig cfg = Small();
  cfg.trials = 20000;
  cfg.shadow_count = 5000;
  const std::vector<int> ks = {10, 60};
  const auto rows = GapReport(cfg, Data(4, 128), ks);
  ASSERT_EQ(rows.size(), 4u);
  for (const GapRow& r : rows) {
    EXPECT_GE(r.gap, 0);
    EXPECT_DOUBLE_EQ(r.gap, r.expected_bound - r.empirical_accuracy);
  }
  EXPECT_GT(rows[2].gap, rows[3].gap);

  cfg.attacker = AttackerKind::kAuxiliary;
  EXPECT_THROW(GapReport(cfg, Data(), ks), std::invalid_argument);
}

TEST(GapReportTest, NoiselessHasNoGap) {
  GameConfig cfg = Small();
  cfg.mechanism = kNoiseless;
  cfg.trials = 200;
  cfg.shadow_count = 20;
  const std::vector<int> ks = {5};
  for (const GapRow& r : GapReport(cfg, Data(), ks)) {
    EXPECT_DOUBLE_EQ(r.expected_bound, 1.0);
    EXPECT_DOUBLE_EQ(r.empirical_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.gap, 0.0);
  }
}

TEST(WritersTest, ResultsCsvAndJson) {
  ResultRow r;
  r.k = 3;
  r.shadow_count = 10;
  r.attack = AttackKind::kTwoThreshold;
  r.mechanism = "laplace";
  r.accuracy = 0.75;
  r.ci_low = 0.7;
  r.ci_high = 0.8;
  r.auc = 0.8125;
  r.bound = 0.9;
  std::vector<ResultRow> rows = {r};
  std::ostringstream csv;
  WriteResultsCsv(csv, rows);
  EXPECT_EQ(csv.str(),
            "k,attack,attacker,mechanism,accuracy,ci_low,ci_high,auc,"
            "shadow_count,analytic,bound\n"
            "3,two_threshold,informed,laplace,0.750000,0.700000,0.800000,"
            "0.812500,10,,0.900000\n");
  const nlohmann::json j = r;
  EXPECT_TRUE(j["analytic"].is_null());
  EXPECT_EQ(j["attack"], "two_threshold");
}

TEST(WritersTest, RocCsvWritesInfinity) {
  AttackResult a;
  a.attack = AttackKind::kReference;
  const std::vector<double> s = {2, 1};
  const std::vector<int> l = {1, 0};
  a.roc = RocFromScores(s, l);
  std::vector<AttackResult> attacks = {a};
  std::ostringstream csv;
  WriteRocCsv(csv, attacks);
  EXPECT_EQ(csv.str(),
            "attack,threshold,fpr,tpr\n"
            "reference,inf,0.000000000,0.000000000\n"
            "reference,2.000000000,0.000000000,1.000000000\n"
            "reference,1.000000000,1.000000000,1.000000000\n");
}

}  // namespace
}  // namespace dpmia
