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

#include "dpmia/config.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace dpmia {
namespace {

using nlohmann::json;

json Minimal() {
  return json::parse(R"({
    "seed": 7,
    "threads": 2,
    "data": {"synthetic": {"sites": 2, "epochs": 3, "traces": 40, "rate": 0.3}},
    "mechanism": {"family": "laplace", "epsilon": 0.5},
    "game": {"n_traces": 10, "positive_observations": 4, "trials": 100}
  })");
}

std::string ErrorOf(const json& j) {
  try {
    ParseExperimentConfig(j);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, ParsesMinimal) {
  const ExperimentConfig cfg = ParseExperimentConfig(Minimal());
  ASSERT_TRUE(cfg.seed.has_value());
  EXPECT_EQ(*cfg.seed, 7u);
  EXPECT_EQ(cfg.threads, 2);
  EXPECT_EQ(cfg.game.threads, 2);
  const auto& s = std::get<SyntheticDataSpec>(cfg.data);
  EXPECT_EQ(s.rates.size(), 6u);
  EXPECT_EQ(s.rates[5], 0.3);
  EXPECT_EQ(cfg.game.mechanism, MechanismSpec::Laplace(0.5, 1));
  EXPECT_EQ(cfg.game.n_traces, 10u);
  EXPECT_EQ(cfg.game.positive_observations, 4);
  EXPECT_EQ(cfg.game.trials, 100u);
  EXPECT_EQ(cfg.out_dir, "out");
}

TEST(ConfigTest, UnknownKeysNamed) {
  json j = Minimal();
  j["colour"] = 1;
  EXPECT_NE(ErrorOf(j).find("'colour'"), std::string::npos);
  j = Minimal();
  j["game"]["trails"] = 3;
  EXPECT_NE(ErrorOf(j).find("game: unknown key 'trails'"), std::string::npos);
  j = Minimal();
  j["data"]["synthetic"]["density"] = 0.1;
  EXPECT_NE(ErrorOf(j).find("data.synthetic"), std::string::npos);
  j = Minimal();
  j["mechanism"]["sigma"] = 1;
  EXPECT_NE(ErrorOf(j).find("mechanism"), std::string::npos);
  j = Minimal();
  j["game"]["meta"] = {{"layers", 2}};
  EXPECT_NE(ErrorOf(j).find("game.meta"), std::string::npos);
}

TEST(ConfigTest, RatesShapeErrorNamesField) {
  json j = Minimal();
  j["data"]["synthetic"].erase("rate");
  j["data"]["synthetic"]["rates"] = {{0.1, 0.2, 0.3}, {0.1, 0.2}};
  EXPECT_NE(ErrorOf(j).find("data.synthetic.rates"), std::string::npos);
  j["data"]["synthetic"]["rates"] = {{0.1, 0.2, 0.3}};
  EXPECT_NE(ErrorOf(j).find("data.synthetic.rates"), std::string::npos);
  j["data"]["synthetic"]["rates"] = {{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  EXPECT_EQ(std::get<SyntheticDataSpec>(cfg.data).rates,
            (std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}));
  j["data"]["synthetic"]["rates"][1][2] = 1.5;
  EXPECT_NE(ErrorOf(j), "");
  j["data"]["synthetic"]["rate"] = 0.2;
  EXPECT_NE(ErrorOf(j).find("exactly one"), std::string::npos);
}

TEST(ConfigTest, GameFields) {
  json j = Minimal();
  j["game"]["positive_observations"] = "natural";
  j["game"]["attacks"] = {"reference", "meta_classifier"};
  j["game"]["attacker"] = "auxiliary";
  j["game"]["threshold_rule"] = "fixed_error";
  j["game"]["fixed_error_alpha"] = 0.01;
  j["game"]["meta"] = {{"hidden", 100}, {"optimizer", "adam"}, {"batch_size", 64}};
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  EXPECT_FALSE(cfg.game.positive_observations.has_value());
  EXPECT_EQ(cfg.game.attacks,
            (std::vector<AttackKind>{AttackKind::kReference,
                                     AttackKind::kMetaClassifier}));
  EXPECT_EQ(cfg.game.attacker, AttackerKind::kAuxiliary);
  EXPECT_EQ(cfg.game.threshold_rule, ThresholdRule::kFixedError);
  EXPECT_EQ(cfg.game.meta.hidden, 100);
  EXPECT_EQ(cfg.game.meta.train.optimizer, "adam");
  EXPECT_EQ(cfg.game.meta.train.batch_size, 64u);

  j["game"]["positive_observations"] = "many";
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["game"]["trials"] = 0;
  EXPECT_NE(ErrorOf(j), "");
  j = Minimal();
  j["game"]["trials"] = "lots";
  EXPECT_NE(ErrorOf(j).find("game.trials"), std::string::npos);
  j = Minimal();
  j["game"]["meta"] = {{"optimizer", "rmsprop"}};
  EXPECT_NE(ErrorOf(j), "");
}

TEST(ConfigTest, GaussianDeltaDefault) {
  json j = Minimal();
  j["mechanism"] = {{"family", "gaussian"}, {"epsilon", 0.5}};
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  EXPECT_DOUBLE_EQ(cfg.game.mechanism.delta, 1.0 / 20);
  EXPECT_DOUBLE_EQ(cfg.game.mechanism.noise_scale,
                   std::sqrt(2 * std::log(1.25 * 20)) / 0.5);
}

TEST(ConfigTest, SeedRouting) {
  json j = Minimal();
  const ExperimentConfig a = ParseExperimentConfig(j);
  const ExperimentConfig b = ParseExperimentConfig(j);
  EXPECT_EQ(a.game.seed, b.game.seed);
  EXPECT_EQ(a.game.target_seed, b.game.target_seed);
  EXPECT_NE(a.game.seed, a.game.target_seed);
  EXPECT_NE(a.DataSeed(), a.game.seed);

  j["seed"] = 8;
  const ExperimentConfig c = ParseExperimentConfig(j);
  EXPECT_NE(c.game.seed, a.game.seed);
  EXPECT_NE(c.game.target_seed, a.game.target_seed);

  j["game"]["target_seed"] = 123;
  ExperimentConfig d = ParseExperimentConfig(j);
  EXPECT_EQ(d.game.target_seed, 123u);
  d.ApplySeed(9);
  EXPECT_EQ(d.game.target_seed, 123u);
  EXPECT_EQ(*d.seed, 9u);
}

TEST(ConfigTest, ThreadsDefaultToCores) {
  json j = Minimal();
  j.erase("threads");
  const int cores = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  EXPECT_EQ(ParseExperimentConfig(j).threads, cores);
  j["threads"] = -1;
  EXPECT_NE(ErrorOf(j), "");
}

TEST(ConfigTest, SweepAndOutput) {
  json j = Minimal();
  j["sweep"] = {{"k_grid", {0, 10, 20}}, {"m_grid", {2, 100}}};
  j["output"] = {{"dir", "results"}};
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  EXPECT_EQ(cfg.k_grid, (std::vector<int>{0, 10, 20}));
  EXPECT_EQ(cfg.m_grid, (std::vector<std::size_t>{2, 100}));
  EXPECT_EQ(cfg.out_dir, "results");
  j["sweep"]["k_grid"] = {-1};
  EXPECT_NE(ErrorOf(j), "");
  j["sweep"] = {{"n_grid", {1}}};
  EXPECT_NE(ErrorOf(j).find("sweep"), std::string::npos);
}

TEST(ConfigTest, DataSectionRules) {
  json j = Minimal();
  j["data"]["csv"] = {{"path", "x.csv"}, {"sites", 2}, {"epochs", 3}};
  EXPECT_NE(ErrorOf(j).find("exactly one"), std::string::npos);
  j["data"].erase("synthetic");
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  EXPECT_EQ(std::get<CsvDataSpec>(cfg.data).path, "x.csv");
  j.erase("data");
  EXPECT_NE(ErrorOf(j).find("config.data"), std::string::npos);
  j = Minimal();
  j.erase("mechanism");
  EXPECT_NE(ErrorOf(j).find("config.mechanism"), std::string::npos);
}

class ConfigFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("dpmia_config_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& body) {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path.string();
  }

  std::filesystem::path dir_;
};

TEST_F(ConfigFileTest, LoadAndGenerate) {
  const std::string path = Write("exp.json", Minimal().dump());
  const ExperimentConfig cfg = LoadExperimentConfig(path);
  const TraceDataset a = LoadData(cfg);
  const TraceDataset b = LoadData(cfg);
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(a.sites(), 2);
  EXPECT_EQ(a.epochs(), 3);
  EXPECT_EQ(a.traces(), b.traces());
}

TEST_F(ConfigFileTest, LoadCsv) {
  const std::string csv = Write("t.csv",
                                "id,c0,c1,c2,c3,c4,c5\n"
                                "a,1,0,0,0,0,1\n"
                                "b,0,0,0,0,1,0\n");
  json j = Minimal();
  j["data"] = {{"csv", {{"path", csv}, {"sites", 2}, {"epochs", 3}}}};
  const ExperimentConfig cfg = ParseExperimentConfig(j);
  const TraceDataset d = LoadData(cfg);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].CountOnes(), 2);
}

TEST_F(ConfigFileTest, Errors) {
  EXPECT_THROW(LoadExperimentConfig((dir_ / "missing.json").string()),
               std::runtime_error);
  EXPECT_THROW(LoadExperimentConfig(Write("bad.json", "{\"seed\": ")),
               std::invalid_argument);
}

}  // namespace
}  // namespace dpmia
