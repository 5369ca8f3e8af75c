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

// JSON experiment configuration.
//
//   {
//     "seed": 7,                          optional; the CLI may supply it
//     "threads": 1,
//     "data": {"synthetic": {"sites", "epochs", "traces", "rate" | "rates"}}
//           | {"csv": {"path", "sites", "epochs"}},
//     "mechanism": {"family", "epsilon", "delta", "clip_bound", "noise_scale"},
//     "game": {"attacker", "n_traces", "positive_observations", "trials",
//              "attacks", "shadow_count", "reference_count",
//              "threshold_rule", "fixed_error_alpha", "target_seed",
//              "meta": {"hidden", "learning_rate", "epochs", "batch_size",
//                       "optimizer"}},
//     "sweep": {"k_grid": [...], "m_grid": [...]},
//     "output": {"dir": "out"}
//   }
//
// Every object rejects keys it does not know.

#ifndef DPMIA_CONFIG_HPP_
#define DPMIA_CONFIG_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpmia/evaluation.hpp"
#include "dpmia/mechanism_spec.hpp"
#include "dpmia/rng.hpp"
#include "dpmia/trace.hpp"
#include "dpmia/trace_csv.hpp"

namespace dpmia {

struct SyntheticDataSpec {
  int sites = 0;
  int epochs = 0;
  std::size_t traces = 0;
  std::vector<double> rates;  // row-major, sites x epochs
};

struct CsvDataSpec {
  std::string path;
  int sites = 0;
  int epochs = 0;
};

struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::variant<SyntheticDataSpec, CsvDataSpec> data;
  GameConfig game;
  bool explicit_target_seed = false;
  std::vector<int> k_grid;
  std::vector<std::size_t> m_grid;
  std::string out_dir = "out";

  // Routes the master seed into every random component.
  void ApplySeed(std::uint64_t master) {
    seed = master;
    game.seed = DeriveSeed(master, 0x67616d65);
    if (!explicit_target_seed) game.target_seed = DeriveSeed(master, 0x7a);
  }

  std::uint64_t DataSeed() const { return DeriveSeed(seed.value_or(0), 0x64); }
};

namespace internal {

inline void RejectUnknownKeys(const nlohmann::json& j, const std::string& where,
                              std::initializer_list<const char*> known) {
  if (!j.is_object()) {
    throw std::invalid_argument(where + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) {
      throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
T Field(const nlohmann::json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) {
    throw std::invalid_argument(where + "." + key + " is required");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(where + "." + key + " has the wrong type");
  }
}

template <typename T>
T FieldOr(const nlohmann::json& j, const std::string& where, const char* key,
          T fallback) {
  return j.contains(key) ? Field<T>(j, where, key) : fallback;
}

inline SyntheticDataSpec ParseSynthetic(const nlohmann::json& j) {
  const std::string where = "data.synthetic";
  RejectUnknownKeys(j, where, {"sites", "epochs", "traces", "rate", "rates"});
  SyntheticDataSpec s;
  s.sites = Field<int>(j, where, "sites");
  s.epochs = Field<int>(j, where, "epochs");
  s.traces = Field<std::size_t>(j, where, "traces");
  if (s.sites <= 0 || s.epochs <= 0) {
    throw std::invalid_argument(where + ": sites and epochs must be positive");
  }
  if (s.traces == 0) throw std::invalid_argument(where + ".traces must be >= 1");
  const std::size_t cells = static_cast<std::size_t>(s.sites) * s.epochs;
  if (j.contains("rate") == j.contains("rates")) {
    throw std::invalid_argument(where + ": give exactly one of rate or rates");
  }
  if (j.contains("rate")) {
    s.rates.assign(cells, Field<double>(j, where, "rate"));
  } else {
    const auto& r = j.at("rates");
    const std::string bad = where + ".rates: expected " +
                            std::to_string(s.sites) + " rows of " +
                            std::to_string(s.epochs) + " rates";
    if (!r.is_array() || r.size() != static_cast<std::size_t>(s.sites)) {
      throw std::invalid_argument(bad);
    }
    for (const auto& row : r) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(s.epochs)) {
        throw std::invalid_argument(bad);
      }
      for (const auto& v : row) {
        if (!v.is_number()) throw std::invalid_argument(bad);
        s.rates.push_back(v.get<double>());
      }
    }
  }
  for (double p : s.rates) {
    if (!(p >= 0 && p <= 1)) {
      throw std::invalid_argument(where + ": rates must lie in [0, 1]");
    }
  }
  return s;
}

inline CsvDataSpec ParseCsv(const nlohmann::json& j) {
  const std::string where = "data.csv";
  RejectUnknownKeys(j, where, {"path", "sites", "epochs"});
  CsvDataSpec s;
  s.path = Field<std::string>(j, where, "path");
  s.sites = Field<int>(j, where, "sites");
  s.epochs = Field<int>(j, where, "epochs");
  if (s.sites <= 0 || s.epochs <= 0) {
    throw std::invalid_argument(where + ": sites and epochs must be positive");
  }
  return s;
}

inline void ParseMeta(const nlohmann::json& j, MetaClassifierConfig& meta) {
  const std::string where = "game.meta";
  RejectUnknownKeys(j, where,
                    {"hidden", "learning_rate", "epochs", "batch_size",
                     "optimizer"});
  meta.hidden = FieldOr<int>(j, where, "hidden", meta.hidden);
  meta.train.learning_rate =
      FieldOr<double>(j, where, "learning_rate", meta.train.learning_rate);
  meta.train.epochs = FieldOr<int>(j, where, "epochs", meta.train.epochs);
  meta.train.batch_size =
      FieldOr<std::size_t>(j, where, "batch_size", meta.train.batch_size);
  meta.train.optimizer =
      FieldOr<std::string>(j, where, "optimizer", meta.train.optimizer);
  if (meta.hidden < 0) throw std::invalid_argument(where + ".hidden must be >= 0");
}

inline void ParseGame(const nlohmann::json& j, ExperimentConfig& cfg) {
  const std::string where = "game";
  RejectUnknownKeys(j, where,
                    {"attacker", "n_traces", "positive_observations", "trials",
                     "attacks", "shadow_count", "reference_count",
                     "threshold_rule", "fixed_error_alpha", "target_seed",
                     "meta"});
  GameConfig& g = cfg.game;
  if (j.contains("attacker")) {
    g.attacker = ParseAttackerKind(Field<std::string>(j, where, "attacker"));
  }
  g.n_traces = FieldOr<std::size_t>(j, where, "n_traces", g.n_traces);
  if (j.contains("positive_observations")) {
    const auto& v = j.at("positive_observations");
    if (v.is_string() && v.get<std::string>() == "natural") {
      g.positive_observations.reset();
    } else if (v.is_number_integer()) {
      g.positive_observations = v.get<int>();
    } else {
      throw std::invalid_argument(
          "game.positive_observations must be an integer or \"natural\"");
    }
  }
  g.trials = FieldOr<std::size_t>(j, where, "trials", g.trials);
  if (j.contains("attacks")) {
    g.attacks.clear();
    for (const auto& name : Field<std::vector<std::string>>(j, where, "attacks")) {
      g.attacks.push_back(ParseAttackKind(name));
    }
  }
  g.shadow_count = FieldOr<std::size_t>(j, where, "shadow_count", g.shadow_count);
  g.reference_count =
      FieldOr<std::size_t>(j, where, "reference_count", g.reference_count);
  if (j.contains("threshold_rule")) {
    g.threshold_rule =
        ParseThresholdRule(Field<std::string>(j, where, "threshold_rule"));
  }
  g.fixed_error_alpha =
      FieldOr<double>(j, where, "fixed_error_alpha", g.fixed_error_alpha);
  if (j.contains("target_seed")) {
    g.target_seed = Field<std::uint64_t>(j, where, "target_seed");
    cfg.explicit_target_seed = true;
  }
  if (j.contains("meta")) ParseMeta(j.at("meta"), g.meta);
}

}  // namespace internal

inline ExperimentConfig ParseExperimentConfig(const nlohmann::json& j) {
  internal::RejectUnknownKeys(
      j, "config", {"seed", "threads", "data", "mechanism", "game", "sweep", "output"});
  ExperimentConfig cfg;
  if (j.contains("seed")) {
    cfg.seed = internal::Field<std::uint64_t>(j, "config", "seed");
  }
  // 0 or absent: one worker per available core.
  cfg.threads = internal::FieldOr<int>(j, "config", "threads", 0);
  if (cfg.threads < 0) throw std::invalid_argument("config.threads must be >= 0");
  if (cfg.threads == 0) {
    cfg.threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  }

  if (!j.contains("data")) throw std::invalid_argument("config.data is required");
  const auto& data = j.at("data");
  internal::RejectUnknownKeys(data, "data", {"synthetic", "csv"});
  if (data.contains("synthetic") == data.contains("csv")) {
    throw std::invalid_argument("data: give exactly one of synthetic or csv");
  }
  if (data.contains("synthetic")) {
    cfg.data = internal::ParseSynthetic(data.at("synthetic"));
  } else {
    cfg.data = internal::ParseCsv(data.at("csv"));
  }

  if (j.contains("game")) internal::ParseGame(j.at("game"), cfg);

  if (!j.contains("mechanism")) {
    throw std::invalid_argument("config.mechanism is required");
  }
  nlohmann::json mech = j.at("mechanism");
  // Gaussian default delta: 1 / (2 n) for aggregates of n traces.
  if (mech.is_object() && mech.value("family", "") == "gaussian" &&
      !mech.contains("delta")) {
    mech["delta"] = 1.0 / (2.0 * static_cast<double>(cfg.game.n_traces));
  }
  try {
    cfg.game.mechanism = mech.get<MechanismSpec>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("mechanism: ") + e.what());
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    internal::RejectUnknownKeys(s, "sweep", {"k_grid", "m_grid"});
    cfg.k_grid = internal::FieldOr<std::vector<int>>(s, "sweep", "k_grid", {});
    cfg.m_grid =
        internal::FieldOr<std::vector<std::size_t>>(s, "sweep", "m_grid", {});
    for (int k : cfg.k_grid) {
      if (k < 0) throw std::invalid_argument("sweep.k_grid entries must be >= 0");
    }
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    internal::RejectUnknownKeys(o, "output", {"dir"});
    cfg.out_dir = internal::FieldOr<std::string>(o, "output", "dir", cfg.out_dir);
  }
  cfg.game.threads = cfg.threads;
  cfg.game.Validate();
  if (cfg.seed) cfg.ApplySeed(*cfg.seed);
  return cfg;
}

inline ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return ParseExperimentConfig(j);
}

// Generates or reads the configured trace dataset.
inline TraceDataset LoadData(const ExperimentConfig& cfg) {
  if (const auto* s = std::get_if<SyntheticDataSpec>(&cfg.data)) {
    return GenerateSyntheticTraces(s->sites, s->epochs, s->rates, s->traces,
                                   cfg.DataSeed());
  }
  const auto& c = std::get<CsvDataSpec>(cfg.data);
  return IngestTracesCsv(c.path, c.sites, c.epochs);
}

}  // namespace dpmia

#endif  // DPMIA_CONFIG_HPP_
