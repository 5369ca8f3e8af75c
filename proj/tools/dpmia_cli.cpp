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

// Command-line front end for dpmia.
//
//   dpmia_cli generate --config exp.json [--out traces.csv]
//   dpmia_cli attack   --config exp.json
//   dpmia_cli sweep    --config exp.json
//   dpmia_cli train-meta --config exp.json
//   dpmia_cli bound --epsilon 0.5 [--delta 0] --k-max 200
//   dpmia_cli inspect-weights --model model.json
//   dpmia_cli encode --kind two --n-in 4 --threshold 2 --cell-threshold 0.5
//
// Common flags: --seed, --threads, --out-dir. Exit status is 0 on success,
// 2 for invalid input and 1 for other failures. Output files are written
// only after every computation has succeeded.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dpmia/dpmia.hpp"

namespace fs = std::filesystem;

namespace {

// Raised for problems the user can fix in their input.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
};

// Collects output files in memory and writes them all at the end.
class OutputSet {
 public:
  void Add(const fs::path& path, std::string body) {
    files_.emplace_back(path, std::move(body));
  }

  void Commit() const {
    std::vector<fs::path> staged;
    try {
      for (const auto& [path, body] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".partial";
        std::ofstream out(tmp, std::ios::binary);
        out << body;
        out.close();
        if (!out) throw std::runtime_error("cannot write " + path.string());
        staged.push_back(tmp);
      }
    } catch (...) {
      std::error_code ignored;
      for (const auto& tmp : staged) fs::remove(tmp, ignored);
      throw;
    }
    for (std::size_t i = 0; i < files_.size(); ++i) {
      fs::rename(staged[i], files_[i].first);
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::uint64_t FreshSeed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

dpmia::ExperimentConfig LoadConfig(const CommonFlags& flags) {
  dpmia::ExperimentConfig cfg;
  try {
    cfg = dpmia::LoadExperimentConfig(flags.config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (flags.threads) {
    if (*flags.threads < 1) throw UsageError("--threads must be >= 1");
    cfg.threads = *flags.threads;
    cfg.game.threads = cfg.threads;
  }
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  std::optional<std::uint64_t> seed = flags.seed ? flags.seed : cfg.seed;
  if (!seed) {
    seed = FreshSeed();
    std::cout << "seed=" << *seed << "\n";
  }
  cfg.ApplySeed(*seed);
  return cfg;
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int CmdGenerate(const CommonFlags& flags, const std::string& out_path) {
  const dpmia::ExperimentConfig cfg = LoadConfig(flags);
  if (!std::holds_alternative<dpmia::SyntheticDataSpec>(cfg.data)) {
    throw UsageError("generate needs a data.synthetic section");
  }
  const dpmia::TraceDataset data = dpmia::LoadData(cfg);
  std::ostringstream csv;
  dpmia::WriteTraceCsv(csv, data);
  const fs::path path =
      out_path.empty() ? fs::path(cfg.out_dir) / "traces.csv" : fs::path(out_path);
  OutputSet out;
  out.Add(path, csv.str());
  out.Commit();
  double ones = 0;
  for (const auto& t : data) ones += t.CountOnes();
  std::cout << "traces=" << data.size() << " sites=" << data.sites()
            << " epochs=" << data.epochs() << " mean_density="
            << Fixed(ones / (static_cast<double>(data.size()) * data.sites() *
                             data.epochs()),
                     6)
            << " path=" << path.string() << "\n";
  return 0;
}

void PrintGame(const dpmia::GameResult& game) {
  std::cout << "positive_observations=" << game.positive_observations
            << " bound=" << Fixed(game.expected_bound) << "\n";
  for (const auto& a : game.attacks) {
    std::cout << "attack=" << dpmia::ToString(a.attack)
              << " accuracy=" << Fixed(a.accuracy) << " auc=" << Fixed(a.auc)
              << " ci=[" << Fixed(a.ci.low) << "," << Fixed(a.ci.high) << "]";
    if (a.analytic_accuracy) std::cout << " analytic=" << Fixed(*a.analytic_accuracy);
    std::cout << "\n";
  }
}

int CmdAttack(const CommonFlags& flags, bool model_only) {
  dpmia::ExperimentConfig cfg = LoadConfig(flags);
  if (model_only) cfg.game.attacks = {dpmia::AttackKind::kMetaClassifier};
  const dpmia::TraceDataset data = dpmia::LoadData(cfg);
  const dpmia::GameResult game = dpmia::RunGame(cfg.game, data);
  const auto rows = dpmia::ResultRows(cfg.game, game);

  const fs::path dir(cfg.out_dir);
  OutputSet out;
  std::ostringstream results, roc, trials;
  dpmia::WriteResultsCsv(results, rows);
  dpmia::WriteRocCsv(roc, game.attacks);
  dpmia::WriteTrialsCsv(trials, game);
  out.Add(dir / "results.csv", results.str());
  out.Add(dir / "results.json", nlohmann::json(rows).dump(2) + "\n");
  out.Add(dir / "roc.csv", roc.str());
  out.Add(dir / "trials.csv", trials.str());
  for (const auto& a : game.attacks) {
    if (!a.model) continue;
    out.Add(dir / "meta_model.json", nlohmann::json(*a.model).dump(2) + "\n");
    nlohmann::json report = dpmia::MakeWeightReport(*a.model);
    report["epoch_loss"] = a.epoch_loss;
    out.Add(dir / "meta_weight_report.json", report.dump(2) + "\n");
  }
  out.Commit();
  PrintGame(game);
  return 0;
}

int CmdSweep(const CommonFlags& flags) {
  const dpmia::ExperimentConfig cfg = LoadConfig(flags);
  if (cfg.k_grid.empty() && cfg.m_grid.empty()) {
    throw UsageError("sweep needs sweep.k_grid or sweep.m_grid");
  }
  const dpmia::TraceDataset data = dpmia::LoadData(cfg);
  const fs::path dir(cfg.out_dir);
  OutputSet out;
  if (!cfg.k_grid.empty()) {
    const auto rows = dpmia::SweepPositiveObservations(cfg.game, data, cfg.k_grid);
    std::ostringstream csv;
    dpmia::WriteResultsCsv(csv, rows);
    out.Add(dir / "sweep_k.csv", csv.str());
    out.Add(dir / "sweep_k.json", nlohmann::json(rows).dump(2) + "\n");
    if (cfg.game.attacker == dpmia::AttackerKind::kInformed) {
      std::vector<dpmia::GapRow> gaps;
      for (const auto& r : rows) {
        gaps.push_back({r.k, r.attack, r.bound, r.accuracy, r.bound - r.accuracy});
      }
      std::ostringstream gap_csv;
      dpmia::WriteGapCsv(gap_csv, gaps);
      out.Add(dir / "gap.csv", gap_csv.str());
    }
    for (const auto& r : rows) {
      std::cout << "k=" << r.k << " attack=" << dpmia::ToString(r.attack)
                << " accuracy=" << Fixed(r.accuracy) << " auc=" << Fixed(r.auc)
                << " bound=" << Fixed(r.bound) << "\n";
    }
  }
  if (!cfg.m_grid.empty()) {
    const auto rows = dpmia::SweepShadowCount(cfg.game, data, cfg.m_grid);
    std::ostringstream csv;
    dpmia::WriteResultsCsv(csv, rows);
    out.Add(dir / "sweep_m.csv", csv.str());
    out.Add(dir / "sweep_m.json", nlohmann::json(rows).dump(2) + "\n");
    for (const auto& r : rows) {
      std::cout << "m=" << r.shadow_count << " attack=" << dpmia::ToString(r.attack)
                << " accuracy=" << Fixed(r.accuracy) << " auc=" << Fixed(r.auc)
                << "\n";
    }
  }
  out.Commit();
  return 0;
}

int CmdBound(double epsilon, double delta, int k_max,
             const std::optional<std::string>& out_dir) {
  if (!(epsilon >= 0)) throw UsageError("--epsilon must be >= 0");
  if (!(delta >= 0 && delta < 1)) throw UsageError("--delta must lie in [0, 1)");
  if (k_max < 1) throw UsageError("--k-max must be >= 1");
  std::ostringstream csv;
  csv << "k,expected_accuracy\n";
  for (int k = 1; k <= k_max; ++k) {
    csv << k << ',' << Fixed(dpmia::ExpectedAttackAccuracy(epsilon, delta, k), 6)
        << '\n';
  }
  if (out_dir) {
    OutputSet out;
    out.Add(fs::path(*out_dir) / "bound.csv", csv.str());
    out.Commit();
  }
  std::cout << csv.str();
  return 0;
}

int CmdInspect(const std::string& model_path, const std::string& out_path) {
  std::ifstream in(model_path);
  if (!in) throw UsageError("cannot open model file " + model_path);
  dpmia::MlpModel model;
  try {
    model = nlohmann::json::parse(in).get<dpmia::MlpModel>();
  } catch (const std::exception& e) {
    throw UsageError(model_path + ": " + e.what());
  }
  const nlohmann::json report = dpmia::MakeWeightReport(model);
  OutputSet out;
  out.Add(out_path.empty() ? fs::path(model_path + ".report.json") : fs::path(out_path),
          report.dump(2) + "\n");
  out.Commit();
  std::cout << report.dump(2) << "\n";
  return 0;
}

int CmdEncode(const std::string& kind, int n_in, double threshold,
              std::vector<double> cell_thresholds, double a, double b,
              const std::string& out_path) {
  dpmia::MlpModel model;
  try {
    if (kind == "one") {
      model = dpmia::EncodeOneThreshold(n_in, threshold, a, b);
    } else if (kind == "two") {
      if (cell_thresholds.size() == 1) {
        cell_thresholds.assign(static_cast<std::size_t>(n_in), cell_thresholds[0]);
      }
      model = dpmia::EncodeTwoThreshold(n_in, cell_thresholds, threshold, a, b);
    } else {
      throw UsageError("--kind must be one or two");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string body = nlohmann::json(model).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    OutputSet out;
    out.Add(out_path, body);
    out.Commit();
  }
  return 0;
}

void AddCommon(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "Experiment JSON");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--threads", flags.threads, "Worker threads");
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Membership-inference audits of DP location aggregates"};
  app.require_subcommand(1);
  CommonFlags flags;

  auto* generate = app.add_subcommand("generate", "Write a synthetic trace CSV");
  AddCommon(generate, flags, true);
  std::string generate_out;
  generate->add_option("--out", generate_out, "Trace CSV path");

  auto* attack = app.add_subcommand("attack", "Run the membership game");
  AddCommon(attack, flags, true);
  auto* sweep = app.add_subcommand("sweep", "Sweep k and/or shadow count");
  AddCommon(sweep, flags, true);
  auto* train = app.add_subcommand("train-meta", "Train and export the meta-classifier");
  AddCommon(train, flags, true);

  auto* bound = app.add_subcommand("bound", "Expected attack accuracy bound");
  double epsilon = 0, delta = 0;
  int k_max = 1;
  bound->add_option("--epsilon", epsilon, "Per-observation epsilon")->required();
  bound->add_option("--delta", delta, "Per-observation delta");
  bound->add_option("--k-max", k_max, "Largest k")->required();
  bound->add_option("--out-dir", flags.out_dir, "Output directory");

  auto* inspect = app.add_subcommand("inspect-weights", "Report on MLP weights");
  std::string model_path, report_out;
  inspect->add_option("--model", model_path, "Model JSON")->required();
  inspect->add_option("--out", report_out, "Report JSON path");

  auto* encode = app.add_subcommand("encode", "Export a constructive MLP encoding");
  std::string kind = "one", encode_out;
  int n_in = 1;
  double threshold = 1, a = 100, b = 100;
  std::vector<double> cell_thresholds = {0.5};
  encode->add_option("--kind", kind, "one or two")->required();
  encode->add_option("--n-in", n_in, "Inputs")->required();
  encode->add_option("--threshold", threshold, "Score threshold T");
  encode->add_option("--cell-threshold", cell_thresholds,
                     "Per-cell thresholds (one value is broadcast)");
  encode->add_option("-a", a, "Hidden-layer steepness");
  encode->add_option("-b", b, "Output-layer steepness");
  encode->add_option("--out", encode_out, "Model JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) return CmdGenerate(flags, generate_out);
    if (*attack) return CmdAttack(flags, false);
    if (*sweep) return CmdSweep(flags);
    if (*train) return CmdAttack(flags, true);
    if (*bound) return CmdBound(epsilon, delta, k_max, flags.out_dir);
    if (*inspect) return CmdInspect(model_path, report_out);
    if (*encode) {
      return CmdEncode(kind, n_in, threshold, cell_thresholds, a, b, encode_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
