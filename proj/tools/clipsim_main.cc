// Copyright 2026 The clipsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, counterexample, calibrate, make-data.

#include <cstdint>
#include <exception>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clipsim/calibration.h"
#include "clipsim/config.h"
#include "clipsim/dataset.h"
#include "clipsim/errors.h"
#include "clipsim/experiments.h"
#include "clipsim/harness.h"

namespace {

using namespace clipsim;

constexpr int kExitValidation = 1;
constexpr int kExitDivergence = 2;

std::vector<double> ParseValues(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ConfigError("bad value '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("--values is empty");
  return values;
}

int CmdRun(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<int> threads, const std::string& out_path) {
  RunConfig config = LoadRunConfig(config_path);
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  if (!out_path.empty()) config.output = out_path;
  const ConfigRun run = RunFromConfig(config);
  if (config.output.empty()) {
    std::cout << FormatCsv(run.result.records);
  } else {
    WriteCsv(run.result.records, config.output);
  }
  std::cerr << FormatSummary(run.summary);
  return 0;
}

int CmdSweep(const std::string& config_path, const std::string& axis,
             const std::string& values, const std::string& algorithms,
             std::size_t seeds, const std::string& out_path) {
  SweepSpec spec;
  spec.base = LoadRunConfig(config_path);
  spec.axis = ParseSweepAxis(axis);
  spec.values = ParseValues(values);
  if (!algorithms.empty()) {
    spec.algorithms.clear();
    std::stringstream stream(algorithms);
    std::string name;
    while (std::getline(stream, name, ',')) {
      spec.algorithms.push_back(ParseAlgorithm(name));
    }
  }
  spec.seeds.clear();
  for (std::size_t s = 0; s < seeds; ++s) spec.seeds.push_back(s + 1);
  const std::string table = FormatSweepTable(Sweep(spec));
  if (out_path.empty()) {
    std::cout << table;
  } else {
    std::ofstream(out_path) << table;
  }
  return 0;
}

int CmdCounterexample(const std::string& which, std::optional<std::size_t> seeds,
                      int threads) {
  std::cout.precision(10);
  if (which == "chen") {
    const std::vector<double> starts = {-2, -1, 0, 1, 2};
    for (const StallOutcome& o : ChenStall(starts, 1000)) {
      std::cout << "x0 " << o.x0 << " x_final " << o.x_final
                << (o.stalled ? " stalled" : " moved") << "\n";
    }
    return 0;
  }
  if (which == "floor") {
    FloorSetup setup;
    setup.seeds = seeds.value_or(setup.seeds);
    setup.threads = threads;
    const FloorOutcome o = IdealShiftFloor(setup);
    std::cout << "mean_grad_norm_sq " << o.mean_grad_norm_sq << "\nfloor "
              << o.floor << "\n";
    return 0;
  }
  if (which == "traces") {
    std::cout << "tau,algorithm,initial_gap,peak_ratio\n";
    for (double tau : {1.0, 0.1, 0.01}) {
      for (Algorithm alg : {Algorithm::kClip21Sgd, Algorithm::kClip21Sgd2M}) {
        TraceSetup setup;
        setup.algorithm = alg;
        setup.seeds = seeds.value_or(setup.seeds);
        setup.threads = threads;
        setup.hp.gamma = 0.01;
        setup.hp.tau = tau;
        setup.hp.beta = 0.005;
        const TraceOutcome o = MedianGapTrace(setup);
        std::cout << tau << "," << ToString(alg) << "," << o.initial_gap << ","
                  << o.peak_ratio << "\n";
      }
    }
    return 0;
  }
  throw ConfigError("--which must be chen, floor or traces");
}

int CmdCalibrate(double tau, double eps, double delta, std::uint64_t T) {
  const double sigma_omega = DpSigma(tau, eps, delta, T);
  const PerStepPrivacy per_step = PerStepBudget(eps, delta, T);
  const PrivacySpend spend = Account(PrivacySpend{}, per_step, T, delta);
  std::cout.precision(17);
  std::cout << "sigma_omega " << sigma_omega << "\nstep_epsilon "
            << per_step.epsilon << "\nstep_delta " << per_step.delta
            << "\ntotal_epsilon " << spend.epsilon << "\ntotal_delta "
            << spend.delta << "\n";
  return 0;
}

int CmdMakeData(std::size_t rows, std::size_t dim, double density,
                std::uint64_t seed, const std::string& out_path) {
  WriteLibsvm(MakeSyntheticDataset(rows, dim, density, seed), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clipped distributed optimization simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Oracle seed");
  run->add_option("--threads", threads, "Worker threads");
  run->add_option("--out", out_path, "CSV output path");

  std::string axis;
  std::string values;
  std::string algorithms;
  std::size_t sweep_seeds = 3;
  auto* sweep = app.add_subcommand("sweep", "Tune and sweep one axis");
  sweep->add_option("--config", config_path, "Base config")->required();
  sweep->add_option("--axis", axis, "tau, ratio or workers")
      ->required()
      ->check(CLI::IsMember({"tau", "ratio", "workers"}));
  sweep->add_option("--values", values, "Comma-separated axis values")
      ->required();
  sweep->add_option("--algorithms", algorithms, "Comma-separated methods");
  sweep->add_option("--seeds", sweep_seeds, "Seeds per grid cell");
  sweep->add_option("--out", out_path, "Table output path");

  std::string which;
  std::optional<std::size_t> ce_seeds;
  int ce_threads = 1;
  auto* counter = app.add_subcommand("counterexample", "Known failure cases");
  counter->add_option("--which", which, "chen, floor or traces")
      ->required()
      ->check(CLI::IsMember({"chen", "floor", "traces"}));
  counter->add_option("--seeds", ce_seeds, "Monte-Carlo seeds");
  counter->add_option("--threads", ce_threads, "Threads over seeds");

  double tau = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t T = 0;
  auto* calibrate = app.add_subcommand("calibrate", "DP noise and spend");
  calibrate->add_option("--tau", tau)->required();
  calibrate->add_option("--eps", eps)->required();
  calibrate->add_option("--delta", delta)->required();
  calibrate->add_option("--T", T)->required();

  std::size_t rows = 44;
  std::size_t dim = 100;
  double density = 0.1;
  std::uint64_t data_seed = 1;
  auto* make_data = app.add_subcommand("make-data", "Write a synthetic LibSVM set");
  make_data->add_option("--rows", rows);
  make_data->add_option("--dim", dim);
  make_data->add_option("--density", density);
  make_data->add_option("--seed", data_seed);
  make_data->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return CmdRun(config_path, seed, threads, out_path);
    if (*sweep) {
      return CmdSweep(config_path, axis, values, algorithms, sweep_seeds,
                      out_path);
    }
    if (*counter) return CmdCounterexample(which, ce_seeds, ce_threads);
    if (*calibrate) return CmdCalibrate(tau, eps, delta, T);
    if (*make_data) return CmdMakeData(rows, dim, density, data_seed, out_path);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
