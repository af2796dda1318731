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

#ifndef CLIPSIM_HARNESS_H_
#define CLIPSIM_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "clipsim/config.h"
#include "clipsim/diagnostics.h"
#include "clipsim/run.h"

namespace clipsim {

struct RunSummary {
  HyperParams hp;
  bool calibrated = false;
  FinalMetric final_metric;  // last-100 window
  double eps_spent = 0.0;
  double delta_spent = 0.0;
  std::vector<std::string> warnings;
};

struct ConfigRun {
  RunResult result;
  RunSummary summary;
};

// Builds the problem and oracle, resolves parameters and runs. The oracle
// seed is config.seed; config.threads only changes the schedule.
ConfigRun RunFromConfig(const RunConfig& config);

std::string FormatSummary(const RunSummary& summary);

// "t,grad_norm_sq,f_gap,lyapunov,clip_active,eps_spent,delta_spent" and one
// row per record, 17 significant digits, empty fields for absent values.
std::string FormatCsv(std::span<const RunRecord> records);
void WriteCsv(std::span<const RunRecord> records,
              const std::filesystem::path& path);
// Inverse of FormatCsv (wall_ns is not stored and reads back as 0).
std::vector<RunRecord> ParseCsv(const std::string& text);

enum class SweepAxis { kTau, kNoiseRatio, kWorkers };
SweepAxis ParseSweepAxis(const std::string& name);  // tau | ratio | workers
std::string ToString(SweepAxis axis);

struct TuningGrid {
  std::vector<double> gammas;      // 2^-5 .. 2^5
  std::vector<double> betas = {0.1, 0.5, 0.9};
  std::vector<double> beta_hats = {0.01, 0.1, 0.5};  // DP runs only
  std::vector<double> taus = {1e-4, 1e-3, 1e-2, 1e-1};  // ratio sweeps only
  TuningGrid();
};

struct SweepSpec {
  RunConfig base;
  SweepAxis axis = SweepAxis::kTau;
  std::vector<double> values;
  std::vector<Algorithm> algorithms = {Algorithm::kClip21Sgd,
                                       Algorithm::kClip21Sgd2M};
  TuningGrid grid;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
};

struct SweepRow {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::kClip21Sgd2M;
  HyperParams best;
  double metric_mean = 0.0;  // final averaged gradient norm, seed mean
  double metric_min = 0.0;
  double metric_max = 0.0;
};

struct GridCandidate {
  HyperParams hp;
  double metric = 0.0;  // NaN counts as +inf
};

// Index of the smallest metric; ties go to smaller gamma, then beta, then
// beta_hat, then tau.
std::size_t SelectBest(std::span<const GridCandidate> candidates);

// Grid cells of one (axis value, algorithm) pair. Momentum is tuned over
// `betas` for clip21_sgd2m (as beta) and sgdm (as beta_hat); beta_hat over
// `beta_hats` for clip21_sgd2m when DP noise is on; tau over `taus` on the
// ratio axis.
std::vector<HyperParams> GridCells(const SweepSpec& spec, Algorithm algorithm,
                                   const HyperParams& base);

// Rows in (axis value, algorithm) order. Cells run on base.threads threads.
std::vector<SweepRow> Sweep(const SweepSpec& spec);
std::string FormatSweepTable(std::span<const SweepRow> rows);

// fn(seed) for seed = first, first + 1, ..., on up to `threads` threads;
// results are in seed order.
std::vector<double> MonteCarlo(std::uint64_t first_seed, std::size_t count,
                               int threads,
                               const std::function<double(std::uint64_t)>& fn);
std::vector<std::vector<double>> MonteCarloTraces(
    std::uint64_t first_seed, std::size_t count, int threads,
    const std::function<std::vector<double>(std::uint64_t)>& fn);

double Mean(std::span<const double> values);
double Median(std::vector<double> values);
// Coordinate-wise median of equally long traces.
std::vector<double> MedianTrace(const std::vector<std::vector<double>>& traces);

}  // namespace clipsim

#endif  // CLIPSIM_HARNESS_H_
