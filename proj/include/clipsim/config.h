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

#ifndef CLIPSIM_CONFIG_H_
#define CLIPSIM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clipsim/algorithms.h"
#include "clipsim/oracles.h"
#include "clipsim/problems.h"
#include "clipsim/vector.h"

namespace clipsim {

struct ProblemConfig {
  std::string kind = "quadratic";  // chen | quadratic | logreg | synthetic_logreg
  std::size_t workers = 1;
  // quadratic
  double smoothness = 1.0;
  std::size_t dim = 2;
  // logreg: `dataset` is resolved against the config file's directory.
  std::string dataset;
  double lambda = 1e-3;
  bool normalize = true;
  std::uint64_t partition_seed = 0;
  // synthetic_logreg
  std::size_t rows = 44;
  double density = 0.1;
  std::uint64_t data_seed = 1;
  // Start point; empty means the zero vector.
  std::vector<double> x0;
  // Lower bound on f used in place of an unknown f*.
  std::optional<double> f_lower;
};

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::kClip21Sgd2M;
  HyperParams hp;
  bool auto_params = false;           // gamma = auto
  std::optional<double> noise_ratio;  // sigma_omega = ratio * tau
  std::optional<double> dp_epsilon;   // sigma_omega from (epsilon, dp_delta, T)
  double dp_delta = 1e-5;
  double alpha = 0.1;                 // failure probability for auto
  std::optional<double> Delta;        // overrides the computed Phi^0 bound
};

struct RunConfig {
  ProblemConfig problem;
  OracleSpec oracle;
  AlgorithmConfig algorithm;
  std::uint64_t T = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool lyapunov = false;
  std::string output;
  std::filesystem::path base_dir = ".";
};

// INI-style text: sections [problem], [oracle], [algorithm], [run] holding
// `key = value` lines. Unknown keys and malformed values raise ConfigError
// listing every offending field.
RunConfig ParseRunConfig(const std::string& text,
                         const std::filesystem::path& base_dir = ".");
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Throws ConfigError listing every invalid field; returns warnings.
std::vector<std::string> ValidateConfig(const RunConfig& config);

std::unique_ptr<Problem> BuildProblem(const RunConfig& config);
DenseVector StartPoint(const RunConfig& config, const Problem& problem);

struct ResolvedParams {
  HyperParams hp;
  std::optional<double> lyapunov_eta;
  std::optional<double> f_ref;
  bool calibrated = false;
  std::vector<std::string> warnings;
};

// Fills sigma_omega from the DP or ratio keys and, for gamma = auto, the
// stepsize and momenta from the calibration rules: the deterministic rule
// when the oracle is exact and no DP noise is added, the high-probability
// rule otherwise.
ResolvedParams ResolveParams(const RunConfig& config, const Problem& problem);

}  // namespace clipsim

#endif  // CLIPSIM_CONFIG_H_
