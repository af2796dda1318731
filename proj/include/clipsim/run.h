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

#ifndef CLIPSIM_RUN_H_
#define CLIPSIM_RUN_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "clipsim/algorithms.h"
#include "clipsim/diagnostics.h"
#include "clipsim/oracles.h"
#include "clipsim/problems.h"
#include "clipsim/vector.h"

namespace clipsim {

struct RunOptions {
  std::optional<DenseVector> x0;  // zero vector when absent
  int threads = 1;
  // When set, Phi^t is recorded for Clip21-SGD2M runs with eta = tau / B.
  std::optional<double> lyapunov_eta;
  // Reference value for f_gap and Phi; falls back to problem.f_star() and
  // then to 0 for f_gap (the raw objective).
  std::optional<double> f_ref;
  // Target delta for the privacy ledger: each step is charged the Gaussian
  // mechanism epsilon at delta / T, composed with slack delta.
  double dp_delta = 1e-5;
  // Skips f(x^t) in the records (f_gap left empty).
  bool record_f_gap = true;
  // Called after every step with the new state and its record.
  std::function<void(const OptimizerState&, const RunRecord&)> observer;
};

struct RunResult {
  RunRecord initial;               // t = 0, before any step
  std::vector<RunRecord> records;  // t = 1..T
  OptimizerState final_state;
};

// Applies `algorithm` T times from the default initialization. Throws
// InvalidParameterError for T = 0 and DivergenceError when any state vector
// becomes non-finite.
RunResult Run(Algorithm algorithm, const Problem& problem,
              const GradientOracle& oracle, const HyperParams& hp,
              std::uint64_t T, const RunOptions& options = {});

// True when the method adds DP noise for these parameters.
bool AddsPrivacyNoise(Algorithm algorithm, const HyperParams& hp);

}  // namespace clipsim

#endif  // CLIPSIM_RUN_H_
