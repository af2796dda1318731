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

#ifndef CLIPSIM_DIAGNOSTICS_H_
#define CLIPSIM_DIAGNOSTICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "clipsim/algorithms.h"
#include "clipsim/calibration.h"
#include "clipsim/problems.h"
#include "clipsim/vector.h"

namespace clipsim {

struct RunRecord {
  std::uint64_t t = 0;
  double grad_norm_sq = 0.0;  // ||grad f(x^t)||^2 with exact gradients
  std::optional<double> f_gap;
  std::optional<double> lyapunov;
  std::size_t clip_active = 0;
  double eps_spent = 0.0;
  double delta_spent = 0.0;
  std::int64_t wall_ns = 0;
};

// Phi^t for a Clip21-SGD2M state:
//   f(x) - f_ref + (2 gamma/(bh eta)) (1/n) sum ||g_i - v_i||^2
//   + (8 gamma beta/(bh^2 eta^2)) (1/n) sum ||v_i - grad f_i(x)||^2
//   + (2 gamma/beta) ||mean v_i - grad f(x)||^2.
// f_ref defaults to problem.f_star(); throws DiagnosticUnavailableError when
// neither is known.
double Lyapunov(const OptimizerState& state, const Problem& problem,
                const HyperParams& hp, double eta,
                std::optional<double> f_ref = std::nullopt);

// ||grad f(x)||^2 <= 2 L (f(x) - f*) with L = problem.smoothness() unless
// overridden. Throws DiagnosticUnavailableError without f*.
bool SmoothnessGradientBoundCheck(const Problem& problem, const DenseVector& x,
                                  std::optional<double> smoothness = {});

// 0.5 * min{grad_norm_sq_x0, tau^2 / 45}.
double NonconvergenceFloor(double grad_norm_sq_x0, double tau);

// max_i ||grad f_i(x)||.
double MaxLocalGradientNorm(const Problem& problem, const DenseVector& x);

// Terms of Phi^0 at the default initialization. f_ref as in Lyapunov.
InitialGeometry MeasureInitialGeometry(const Problem& problem,
                                       const DenseVector& x0,
                                       std::optional<double> f_ref = {});

struct FinalMetric {
  double mean_grad_norm = 0.0;     // mean of ||grad f|| over the window
  double mean_grad_norm_sq = 0.0;  // mean of ||grad f||^2 over the window
};

// Averages over the last `window` records (all of them if fewer). A
// non-finite value anywhere in the window makes both fields +inf.
FinalMetric FinalAveraged(std::span<const RunRecord> records,
                          std::size_t window = 100);

}  // namespace clipsim

#endif  // CLIPSIM_DIAGNOSTICS_H_
