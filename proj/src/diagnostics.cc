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

#include "clipsim/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "clipsim/errors.h"

namespace clipsim {
namespace {

double ResolveReference(const Problem& problem, std::optional<double> f_ref,
                        const char* what) {
  if (f_ref) return *f_ref;
  if (auto f_star = problem.f_star()) return *f_star;
  throw DiagnosticUnavailableError(std::string(what) +
                                   " needs f* for problem " + problem.name());
}

}  // namespace

double Lyapunov(const OptimizerState& state, const Problem& problem,
                const HyperParams& hp, double eta,
                std::optional<double> f_ref) {
  const double f_low = ResolveReference(problem, f_ref, "lyapunov");
  if (!(eta > 0.0)) throw InvalidParameterError("eta must be positive");
  const std::size_t n = problem.num_workers();
  if (state.num_workers() != n || state.x.size() != problem.dim()) {
    throw StateError("state does not match the problem");
  }

  std::vector<double> shift_gap(n);
  std::vector<double> momentum_gap(n);
  std::vector<DenseVector> grads(n);
  for (std::size_t i = 0; i < n; ++i) {
    grads[i] = problem.Gradient(i, state.x);
    shift_gap[i] = SquaredNorm(state.shifts[i] - state.momenta[i]);
    momentum_gap[i] = SquaredNorm(state.momenta[i] - grads[i]);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const DenseVector mean_v = inv_n * PairwiseSum(state.momenta);
  const DenseVector full_grad = inv_n * PairwiseSum(grads);

  const double bh = hp.beta_hat;
  return problem.Value(state.x) - f_low +
         2.0 * hp.gamma / (bh * eta) * inv_n * PairwiseSum(shift_gap) +
         8.0 * hp.gamma * hp.beta / (bh * bh * eta * eta) * inv_n *
             PairwiseSum(momentum_gap) +
         2.0 * hp.gamma / hp.beta * SquaredNorm(mean_v - full_grad);
}

bool SmoothnessGradientBoundCheck(const Problem& problem, const DenseVector& x,
                                  std::optional<double> smoothness) {
  const double f_star = ResolveReference(problem, std::nullopt, "smoothness check");
  const double L = smoothness.value_or(problem.smoothness());
  const double lhs = SquaredNorm(problem.FullGradient(x));
  const double rhs = 2.0 * L * (problem.Value(x) - f_star);
  // Rounding slack so the tight quadratic case compares equal.
  return lhs <= rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
}

double NonconvergenceFloor(double grad_norm_sq_x0, double tau) {
  if (!(grad_norm_sq_x0 >= 0.0) || !(tau >= 0.0)) {
    throw InvalidParameterError("floor inputs must be >= 0");
  }
  return 0.5 * std::min(grad_norm_sq_x0, tau * tau / 45.0);
}

double MaxLocalGradientNorm(const Problem& problem, const DenseVector& x) {
  double best = 0.0;
  for (std::size_t i = 0; i < problem.num_workers(); ++i) {
    best = std::max(best, Norm(problem.Gradient(i, x)));
  }
  return best;
}

InitialGeometry MeasureInitialGeometry(const Problem& problem,
                                       const DenseVector& x0,
                                       std::optional<double> f_ref) {
  const double f_low = ResolveReference(problem, f_ref, "initial geometry");
  const std::size_t n = problem.num_workers();
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    local[i] = SquaredNorm(problem.Gradient(i, x0));
  }
  InitialGeometry geometry;
  geometry.f_gap = problem.Value(x0) - f_low;
  geometry.mean_local_sq = PairwiseSum(local) / static_cast<double>(n);
  geometry.global_sq = SquaredNorm(problem.FullGradient(x0));
  return geometry;
}

FinalMetric FinalAveraged(std::span<const RunRecord> records,
                          std::size_t window) {
  if (records.empty() || window == 0) {
    throw InvalidParameterError("final metric needs at least one record");
  }
  const std::size_t count = std::min(window, records.size());
  const auto tail = records.subspan(records.size() - count);
  double sum_norm = 0.0;
  double sum_sq = 0.0;
  for (const RunRecord& r : tail) {
    if (!std::isfinite(r.grad_norm_sq)) {
      constexpr double kInf = std::numeric_limits<double>::infinity();
      return {kInf, kInf};
    }
    sum_norm += std::sqrt(r.grad_norm_sq);
    sum_sq += r.grad_norm_sq;
  }
  const double c = static_cast<double>(count);
  return {sum_norm / c, sum_sq / c};
}

}  // namespace clipsim
