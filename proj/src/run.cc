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

#include "clipsim/run.h"

#include <chrono>
#include <limits>

#include "clipsim/calibration.h"
#include "clipsim/errors.h"

namespace clipsim {

bool AddsPrivacyNoise(Algorithm algorithm, const HyperParams& hp) {
  if (hp.sigma_omega <= 0.0) return false;
  return algorithm == Algorithm::kClipSgd || algorithm == Algorithm::kClip21Sgd ||
         algorithm == Algorithm::kClip21Sgd2M;
}

RunResult Run(Algorithm algorithm, const Problem& problem,
              const GradientOracle& oracle, const HyperParams& hp,
              std::uint64_t T, const RunOptions& options) {
  if (T == 0) throw InvalidParameterError("T must be >= 1");
  Validate(hp);
  const DenseVector x0 = options.x0.value_or(DenseVector(problem.dim()));
  if (x0.size() != problem.dim()) {
    throw StateError("x0 has the wrong dimension");
  }

  const std::optional<double> f_low =
      options.f_ref ? options.f_ref : problem.f_star();
  const bool track_lyapunov =
      options.lyapunov_eta && algorithm == Algorithm::kClip21Sgd2M;

  const bool private_run = AddsPrivacyNoise(algorithm, hp);
  PerStepPrivacy per_step;
  if (private_run) {
    per_step.delta = PerStepDelta(options.dp_delta, T);
    per_step.epsilon =
        GaussianMechanismEpsilon(hp.sigma_omega, hp.tau, per_step.delta);
  }

  RunResult result;
  OptimizerState state = InitialState(problem, x0);
  auto measure = [&](std::uint64_t t) {
    RunRecord r;
    r.t = t;
    r.grad_norm_sq = SquaredNorm(problem.FullGradient(state.x));
    if (options.record_f_gap) {
      r.f_gap = problem.Value(state.x) - f_low.value_or(0.0);
    }
    if (track_lyapunov) {
      r.lyapunov = Lyapunov(state, problem, hp, *options.lyapunov_eta, f_low);
    }
    r.clip_active = t == 0 ? 0 : ClipActiveCount(algorithm, state, hp);
    if (private_run) {
      if (t > 0) {
        const PrivacySpend spend =
            Account(PrivacySpend{}, per_step, t, options.dp_delta);
        r.eps_spent = spend.epsilon;
        r.delta_spent = spend.delta;
      }
    } else {
      r.eps_spent = std::numeric_limits<double>::infinity();
    }
    return r;
  };

  result.initial = measure(0);
  result.records.reserve(T);
  const ExecPolicy exec{options.threads};
  for (std::uint64_t t = 1; t <= T; ++t) {
    const auto start = std::chrono::steady_clock::now();
    Step(algorithm, state, problem, oracle, hp, exec);
    const auto stop = std::chrono::steady_clock::now();
    if (!state.AllFinite()) throw DivergenceError(t);
    RunRecord r = measure(t);
    r.wall_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
            .count();
    if (options.observer) options.observer(state, r);
    result.records.push_back(std::move(r));
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace clipsim
