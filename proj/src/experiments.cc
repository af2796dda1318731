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

#include "clipsim/experiments.h"

#include <algorithm>

#include "clipsim/diagnostics.h"
#include "clipsim/errors.h"
#include "clipsim/harness.h"
#include "clipsim/run.h"

namespace clipsim {
namespace {

OracleSpec ThreePoint(double sigma) {
  OracleSpec spec;
  spec.kind = OracleKind::kThreePoint;
  spec.sigma = sigma;
  return spec;
}

}  // namespace

std::vector<StallOutcome> ChenStall(std::span<const double> starts,
                                    std::uint64_t T, double tau) {
  const auto problem = MakeChenExample();
  const GradientOracle oracle(OracleSpec{}, 0);
  HyperParams hp;
  hp.tau = tau;
  hp.gamma = 0.1;
  std::vector<StallOutcome> out;
  for (double x0 : starts) {
    OptimizerState state = InitialState(*problem, DenseVector{x0});
    bool stalled = true;
    for (std::uint64_t t = 0; t < T; ++t) {
      Step(Algorithm::kClipSgd, state, *problem, oracle, hp);
      stalled = stalled && state.x[0] == x0;
    }
    out.push_back({x0, state.x[0], stalled});
  }
  return out;
}

FloorOutcome IdealShiftFloor(const FloorSetup& setup) {
  const auto problem = MakeScaledQuadratic(setup.smoothness, 2, 1);
  const DenseVector x0{setup.x0_first, setup.x0_second};
  HyperParams hp;
  hp.tau = setup.tau;
  hp.gamma = 1.0 / (2.0 * setup.smoothness);
  const std::vector<double> finals = MonteCarlo(
      1, setup.seeds, setup.threads, [&](std::uint64_t seed) {
        const GradientOracle oracle(ThreePoint(setup.sigma), seed);
        OptimizerState state = InitialState(*problem, x0);
        for (std::uint64_t t = 0; t < setup.T; ++t) {
          Step(Algorithm::kClip21Ideal, state, *problem, oracle, hp);
        }
        return SquaredNorm(problem->FullGradient(state.x));
      });
  FloorOutcome out;
  out.mean_grad_norm_sq = Mean(finals);
  out.floor =
      NonconvergenceFloor(SquaredNorm(problem->FullGradient(x0)), setup.tau);
  return out;
}

TraceOutcome MedianGapTrace(const TraceSetup& setup) {
  const auto problem = MakeScaledQuadratic(setup.smoothness, 2, setup.workers);
  RunOptions options;
  options.x0 = DenseVector{setup.x0_first, setup.x0_second};
  const auto traces = MonteCarloTraces(
      1, setup.seeds, setup.threads, [&](std::uint64_t seed) {
        const GradientOracle oracle(ThreePoint(setup.sigma), seed);
        const RunResult r =
            Run(setup.algorithm, *problem, oracle, setup.hp, setup.T, options);
        std::vector<double> gaps(r.records.size());
        for (std::size_t t = 0; t < gaps.size(); ++t) {
          gaps[t] = *r.records[t].f_gap;
        }
        return gaps;
      });
  TraceOutcome out;
  out.initial_gap = problem->Value(*options.x0);
  out.median_gap = MedianTrace(traces);
  const double peak =
      *std::max_element(out.median_gap.begin(), out.median_gap.end());
  out.peak_ratio = peak / out.initial_gap;
  return out;
}

double MedianFinalGradNormSq(const TraceSetup& setup) {
  const auto problem = MakeScaledQuadratic(setup.smoothness, 2, setup.workers);
  RunOptions options;
  options.x0 = DenseVector{setup.x0_first, setup.x0_second};
  return Median(MonteCarlo(1, setup.seeds, setup.threads, [&](std::uint64_t seed) {
    const GradientOracle oracle(ThreePoint(setup.sigma), seed);
    const RunResult r =
        Run(setup.algorithm, *problem, oracle, setup.hp, setup.T, options);
    return FinalAveraged(r.records).mean_grad_norm_sq;
  }));
}

}  // namespace clipsim
