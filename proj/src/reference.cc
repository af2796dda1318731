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

// Serial transcriptions of the methods, one loop per pseudocode line. These
// are deliberately allocation-heavy and single-threaded; the kernels in
// algorithms.cc must reproduce them bit for bit.

#include <cstdint>
#include <vector>

#include "clipsim/algorithms.h"
#include "clipsim/clip.h"
#include "clipsim/errors.h"
#include "clipsim/rng.h"

namespace clipsim::reference {
namespace {

DenseVector DpNoise(const GradientOracle& oracle, std::size_t worker,
                    std::uint64_t t, std::size_t dim, double sigma) {
  return GaussianVector(
      RngStream(oracle.seed(), {worker, StreamPurpose::kDpNoise}), t, dim,
      sigma);
}

void ClipSgd(OptimizerState& s, const Problem& p, const GradientOracle& o,
             const HyperParams& hp) {
  const std::size_t n = p.num_workers();
  const std::size_t d = p.dim();
  const bool dp = hp.sigma_omega > 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector draw = o.Draw(p, i, s.x, s.t);
    const DenseVector clipped = Clip(draw, hp.tau);
    s.momenta[i] = draw;
    s.shifts[i] = clipped;
    s.messages[i] = clipped;
    if (dp) {
      s.noise[i] = DpNoise(o, i, s.t, d, hp.sigma_omega);
      s.messages[i] = clipped + s.noise[i];
    }
  }
  s.g = (1.0 / static_cast<double>(n)) * PairwiseSum(s.messages);
  if (dp) {
    s.omega_sum =
        s.omega_sum + (1.0 / static_cast<double>(n)) * PairwiseSum(s.noise);
  }
  s.x = s.x - hp.gamma * s.g;
  s.t += 1;
}

void Clip21(OptimizerState& s, const Problem& p, const GradientOracle& o,
            const HyperParams& hp) {
  const std::size_t n = p.num_workers();
  const std::size_t d = p.dim();
  const bool dp = hp.sigma_omega > 0.0;
  s.x = s.x - hp.gamma * s.g;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector draw = o.Draw(p, i, s.x, s.t + 1);
    const DenseVector c = Clip(draw - s.shifts[i], hp.tau);
    s.momenta[i] = draw;
    s.prev_shifts[i] = s.shifts[i];
    s.shifts[i] = s.shifts[i] + c;
    s.messages[i] = c;
    if (dp) {
      s.noise[i] = DpNoise(o, i, s.t + 1, d, hp.sigma_omega);
      s.messages[i] = c + s.noise[i];
    }
  }
  s.g = s.g + (1.0 / static_cast<double>(n)) * PairwiseSum(s.messages);
  if (dp) {
    s.omega_sum =
        s.omega_sum + (1.0 / static_cast<double>(n)) * PairwiseSum(s.noise);
  }
  s.t += 1;
}

void Clip21Sgd2M(OptimizerState& s, const Problem& p, const GradientOracle& o,
                 const HyperParams& hp) {
  const std::size_t n = p.num_workers();
  const std::size_t d = p.dim();
  const bool dp = hp.sigma_omega > 0.0;
  s.x = s.x - hp.gamma * s.g;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector draw = o.Draw(p, i, s.x, s.t + 1);
    s.momenta[i] = (1.0 - hp.beta) * s.momenta[i] + hp.beta * draw;
    const DenseVector clipped = Clip(s.momenta[i] - s.shifts[i], hp.tau);
    s.messages[i] = clipped;
    if (dp) {
      s.noise[i] = DpNoise(o, i, s.t + 1, d, hp.sigma_omega);
      s.messages[i] = clipped + s.noise[i];
    }
    s.prev_shifts[i] = s.shifts[i];
    s.shifts[i] = s.shifts[i] + hp.beta_hat * clipped;
  }
  s.g = s.g + (hp.beta_hat / static_cast<double>(n)) * PairwiseSum(s.messages);
  if (dp) {
    s.omega_sum =
        s.omega_sum + (1.0 / static_cast<double>(n)) * PairwiseSum(s.noise);
  }
  s.t += 1;
}

void Ideal(OptimizerState& s, const Problem& p, const GradientOracle& o,
           const HyperParams& hp) {
  const std::size_t n = p.num_workers();
  s.x = s.x - hp.gamma * s.g;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector exact = p.Gradient(i, s.x);
    const DenseVector draw = o.Draw(p, i, s.x, s.t + 1);
    const DenseVector c = Clip(draw - exact, hp.tau);
    s.prev_shifts[i] = exact;
    s.momenta[i] = draw;
    s.messages[i] = c;
    s.shifts[i] = exact + c;
  }
  s.g = (1.0 / static_cast<double>(n)) * PairwiseSum(s.shifts);
  s.t += 1;
}

void Sgdm(OptimizerState& s, const Problem& p, const GradientOracle& o,
          const HyperParams& hp) {
  const std::size_t n = p.num_workers();
  s.x = s.x - hp.gamma * s.g;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseVector draw = o.Draw(p, i, s.x, s.t + 1);
    const DenseVector c = draw - s.shifts[i];
    s.momenta[i] = draw;
    s.prev_shifts[i] = s.shifts[i];
    s.messages[i] = c;
    s.shifts[i] = s.shifts[i] + hp.beta_hat * c;
  }
  s.g = s.g + (hp.beta_hat / static_cast<double>(n)) * PairwiseSum(s.messages);
  s.t += 1;
}

}  // namespace

void Step(Algorithm algorithm, OptimizerState& state, const Problem& problem,
          const GradientOracle& oracle, const HyperParams& hp) {
  Validate(hp);
  if (state.x.size() != problem.dim() ||
      state.shifts.size() != problem.num_workers()) {
    throw StateError("optimizer state does not match problem");
  }
  switch (algorithm) {
    case Algorithm::kClipSgd:
      return ClipSgd(state, problem, oracle, hp);
    case Algorithm::kClip21Sgd:
      return Clip21(state, problem, oracle, hp);
    case Algorithm::kClip21Sgd2M:
      return Clip21Sgd2M(state, problem, oracle, hp);
    case Algorithm::kClip21Ideal:
      return Ideal(state, problem, oracle, hp);
    case Algorithm::kSgdm:
      return Sgdm(state, problem, oracle, hp);
  }
}

}  // namespace clipsim::reference
