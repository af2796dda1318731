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

#ifndef CLIPSIM_ALGORITHMS_H_
#define CLIPSIM_ALGORITHMS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "clipsim/oracles.h"
#include "clipsim/problems.h"
#include "clipsim/vector.h"

namespace clipsim {

enum class Algorithm {
  kClipSgd,      // clip each stochastic gradient, average, step
  kClip21Sgd,    // error feedback: clip the difference to the worker shift
  kClip21Sgd2M,  // client momentum + damped server accumulation (+ DP noise)
  kClip21Ideal,  // shift by the true local gradient; analysis device only
  kSgdm,         // heavy-ball SGD baseline in error-feedback form
};

std::string ToString(Algorithm algorithm);
Algorithm ParseAlgorithm(const std::string& name);

struct HyperParams {
  double gamma = 0.1;       // stepsize
  double tau = 1.0;         // clipping level
  double beta = 1.0;        // client momentum, (0, 1]
  double beta_hat = 1.0;    // server momentum, (0, 1]
  double sigma_omega = 0.0; // std of the local DP noise
};

// Throws InvalidParameterError on out-of-range values.
void Validate(const HyperParams& hp);

// Method state after t steps. Per-worker vectors are indexed by worker.
//
// `momenta` is v_i for Clip21-SGD2M and the last stochastic gradient for the
// other methods; `prev_shifts` is the vector it was compared against when
// clipping (g_i^{t-1}, zero for Clip-SGD, grad f_i(x) for the ideal method).
// `omega_sum` is the running average of DP noise, (1/n) sum_l sum_i w_i^l.
struct OptimizerState {
  DenseVector x;
  DenseVector g;
  std::vector<DenseVector> shifts;
  std::vector<DenseVector> prev_shifts;
  std::vector<DenseVector> momenta;
  std::vector<DenseVector> messages;  // c_i of the last step
  std::vector<DenseVector> noise;     // w_i of the last step
  DenseVector omega_sum;
  std::uint64_t t = 0;

  std::size_t num_workers() const { return shifts.size(); }
  bool AllFinite() const;
};

// Default initialization: x = x0, every other vector zero.
OptimizerState InitialState(const Problem& problem, const DenseVector& x0);

struct ExecPolicy {
  int threads = 1;  // OpenMP threads for the per-worker loop
};

// One iteration of `algorithm`. The per-worker part runs on `exec.threads`
// threads; the server reduction sums worker messages in a fixed pairwise
// order, so the result does not depend on the thread count. DP noise for
// worker i at step t comes from the substream (oracle.seed(), {i, kDpNoise}).
void Step(Algorithm algorithm, OptimizerState& state, const Problem& problem,
          const GradientOracle& oracle, const HyperParams& hp,
          const ExecPolicy& exec = {});

void ClipSgdStep(OptimizerState& state, const Problem& problem,
                 const GradientOracle& oracle, const HyperParams& hp,
                 const ExecPolicy& exec = {});
void Clip21SgdStep(OptimizerState& state, const Problem& problem,
                   const GradientOracle& oracle, const HyperParams& hp,
                   const ExecPolicy& exec = {});
void Clip21Sgd2MStep(OptimizerState& state, const Problem& problem,
                     const GradientOracle& oracle, const HyperParams& hp,
                     const ExecPolicy& exec = {});
void Clip21IdealStep(OptimizerState& state, const Problem& problem,
                     const GradientOracle& oracle, const HyperParams& hp,
                     const ExecPolicy& exec = {});
void SgdmStep(OptimizerState& state, const Problem& problem,
              const GradientOracle& oracle, const HyperParams& hp,
              const ExecPolicy& exec = {});

// |I_t|: workers whose last clipping input exceeded tau, recomputed from
// `momenta - prev_shifts`. Always 0 for kSgdm.
std::size_t ClipActiveCount(Algorithm algorithm, const OptimizerState& state,
                            const HyperParams& hp);

// (1/n) sum_i g_i in the fixed pairwise order.
DenseVector MeanShift(const OptimizerState& state);

namespace reference {

// Straight-line serial transcription of each method, kept as the test
// oracle for the parallel kernels. Produces bitwise identical states.
void Step(Algorithm algorithm, OptimizerState& state, const Problem& problem,
          const GradientOracle& oracle, const HyperParams& hp);

}  // namespace reference

}  // namespace clipsim

#endif  // CLIPSIM_ALGORITHMS_H_
