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

#ifndef CLIPSIM_EXPERIMENTS_H_
#define CLIPSIM_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clipsim/algorithms.h"

namespace clipsim {

// Clip-SGD with exact gradients on the two-worker example from each start.
struct StallOutcome {
  double x0 = 0.0;
  double x_final = 0.0;
  bool stalled = false;  // every iterate bitwise equal to x0
};
std::vector<StallOutcome> ChenStall(std::span<const double> starts,
                                    std::uint64_t T, double tau = 1.0);

// Shift-by-true-gradient method on f(x) = (L/2)||x||^2 in 2-D with
// three-point noise: mean of ||grad f(x^T)||^2 over seeds against the floor.
struct FloorSetup {
  double smoothness = 2.0;
  double sigma = 5.0;
  double tau = 0.1;
  double x0_first = 0.0;
  double x0_second = -1.0;
  std::uint64_t T = 1000;
  std::size_t seeds = 10000;
  int threads = 1;
};
struct FloorOutcome {
  double mean_grad_norm_sq = 0.0;
  double floor = 0.0;  // 0.5 min{||grad f(x0)||^2, tau^2/45}
};
FloorOutcome IdealShiftFloor(const FloorSetup& setup);

// Median-over-seeds trace of f(x^t) - f* on the three-point quadratic.
struct TraceSetup {
  Algorithm algorithm = Algorithm::kClip21Sgd;
  double smoothness = 2.0;
  std::size_t workers = 1;
  double sigma = 5.0;
  HyperParams hp;
  double x0_first = 0.0;
  double x0_second = -0.07;
  std::uint64_t T = 10000;
  std::size_t seeds = 20;
  int threads = 1;
};
struct TraceOutcome {
  double initial_gap = 0.0;
  std::vector<double> median_gap;  // t = 1..T
  double peak_ratio = 0.0;         // max_t median_gap / initial_gap
};
TraceOutcome MedianGapTrace(const TraceSetup& setup);

// Median over seeds of the last-100 mean of ||grad f||^2.
double MedianFinalGradNormSq(const TraceSetup& setup);

}  // namespace clipsim

#endif  // CLIPSIM_EXPERIMENTS_H_
