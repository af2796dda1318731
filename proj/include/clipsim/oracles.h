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

#ifndef CLIPSIM_ORACLES_H_
#define CLIPSIM_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "clipsim/problems.h"
#include "clipsim/rng.h"
#include "clipsim/vector.h"

namespace clipsim {

enum class OracleKind {
  kExact,
  kAdditiveGaussian,  // grad f_i(x) + N(0, sigma^2 I)
  kMinibatch,         // mean over ceil(fraction * m_i) rows, no replacement
  kThreePoint,        // grad f_i(x) + mean of `batch` draws from {z1, z2, z3}
};

struct OracleSpec {
  OracleKind kind = OracleKind::kExact;
  double sigma = 0.0;
  double batch_fraction = 1.0;
  std::size_t batch = 1;
};

std::string ToString(OracleKind kind);
OracleKind ParseOracleKind(const std::string& name);

// Atoms of the three-point noise: (3,0), (0,4), (-3,-4) scaled by
// sqrt(3 sigma^2 / 100). They sum to zero and each has norm > 0.3 sqrt(3) sigma.
std::vector<DenseVector> ThreePointAtoms(double sigma);

// Stochastic gradient source. Worker i draws from its own substream
// (seed, {i, kBatchNoise}) re-keyed by iteration, so a draw depends only on
// (seed, worker, t) and never on evaluation order.
class GradientOracle {
 public:
  GradientOracle(OracleSpec spec, std::uint64_t seed);

  const OracleSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  bool is_exact() const { return spec_.kind == OracleKind::kExact; }

  void Draw(const Problem& problem, std::size_t worker, const DenseVector& x,
            std::uint64_t t, DenseVector& out) const;
  DenseVector Draw(const Problem& problem, std::size_t worker,
                   const DenseVector& x, std::uint64_t t) const;

 private:
  OracleSpec spec_;
  std::uint64_t seed_;
  std::vector<DenseVector> atoms_;
};

// Closed-form E[clip_tau(xi)] for single-draw three-point noise: (2 tau/15,
// tau/15). Valid only while clipping is active on every atom, i.e.
// tau < 3 sqrt(3) sigma / 10; throws PreconditionError otherwise.
DenseVector ThreePointClippedMean(double sigma, double tau);

}  // namespace clipsim

#endif  // CLIPSIM_ORACLES_H_
