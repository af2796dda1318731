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

#include "clipsim/oracles.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "clipsim/errors.h"

namespace clipsim {

std::string ToString(OracleKind kind) {
  switch (kind) {
    case OracleKind::kExact:
      return "exact";
    case OracleKind::kAdditiveGaussian:
      return "gaussian";
    case OracleKind::kMinibatch:
      return "minibatch";
    case OracleKind::kThreePoint:
      return "three_point";
  }
  return "unknown";
}

OracleKind ParseOracleKind(const std::string& name) {
  if (name == "exact") return OracleKind::kExact;
  if (name == "gaussian" || name == "additive_gaussian")
    return OracleKind::kAdditiveGaussian;
  if (name == "minibatch") return OracleKind::kMinibatch;
  if (name == "three_point" || name == "three-point")
    return OracleKind::kThreePoint;
  throw ConfigError("unknown oracle kind '" + name + "'");
}

std::vector<DenseVector> ThreePointAtoms(double sigma) {
  const double scale = std::sqrt(3.0 * sigma * sigma / 100.0);
  return {DenseVector{3.0 * scale, 0.0}, DenseVector{0.0, 4.0 * scale},
          DenseVector{-3.0 * scale, -4.0 * scale}};
}

GradientOracle::GradientOracle(OracleSpec spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  switch (spec_.kind) {
    case OracleKind::kExact:
      break;
    case OracleKind::kAdditiveGaussian:
      if (!(spec_.sigma >= 0.0)) {
        throw InvalidParameterError("gaussian oracle needs sigma >= 0");
      }
      break;
    case OracleKind::kMinibatch:
      if (!(spec_.batch_fraction > 0.0 && spec_.batch_fraction <= 1.0)) {
        throw InvalidParameterError("batch_fraction must lie in (0, 1]");
      }
      break;
    case OracleKind::kThreePoint:
      if (!(spec_.sigma > 0.0)) {
        throw InvalidParameterError("three-point oracle needs sigma > 0");
      }
      if (spec_.batch == 0) {
        throw InvalidParameterError("three-point batch must be >= 1");
      }
      atoms_ = ThreePointAtoms(spec_.sigma);
      break;
  }
}

void GradientOracle::Draw(const Problem& problem, std::size_t worker,
                          const DenseVector& x, std::uint64_t t,
                          DenseVector& out) const {
  if (worker >= problem.num_workers()) {
    throw InvalidParameterError("worker index out of range");
  }
  if (spec_.kind == OracleKind::kExact) {
    problem.Gradient(worker, x, out);
    return;
  }
  CounterEngine engine =
      RngStream(seed_, {worker, StreamPurpose::kBatchNoise}).ForStep(t);

  switch (spec_.kind) {
    case OracleKind::kExact:
      break;
    case OracleKind::kAdditiveGaussian:
      problem.Gradient(worker, x, out);
      AddGaussianNoise(engine, spec_.sigma, out);
      break;
    case OracleKind::kMinibatch: {
      const std::size_t m = problem.num_samples(worker);
      if (m == 0) {
        throw ConfigError("minibatch oracle needs a finite-sum problem");
      }
      const auto count = static_cast<std::size_t>(
          std::ceil(spec_.batch_fraction * static_cast<double>(m)));
      const std::size_t k = std::clamp<std::size_t>(count, 1, m);
      std::vector<std::size_t> rows(m);
      std::iota(rows.begin(), rows.end(), 0);
      // Partial Fisher-Yates: the first k entries are a uniform subset.
      for (std::size_t j = 0; j < k && k < m; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, m - 1);
        std::swap(rows[j], rows[pick(engine)]);
      }
      rows.resize(k);
      std::sort(rows.begin(), rows.end());
      problem.SampleGradient(worker, x, rows, out);
      break;
    }
    case OracleKind::kThreePoint: {
      if (problem.dim() < 2) {
        throw ConfigError("three-point noise needs dimension >= 2");
      }
      problem.Gradient(worker, x, out);
      std::uniform_int_distribution<int> pick(0, 2);
      double n0 = 0.0;
      double n1 = 0.0;
      for (std::size_t b = 0; b < spec_.batch; ++b) {
        const DenseVector& z = atoms_[pick(engine)];
        n0 += z[0];
        n1 += z[1];
      }
      const double inv = 1.0 / static_cast<double>(spec_.batch);
      out[0] += n0 * inv;
      out[1] += n1 * inv;
      break;
    }
  }
}

DenseVector GradientOracle::Draw(const Problem& problem, std::size_t worker,
                                 const DenseVector& x, std::uint64_t t) const {
  DenseVector out(problem.dim());
  Draw(problem, worker, x, t, out);
  return out;
}

DenseVector ThreePointClippedMean(double sigma, double tau) {
  if (!(sigma > 0.0) || !(tau > 0.0)) {
    throw InvalidParameterError("sigma and tau must be positive");
  }
  const double threshold = 3.0 * std::sqrt(3.0) * sigma / 10.0;
  if (!(tau < threshold)) {
    throw PreconditionError(
        "closed form needs tau < 3 sqrt(3) sigma / 10 (clipping active on "
        "every atom)");
  }
  return DenseVector{2.0 * tau / 15.0, tau / 15.0};
}

}  // namespace clipsim
