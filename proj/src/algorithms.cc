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

#include "clipsim/algorithms.h"

#include <cmath>

#include "clipsim/clip.h"
#include "clipsim/errors.h"
#include "clipsim/rng.h"
#include "parallel.h"

namespace clipsim {
namespace {

using internal::ParallelFor;

void CheckState(const OptimizerState& s, const Problem& p) {
  const std::size_t n = p.num_workers();
  const std::size_t d = p.dim();
  auto bad = [&](const std::vector<DenseVector>& v) {
    if (v.size() != n) return true;
    for (const DenseVector& e : v) {
      if (e.size() != d) return true;
    }
    return false;
  };
  if (s.x.size() != d || s.g.size() != d || s.omega_sum.size() != d ||
      bad(s.shifts) || bad(s.prev_shifts) || bad(s.momenta) ||
      bad(s.messages) || bad(s.noise)) {
    throw StateError("optimizer state does not match problem '" + p.name() +
                     "' (d=" + std::to_string(d) + ", n=" + std::to_string(n) +
                     ")");
  }
}

void Prepare(const OptimizerState& s, const Problem& p, const HyperParams& hp) {
  Validate(hp);
  CheckState(s, p);
}

// w_i for step `t`, written into state.noise[i] and added to message i.
void AddDpNoise(OptimizerState& s, const GradientOracle& oracle,
                const HyperParams& hp, std::size_t i, std::uint64_t t) {
  DenseVector& w = s.noise[i];
  w.SetZero();
  CounterEngine engine =
      RngStream(oracle.seed(), {i, StreamPurpose::kDpNoise}).ForStep(t);
  AddGaussianNoise(engine, hp.sigma_omega, w);
  s.messages[i] += w;
}

void AccumulateNoise(OptimizerState& s, double inv_n) {
  DenseVector mean_noise;
  PairwiseSumInto(s.noise, mean_noise);
  Axpy(inv_n, mean_noise, s.omega_sum);
}

// g += scale * sum_i messages_i
void ServerAccumulate(OptimizerState& s, double scale) {
  DenseVector total;
  PairwiseSumInto(s.messages, total);
  Axpy(scale, total, s.g);
}

}  // namespace

std::string ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kClipSgd:
      return "clip_sgd";
    case Algorithm::kClip21Sgd:
      return "clip21_sgd";
    case Algorithm::kClip21Sgd2M:
      return "clip21_sgd2m";
    case Algorithm::kClip21Ideal:
      return "clip21_ideal";
    case Algorithm::kSgdm:
      return "sgdm";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "clip_sgd") return Algorithm::kClipSgd;
  if (name == "clip21_sgd") return Algorithm::kClip21Sgd;
  if (name == "clip21_sgd2m") return Algorithm::kClip21Sgd2M;
  if (name == "clip21_ideal") return Algorithm::kClip21Ideal;
  if (name == "sgdm") return Algorithm::kSgdm;
  throw ConfigError("unknown algorithm '" + name + "'");
}

void Validate(const HyperParams& hp) {
  if (!(hp.gamma > 0.0) || !std::isfinite(hp.gamma))
    throw InvalidParameterError("gamma must be positive");
  if (!(hp.tau > 0.0)) throw InvalidParameterError("tau must be positive");
  if (!(hp.beta > 0.0 && hp.beta <= 1.0))
    throw InvalidParameterError("beta must lie in (0, 1]");
  if (!(hp.beta_hat > 0.0 && hp.beta_hat <= 1.0))
    throw InvalidParameterError("beta_hat must lie in (0, 1]");
  if (!(hp.sigma_omega >= 0.0) || !std::isfinite(hp.sigma_omega))
    throw InvalidParameterError("sigma_omega must be >= 0");
}

bool OptimizerState::AllFinite() const {
  if (!x.AllFinite() || !g.AllFinite() || !omega_sum.AllFinite()) return false;
  for (const auto* group : {&shifts, &momenta}) {
    for (const DenseVector& v : *group) {
      if (!v.AllFinite()) return false;
    }
  }
  return true;
}

OptimizerState InitialState(const Problem& problem, const DenseVector& x0) {
  const std::size_t d = problem.dim();
  const std::size_t n = problem.num_workers();
  if (x0.size() != d) {
    throw StateError("x0 has dimension " + std::to_string(x0.size()) +
                     ", problem expects " + std::to_string(d));
  }
  OptimizerState s;
  s.x = x0;
  s.g = DenseVector(d);
  s.omega_sum = DenseVector(d);
  s.shifts.assign(n, DenseVector(d));
  s.prev_shifts.assign(n, DenseVector(d));
  s.momenta.assign(n, DenseVector(d));
  s.messages.assign(n, DenseVector(d));
  s.noise.assign(n, DenseVector(d));
  return s;
}

DenseVector MeanShift(const OptimizerState& state) {
  DenseVector mean = PairwiseSum(state.shifts);
  mean *= 1.0 / static_cast<double>(state.shifts.size());
  return mean;
}

void ClipSgdStep(OptimizerState& s, const Problem& p, const GradientOracle& o,
                 const HyperParams& hp, const ExecPolicy& exec) {
  Prepare(s, p, hp);
  const std::size_t n = p.num_workers();
  const std::uint64_t t = s.t;
  const bool dp = hp.sigma_omega > 0.0;
  ParallelFor(n, exec.threads, [&](std::size_t i) {
    o.Draw(p, i, s.x, t, s.momenta[i]);
    s.messages[i] = s.momenta[i];
    ClipInPlace(s.messages[i], hp.tau);
    s.shifts[i] = s.messages[i];
    if (dp) AddDpNoise(s, o, hp, i, t);
  });
  const double inv_n = 1.0 / static_cast<double>(n);
  s.g.SetZero();
  ServerAccumulate(s, inv_n);
  if (dp) AccumulateNoise(s, inv_n);
  Axpy(-hp.gamma, s.g, s.x);
  s.t = t + 1;
}

void Clip21SgdStep(OptimizerState& s, const Problem& p, const GradientOracle& o,
                   const HyperParams& hp, const ExecPolicy& exec) {
  Prepare(s, p, hp);
  const std::size_t n = p.num_workers();
  const std::uint64_t next = s.t + 1;
  const bool dp = hp.sigma_omega > 0.0;
  Axpy(-hp.gamma, s.g, s.x);
  ParallelFor(n, exec.threads, [&](std::size_t i) {
    o.Draw(p, i, s.x, next, s.momenta[i]);
    s.prev_shifts[i] = s.shifts[i];
    DenseVector& c = s.messages[i];
    c = s.momenta[i];
    c -= s.shifts[i];
    ClipInPlace(c, hp.tau);
    Axpy(1.0, c, s.shifts[i]);
    if (dp) AddDpNoise(s, o, hp, i, next);
  });
  const double inv_n = 1.0 / static_cast<double>(n);
  ServerAccumulate(s, inv_n);
  if (dp) AccumulateNoise(s, inv_n);
  s.t = next;
}

void Clip21Sgd2MStep(OptimizerState& s, const Problem& p,
                     const GradientOracle& o, const HyperParams& hp,
                     const ExecPolicy& exec) {
  Prepare(s, p, hp);
  const std::size_t n = p.num_workers();
  const std::uint64_t next = s.t + 1;
  const bool dp = hp.sigma_omega > 0.0;
  const double keep = 1.0 - hp.beta;
  Axpy(-hp.gamma, s.g, s.x);
  ParallelFor(n, exec.threads, [&](std::size_t i) {
    DenseVector& c = s.messages[i];
    DenseVector& v = s.momenta[i];
    o.Draw(p, i, s.x, next, c);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = keep * v[k] + hp.beta * c[k];
    }
    s.prev_shifts[i] = s.shifts[i];
    c = v;
    c -= s.shifts[i];
    ClipInPlace(c, hp.tau);
    Axpy(hp.beta_hat, c, s.shifts[i]);
    if (dp) AddDpNoise(s, o, hp, i, next);
  });
  const double inv_n = 1.0 / static_cast<double>(n);
  ServerAccumulate(s, hp.beta_hat / static_cast<double>(n));
  if (dp) AccumulateNoise(s, inv_n);
  s.t = next;
}

void Clip21IdealStep(OptimizerState& s, const Problem& p,
                     const GradientOracle& o, const HyperParams& hp,
                     const ExecPolicy& exec) {
  Prepare(s, p, hp);
  const std::size_t n = p.num_workers();
  const std::uint64_t next = s.t + 1;
  Axpy(-hp.gamma, s.g, s.x);
  ParallelFor(n, exec.threads, [&](std::size_t i) {
    p.Gradient(i, s.x, s.prev_shifts[i]);
    o.Draw(p, i, s.x, next, s.momenta[i]);
    DenseVector& c = s.messages[i];
    c = s.momenta[i];
    c -= s.prev_shifts[i];
    ClipInPlace(c, hp.tau);
    s.shifts[i] = s.prev_shifts[i];
    s.shifts[i] += c;
  });
  PairwiseSumInto(s.shifts, s.g);
  s.g *= 1.0 / static_cast<double>(n);
  s.t = next;
}

void SgdmStep(OptimizerState& s, const Problem& p, const GradientOracle& o,
              const HyperParams& hp, const ExecPolicy& exec) {
  Prepare(s, p, hp);
  const std::size_t n = p.num_workers();
  const std::uint64_t next = s.t + 1;
  Axpy(-hp.gamma, s.g, s.x);
  ParallelFor(n, exec.threads, [&](std::size_t i) {
    o.Draw(p, i, s.x, next, s.momenta[i]);
    s.prev_shifts[i] = s.shifts[i];
    DenseVector& c = s.messages[i];
    c = s.momenta[i];
    c -= s.shifts[i];
    Axpy(hp.beta_hat, c, s.shifts[i]);
  });
  ServerAccumulate(s, hp.beta_hat / static_cast<double>(n));
  s.t = next;
}

void Step(Algorithm algorithm, OptimizerState& state, const Problem& problem,
          const GradientOracle& oracle, const HyperParams& hp,
          const ExecPolicy& exec) {
  switch (algorithm) {
    case Algorithm::kClipSgd:
      return ClipSgdStep(state, problem, oracle, hp, exec);
    case Algorithm::kClip21Sgd:
      return Clip21SgdStep(state, problem, oracle, hp, exec);
    case Algorithm::kClip21Sgd2M:
      return Clip21Sgd2MStep(state, problem, oracle, hp, exec);
    case Algorithm::kClip21Ideal:
      return Clip21IdealStep(state, problem, oracle, hp, exec);
    case Algorithm::kSgdm:
      return SgdmStep(state, problem, oracle, hp, exec);
  }
}

std::size_t ClipActiveCount(Algorithm algorithm, const OptimizerState& state,
                            const HyperParams& hp) {
  if (algorithm == Algorithm::kSgdm) return 0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < state.num_workers(); ++i) {
    if (Norm(state.momenta[i] - state.prev_shifts[i]) > hp.tau) ++active;
  }
  return active;
}

}  // namespace clipsim
