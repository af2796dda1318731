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

#include "clipsim/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clipsim/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace clipsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent transcription of the deterministic restrictions.
bool DeterministicFeasible(double L, double B, double tau, double bh,
                           double gamma, double Delta) {
  const double beta = 4 * L * gamma;
  const double eta = tau / B;
  const double a = (beta * beta * L * L * gamma * gamma * 32 +
                    L * L * gamma * gamma * 96) /
                   (bh * bh * eta * eta);
  const double slack = 1e-12;
  return gamma <= (1 / (12 * L)) * (1 + slack) &&
         gamma <= tau / (12 * B * L) * (1 + slack) && 0.625 - a >= -slack &&
         (8.0 / 3) * beta * std::sqrt(L * Delta) <= bh * tau / 4 * (1 + slack) &&
         1.75 * beta * (B - tau) <= bh * tau / 4 * (1 + slack);
}

// Independent transcription of every momentum cap; returns the smallest.
double StochasticCap(const StochasticInputs& in, double bh) {
  const double L = in.L, D = in.Delta, tau = in.tau, B = in.B;
  const double b = in.b, c = in.c, s = in.sigma;
  const double T = static_cast<double>(in.T), n = static_cast<double>(in.n);
  const double eta = tau / B;
  const double b1 = std::sqrt(3 * std::log(14 * (T + 1) / in.alpha));
  const double k = std::sqrt(2.0) * (1 + b1) * s * std::sqrt(T);
  auto safe = [](double num, double den, double p) {
    return den == 0 ? kInf : std::pow(num / den, p);
  };
  const double r = std::sqrt(L * D);
  double cap = 0.5;
  cap = std::min(cap, safe(3 * bh * tau, 64 * r, 1));
  cap = std::min(cap, safe(bh * tau, 14 * (B - tau), 1));
  cap = std::min(cap, safe(bh * tau, 22 * b, 1));
  cap = std::min(cap, safe(L * D * bh * eta, 8 * T * b * b, 1.0 / 3));
  cap = std::min(cap, safe(L * D * bh * bh * eta * eta, 32 * T * b * b, 0.25));
  cap = std::min(cap, safe(L * D * n, 8 * T * c * c, 0.5));
  const double sn = std::sqrt(n);
  cap = std::min(cap, safe(3 * L * D * sn * bh * eta, 16 * k * B, 0.5));
  cap = std::min(cap, safe(3 * L * D * bh * eta * sn,
                           16 * k * (3 * r + 1.5 * (B - tau) + 1.5 * b),
                           1.0 / 3));
  cap = std::min(cap, safe(9 * L * D * bh * eta * sn,
                           8 * k * (11 * r + 3 * (B - tau + b)), 0.25));
  cap = std::min(cap, safe(3 * L * D * bh * bh * eta * eta * sn,
                           64 * k * (3 * r + 1.5 * (B - tau) + 1.5 * b),
                           1.0 / 3));
  cap = std::min(cap, safe(3 * L * D * sn,
                           16 * k * (3 * r + 1.5 * (B - tau) + 1.5 * b), 1));
  cap = std::min(cap, safe(9 * L * D * bh * bh * eta * eta * sn,
                           32 * k * (11 * r + 3 * (2 * B - tau)), 0.25));
  cap = std::min(cap, safe(9 * L * D * sn, k * (11 * r + 3 * (B - tau + b)),
                           0.5));
  return cap;
}

TEST(TheoryConstantsTest, KnownValues) {
  const TheoryConstants k = ComputeTheoryConstants(1.0, 0.0, 99, 1, 2, 0.1);
  EXPECT_NEAR(k.b * k.b, 18.785323857540273, 1e-12);
  EXPECT_EQ(k.a, 0.0);
  const double radius = std::sqrt(2.0) + 2 * std::sqrt(3 * std::log(6 * 100 / 0.1));
  EXPECT_NEAR(k.c, radius, 1e-12);

  const TheoryConstants dp = ComputeTheoryConstants(0.0, 2.0, 99, 4, 9, 0.1);
  EXPECT_NEAR(dp.a, radius * 3 * 2 * std::sqrt(99.0 / 4), 1e-9);
  EXPECT_EQ(dp.b, 0.0);
  EXPECT_EQ(dp.c, 0.0);
}

TEST(TheoryConstantsTest, InvalidInputs) {
  EXPECT_THROW(ComputeTheoryConstants(1, 0, 10, 1, 1, 0.0), InvalidParameterError);
  EXPECT_THROW(ComputeTheoryConstants(-1, 0, 10, 1, 1, 0.1), InvalidParameterError);
  EXPECT_THROW(ComputeTheoryConstants(1, 0, 0, 1, 1, 0.1), InvalidParameterError);
}

TEST(InitialLyapunovTest, DefaultInitialization) {
  const InitialGeometry g{2.0, 3.0, 5.0};
  EXPECT_DOUBLE_EQ(InitialLyapunov(g, 0.1, 0.4, 0.5, 0.25),
                   2.0 + 8 * 0.1 * 0.4 / (0.25 * 0.0625) * 3.0 + 2 * 0.1 / 0.4 * 5.0);
}

TEST(DeterministicParamsTest, ChenExampleSatisfiesRestrictions) {
  DeterministicInputs in;
  in.L = 1.0;
  in.B = 5.0;
  in.tau = 1.0;
  in.beta_hat = 1.0;
  in.Delta = 2.0;
  const DeterministicParams p = ComputeDeterministicParams(in);
  EXPECT_DOUBLE_EQ(p.beta, 4 * p.gamma);
  EXPECT_DOUBLE_EQ(p.eta, 0.2);
  EXPECT_TRUE(DeterministicFeasible(1, 5, 1, 1, p.gamma, 2.0));
  EXPECT_FALSE(DeterministicFeasible(1, 5, 1, 1, p.gamma * (1 + 1e-9), 2.0));
}

TEST(DeterministicParamsTest, NeedsDeltaOrGeometry) {
  DeterministicInputs in;
  EXPECT_THROW(ComputeDeterministicParams(in), InvalidParameterError);
}

TEST(DeterministicParamsTest, VacuousWhenNoClipping) {
  DeterministicInputs in;
  in.L = 2.0;
  in.B = 0.5;
  in.tau = 1.0;
  in.Delta = 1.0;
  const DeterministicParams p = ComputeDeterministicParams(in);
  EXPECT_TRUE(p.vacuous);
  EXPECT_DOUBLE_EQ(p.gamma, 1.0 / 24);
}

// Random inputs: the output satisfies every restriction and is maximal
// (a slightly larger stepsize breaks one, unless the cap binds).
TEST(DeterministicParamsTest, FeasibleAndMaximalOnRandomInputs) {
  testing::Gen gen(31);
  for (int trial = 0; trial < 500; ++trial) {
    DeterministicInputs in;
    in.L = gen.Scale(-2, 2);
    in.tau = gen.Scale(-3, 1);
    in.B = in.tau * (1.01 + gen.Scale(-1, 3));
    in.beta_hat = gen.Uniform(0.01, 1.0);
    const bool use_geometry = trial % 2 == 0;
    InitialGeometry geometry{gen.Scale(-3, 2), gen.Scale(-3, 2), gen.Scale(-3, 2)};
    if (use_geometry) {
      in.geometry = geometry;
    } else {
      in.Delta = gen.Scale(-3, 3);
    }
    const DeterministicParams p = ComputeDeterministicParams(in);
    auto delta_at = [&](double gamma) {
      if (!use_geometry) return *in.Delta;
      return InitialLyapunov(geometry, gamma, 4 * in.L * gamma, in.beta_hat,
                             in.tau / in.B);
    };
    ASSERT_GT(p.gamma, 0.0);
    ASSERT_TRUE(DeterministicFeasible(in.L, in.B, in.tau, in.beta_hat, p.gamma,
                                      delta_at(p.gamma)));
    const double cap = std::min(1 / (12 * in.L), in.tau / (12 * in.B * in.L));
    if (p.gamma < cap * (1 - 1e-9)) {
      const double bigger = p.gamma * (1 + 1e-9);
      EXPECT_FALSE(DeterministicFeasible(in.L, in.B, in.tau, in.beta_hat,
                                         bigger, delta_at(bigger)));
    }
  }
}

TEST(StochasticParamsTest, MatchesIndependentCapsOnRandomInputs) {
  testing::Gen gen(41);
  for (int trial = 0; trial < 500; ++trial) {
    StochasticInputs in;
    in.L = gen.Scale(-1, 2);
    in.Delta = gen.Scale(-2, 2);
    in.tau = gen.Scale(-3, 0);
    in.sigma = trial % 5 == 0 ? 0.0 : gen.Scale(-3, 1);
    in.n = gen.Index(1, 100);
    in.T = gen.Index(10, 100000);
    in.alpha = 0.1;
    const double sigma_omega = trial % 3 == 0 ? gen.Scale(-2, 1) : 0.0;
    const TheoryConstants k = ComputeTheoryConstants(in.sigma, sigma_omega, in.T,
                                                     in.n, 5, in.alpha);
    in.a = k.a;
    in.b = k.b;
    in.c = k.c;
    in.B = std::max(3 * in.tau, gen.Scale(-2, 1) + k.b);
    in.beta_hat_request = gen.Uniform(0.01, 1.0);
    if (in.sigma == 0.0 && in.B <= in.tau) continue;

    const StochasticParams p = ComputeStochasticParams(in);
    double bh = std::min(in.beta_hat_request, 1.0);
    if (in.a > 0) bh = std::min(bh, std::sqrt(in.L * in.Delta) / in.a);
    ASSERT_DOUBLE_EQ(p.beta_hat, bh);
    ASSERT_NEAR(p.gamma, p.beta / (6 * in.L), 1e-15 * p.gamma);
    const double cap = StochasticCap(in, bh);
    ASSERT_LE(p.beta, cap * (1 + 1e-12));
    const double eta = in.tau / in.B;
    const double lg = in.L * p.gamma;
    const double quad = 1.0 / 3 - (32 * p.beta * p.beta * lg * lg + 96 * lg * lg) /
                                      (bh * bh * eta * eta);
    ASSERT_GE(quad, -1e-12);
    if (p.binding != "quadratic") {
      EXPECT_NEAR(p.beta, cap, 1e-12 * cap) << p.binding;
    }
  }
}

TEST(StochasticParamsTest, NoiseFreeFallsBackToDeterministic) {
  StochasticInputs in;
  in.L = 1.0;
  in.Delta = 1.0;
  in.B = 0.5;
  in.tau = 1.0;
  const StochasticParams p = ComputeStochasticParams(in);
  EXPECT_TRUE(p.fell_back_to_deterministic);
}

TEST(StochasticParamsTest, BoundNamesAreReported) {
  StochasticInputs in;
  in.L = 1.0;
  in.Delta = 1.0;
  in.B = 3.0;
  in.tau = 1.0;
  in.sigma = 0.1;
  in.T = 1000;
  const auto bounds = StochasticBetaBounds(in, 1.0);
  EXPECT_EQ(bounds.size(), 15u);
  for (const auto& b : bounds) EXPECT_GT(b.value, 0.0) << b.name;
}

TEST(DpSigmaTest, KnownValue) {
  EXPECT_NEAR(DpSigma(1.0, 0.5, 1e-5, 100), 2194.599736829005, 1e-9);
}

TEST(DpSigmaTest, LinearInTau) {
  const double base = DpSigma(0.3, 0.5, 1e-5, 1000);
  EXPECT_EQ(DpSigma(0.6, 0.5, 1e-5, 1000), 2 * base);
  EXPECT_EQ(DpSigma(0.15, 0.5, 1e-5, 1000), 0.5 * base);
  EXPECT_NEAR(DpSigma(0.9, 0.5, 1e-5, 1000), 3 * base, 1e-15 * 3 * base);
}

TEST(DpSigmaTest, InvalidInputs) {
  EXPECT_THROW(DpSigma(0.0, 0.5, 1e-5, 10), InvalidParameterError);
  EXPECT_THROW(DpSigma(1.0, 0.0, 1e-5, 10), InvalidParameterError);
  EXPECT_THROW(DpSigma(1.0, 1.5, 1e-5, 10), InvalidParameterError);
  EXPECT_THROW(DpSigma(1.0, 0.5, 1.0, 10), InvalidParameterError);
  EXPECT_THROW(DpSigma(1.0, 0.5, 1e-5, 0), InvalidParameterError);
}

TEST(PrivacyTest, GaussianMechanismInvertsDpSigma) {
  for (double eps : {0.1, 0.5, 1.0}) {
    for (std::uint64_t T : {10, 100, 5000}) {
      const double delta = 1e-5;
      const double sigma = DpSigma(2.0, eps, delta, T);
      const PerStepPrivacy step = PerStepBudget(eps, delta, T);
      EXPECT_NEAR(GaussianMechanismEpsilon(sigma, 2.0, step.delta), step.epsilon,
                  1e-12 * step.epsilon);
    }
  }
  EXPECT_EQ(GaussianMechanismEpsilon(0.0, 1.0, 1e-7), kInf);
}

TEST(PrivacyTest, PerStepDeltaNeverOvershoots) {
  testing::Gen gen(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const double delta = gen.Scale(-9, -1);
    const std::uint64_t T = gen.Index(1, 100000);
    const double step = PerStepDelta(delta, T);
    EXPECT_LE(step * static_cast<double>(T), delta);
    EXPECT_NEAR(step, delta / static_cast<double>(T), 1e-14 * step);
  }
}

TEST(PrivacyTest, ComposedSpendWithinBudget) {
  for (double eps : {0.5, 1.0}) {
    for (std::uint64_t T : {100, 1000}) {
      const double delta = 1e-5;
      const PrivacySpend spend =
          Account(PrivacySpend{}, PerStepBudget(eps, delta, T), T, delta);
      EXPECT_EQ(spend.steps, T);
      EXPECT_LE(spend.epsilon, eps);
      EXPECT_LE(spend.delta, 2 * delta);
    }
  }
}

TEST(PrivacyTest, AccountIsIncremental) {
  const PerStepPrivacy step{0.01, 1e-8};
  const PrivacySpend half = Account(PrivacySpend{}, step, 50, 1e-5);
  const PrivacySpend full = Account(half, step, 50, 1e-5);
  const PrivacySpend direct = Account(PrivacySpend{}, step, 100, 1e-5);
  EXPECT_EQ(full.steps, 100u);
  EXPECT_DOUBLE_EQ(full.epsilon, direct.epsilon);
  EXPECT_DOUBLE_EQ(full.delta, direct.delta);
  EXPECT_GT(direct.epsilon, half.epsilon);
}

}  // namespace
}  // namespace clipsim
