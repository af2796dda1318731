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

#include <cmath>
#include <limits>

#include "clipsim/calibration.h"
#include "clipsim/errors.h"
#include "gtest/gtest.h"

namespace clipsim {
namespace {

TEST(RunTest, RejectsZeroHorizon) {
  const auto p = MakeScaledQuadratic(1.0, 2, 2);
  const GradientOracle oracle({}, 1);
  EXPECT_THROW(clipsim::Run(Algorithm::kClip21Sgd, *p, oracle, HyperParams{}, 0),
               InvalidParameterError);
}

TEST(RunTest, RecordsOnePerStep) {
  const auto p = MakeScaledQuadratic(1.0, 2, 3);
  const GradientOracle oracle({OracleKind::kAdditiveGaussian, 0.1}, 4);
  RunOptions opts;
  opts.x0 = DenseVector{1.0, 2.0};
  const RunResult r = clipsim::Run(Algorithm::kClip21Sgd2M, *p, oracle,
                          HyperParams{0.1, 0.5, 0.5, 1.0, 0.0}, 37, opts);
  EXPECT_EQ(r.initial.t, 0u);
  EXPECT_DOUBLE_EQ(r.initial.grad_norm_sq, 5.0);
  EXPECT_DOUBLE_EQ(*r.initial.f_gap, 2.5);
  ASSERT_EQ(r.records.size(), 37u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].t, i + 1);
    EXPECT_LE(r.records[i].clip_active, 3u);
    EXPECT_FALSE(r.records[i].lyapunov.has_value());
  }
  EXPECT_EQ(r.final_state.t, 37u);
}

TEST(RunTest, ObserverSeesEveryStep) {
  const auto p = MakeChenExample();
  const GradientOracle oracle({}, 1);
  int calls = 0;
  RunOptions opts;
  opts.observer = [&](const OptimizerState& s, const RunRecord& rec) {
    ++calls;
    EXPECT_EQ(s.t, rec.t);
  };
  clipsim::Run(Algorithm::kClip21Sgd, *p, oracle, HyperParams{0.1, 1.0}, 12, opts);
  EXPECT_EQ(calls, 12);
}

TEST(RunTest, DivergenceIsReported) {
  const auto p = MakeScaledQuadratic(1.0, 1, 1);
  const GradientOracle oracle({}, 1);
  RunOptions opts;
  opts.x0 = DenseVector{1.0};
  HyperParams hp{1e200, 1.0, 1.0, 1.0, 0.0};
  try {
    clipsim::Run(Algorithm::kSgdm, *p, oracle, hp, 50, opts);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.step(), 1u);
    EXPECT_LE(e.step(), 50u);
  }
}

TEST(RunTest, NonPrivateRunsReportInfiniteEpsilon) {
  const auto p = MakeScaledQuadratic(1.0, 2, 2);
  const GradientOracle oracle({}, 1);
  const RunResult r =
      clipsim::Run(Algorithm::kClip21Sgd, *p, oracle, HyperParams{0.1, 1.0}, 5);
  for (const RunRecord& rec : r.records) {
    EXPECT_EQ(rec.eps_spent, std::numeric_limits<double>::infinity());
    EXPECT_EQ(rec.delta_spent, 0.0);
  }
}

TEST(RunTest, PrivateRunSpendsCalibratedBudget) {
  const auto p = MakeScaledQuadratic(1.0, 2, 4);
  const GradientOracle oracle({}, 1);
  const std::uint64_t T = 100;
  HyperParams hp{0.01, 0.5, 0.5, 0.5, DpSigma(0.5, 1.0, 1e-5, T)};
  RunOptions opts;
  opts.x0 = DenseVector{1.0, 1.0};
  const RunResult r = clipsim::Run(Algorithm::kClip21Sgd2M, *p, oracle, hp, T, opts);
  EXPECT_EQ(r.initial.eps_spent, 0.0);
  double prev = 0.0;
  for (const RunRecord& rec : r.records) {
    EXPECT_GT(rec.eps_spent, prev);
    prev = rec.eps_spent;
  }
  EXPECT_LE(r.records.back().eps_spent, 1.0);
  EXPECT_LE(r.records.back().delta_spent, 2e-5);
}

TEST(RunTest, LyapunovRecordedForMomentumMethod) {
  const auto p = MakeScaledQuadratic(1.0, 2, 2);
  const GradientOracle oracle({}, 1);
  RunOptions opts;
  opts.x0 = DenseVector{1.0, 0.0};
  opts.lyapunov_eta = 0.5;
  const RunResult r = clipsim::Run(Algorithm::kClip21Sgd2M, *p, oracle,
                          HyperParams{0.01, 0.5, 0.04, 1.0, 0.0}, 10, opts);
  ASSERT_TRUE(r.initial.lyapunov.has_value());
  for (const RunRecord& rec : r.records) ASSERT_TRUE(rec.lyapunov.has_value());
}

TEST(RunTest, AddsPrivacyNoiseOnlyForNoisyMethods) {
  HyperParams hp;
  hp.sigma_omega = 1.0;
  EXPECT_TRUE(AddsPrivacyNoise(Algorithm::kClip21Sgd2M, hp));
  EXPECT_TRUE(AddsPrivacyNoise(Algorithm::kClip21Sgd, hp));
  EXPECT_FALSE(AddsPrivacyNoise(Algorithm::kSgdm, hp));
  EXPECT_FALSE(AddsPrivacyNoise(Algorithm::kClip21Ideal, hp));
  hp.sigma_omega = 0.0;
  EXPECT_FALSE(AddsPrivacyNoise(Algorithm::kClip21Sgd2M, hp));
}

}  // namespace
}  // namespace clipsim
