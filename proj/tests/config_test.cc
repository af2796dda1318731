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

#include "clipsim/config.h"

#include <string>

#include "clipsim/calibration.h"
#include "clipsim/diagnostics.h"
#include "clipsim/errors.h"
#include "gtest/gtest.h"

namespace clipsim {
namespace {

constexpr char kQuadratic[] = R"(
[problem]
kind = quadratic
workers = 3
smoothness = 2
dim = 2
x0 = 0, -1

[oracle]
kind = three_point
sigma = 5

[algorithm]
name = clip21_sgd2m
gamma = 0.25
tau = 0.1
beta = 0.2
beta_hat = 0.5

[run]
T = 300
seed = 9
threads = 2
lyapunov = true
)";

TEST(ParseRunConfigTest, ReadsAllSections) {
  const RunConfig c = ParseRunConfig(kQuadratic);
  EXPECT_EQ(c.problem.kind, "quadratic");
  EXPECT_EQ(c.problem.workers, 3u);
  EXPECT_EQ(c.problem.smoothness, 2.0);
  ASSERT_EQ(c.problem.x0.size(), 2u);
  EXPECT_EQ(c.problem.x0[1], -1.0);
  EXPECT_EQ(c.oracle.kind, OracleKind::kThreePoint);
  EXPECT_EQ(c.oracle.sigma, 5.0);
  EXPECT_EQ(c.algorithm.algorithm, Algorithm::kClip21Sgd2M);
  EXPECT_EQ(c.algorithm.hp.gamma, 0.25);
  EXPECT_EQ(c.algorithm.hp.tau, 0.1);
  EXPECT_EQ(c.algorithm.hp.beta, 0.2);
  EXPECT_EQ(c.algorithm.hp.beta_hat, 0.5);
  EXPECT_FALSE(c.algorithm.auto_params);
  EXPECT_EQ(c.T, 300u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.threads, 2);
  EXPECT_TRUE(c.lyapunov);
  EXPECT_TRUE(ValidateConfig(c).empty());
}

TEST(ParseRunConfigTest, UnknownKeysAreErrors) {
  EXPECT_THROW(ParseRunConfig("[algorithm]\nstepsize = 1\n"), ConfigError);
  EXPECT_THROW(ParseRunConfig("[extra]\nx = 1\n"), ConfigError);
}

TEST(ParseRunConfigTest, ReportsEveryBadValue) {
  try {
    ParseRunConfig("[algorithm]\ntau = abc\nbeta = xyz\n[run]\nT = -\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("algorithm.tau"), std::string::npos) << what;
    EXPECT_NE(what.find("algorithm.beta"), std::string::npos) << what;
    EXPECT_NE(what.find("run.T"), std::string::npos) << what;
  }
}

TEST(ParseRunConfigTest, AutoStepsize) {
  const RunConfig c = ParseRunConfig("[algorithm]\ngamma = auto\n");
  EXPECT_TRUE(c.algorithm.auto_params);
}

TEST(ValidateConfigTest, CollectsAllErrors) {
  RunConfig c;
  c.algorithm.hp.tau = -1.0;
  c.algorithm.hp.beta = 2.0;
  c.T = 0;
  try {
    ValidateConfig(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("algorithm.tau"), std::string::npos);
    EXPECT_NE(what.find("algorithm.beta"), std::string::npos);
    EXPECT_NE(what.find("run.T"), std::string::npos);
  }
}

TEST(ValidateConfigTest, RejectsMissingDataset) {
  RunConfig c;
  c.problem.kind = "logreg";
  c.problem.dataset = "does_not_exist.libsvm";
  EXPECT_THROW(ValidateConfig(c), ConfigError);
}

TEST(ValidateConfigTest, RejectsExclusiveNoiseSettings) {
  RunConfig c;
  c.algorithm.noise_ratio = 1.0;
  c.algorithm.dp_epsilon = 0.5;
  EXPECT_THROW(ValidateConfig(c), ConfigError);
}

TEST(ValidateConfigTest, AutoOnLogregNeedsLowerBound) {
  RunConfig c;
  c.problem.kind = "synthetic_logreg";
  c.problem.dim = 10;
  c.algorithm.auto_params = true;
  EXPECT_THROW(ValidateConfig(c), ConfigError);
  c.problem.f_lower = 0.0;
  EXPECT_NO_THROW(ValidateConfig(c));
}

TEST(ValidateConfigTest, WarnsAboutIgnoredNoise) {
  RunConfig c;
  c.algorithm.algorithm = Algorithm::kSgdm;
  c.algorithm.hp.sigma_omega = 1.0;
  EXPECT_EQ(ValidateConfig(c).size(), 1u);
  c.algorithm.algorithm = Algorithm::kClipSgd;
  EXPECT_EQ(ValidateConfig(c).size(), 1u);
  c.algorithm.algorithm = Algorithm::kClip21Sgd2M;
  EXPECT_TRUE(ValidateConfig(c).empty());
}

TEST(BuildProblemTest, Kinds) {
  RunConfig c;
  c.problem.kind = "chen";
  EXPECT_EQ(BuildProblem(c)->name(), "chen");
  c.problem.kind = "synthetic_logreg";
  c.problem.workers = 4;
  c.problem.rows = 20;
  c.problem.dim = 15;
  c.problem.density = 0.3;
  const auto p = BuildProblem(c);
  EXPECT_EQ(p->num_workers(), 4u);
  EXPECT_EQ(p->dim(), 15u);
}

TEST(StartPointTest, DimensionMismatch) {
  RunConfig c;
  c.problem.x0 = {1.0, 2.0, 3.0};
  const auto p = MakeScaledQuadratic(1.0, 2, 1);
  EXPECT_THROW(StartPoint(c, *p), ConfigError);
  c.problem.x0 = {1.0, 2.0};
  EXPECT_EQ(StartPoint(c, *p)[1], 2.0);
}

TEST(ResolveParamsTest, NoiseFromPrivacyBudget) {
  RunConfig c;
  c.algorithm.hp.tau = 0.5;
  c.algorithm.dp_epsilon = 1.0;
  c.T = 100;
  const auto p = BuildProblem(c);
  const ResolvedParams r = ResolveParams(c, *p);
  EXPECT_EQ(r.hp.sigma_omega, DpSigma(0.5, 1.0, 1e-5, 100));
}

TEST(ResolveParamsTest, NoiseFromRatio) {
  RunConfig c;
  c.algorithm.hp.tau = 0.25;
  c.algorithm.noise_ratio = 8.0;
  const auto p = BuildProblem(c);
  EXPECT_EQ(ResolveParams(c, *p).hp.sigma_omega, 2.0);
}

TEST(ResolveParamsTest, DeterministicAutoOnChen) {
  RunConfig c;
  c.problem.kind = "chen";
  c.problem.x0 = {2.0};
  c.algorithm.auto_params = true;
  c.algorithm.hp.tau = 1.0;
  const auto p = BuildProblem(c);
  const ResolvedParams r = ResolveParams(c, *p);
  EXPECT_TRUE(r.calibrated);
  DeterministicInputs in;
  in.L = 1.0;
  in.B = 5.0;
  in.tau = 1.0;
  in.geometry = MeasureInitialGeometry(*p, DenseVector{2.0});
  const DeterministicParams want = ComputeDeterministicParams(in);
  EXPECT_EQ(r.hp.gamma, want.gamma);
  EXPECT_EQ(r.hp.beta, want.beta);
  EXPECT_EQ(*r.lyapunov_eta, 0.2);
}

TEST(ResolveParamsTest, StochasticAutoIsValid) {
  RunConfig c;
  c.problem.dim = 3;
  c.problem.workers = 4;
  c.problem.x0 = {1.0, -1.0, 0.5};
  c.oracle.kind = OracleKind::kAdditiveGaussian;
  c.oracle.sigma = 0.1;
  c.algorithm.auto_params = true;
  c.algorithm.hp.tau = 0.5;
  c.T = 1000;
  const auto p = BuildProblem(c);
  const ResolvedParams r = ResolveParams(c, *p);
  EXPECT_TRUE(r.calibrated);
  EXPECT_GT(r.hp.gamma, 0.0);
  EXPECT_LE(r.hp.beta, 0.5);
  EXPECT_NEAR(r.hp.gamma, r.hp.beta / 6.0, 1e-15);
}

}  // namespace
}  // namespace clipsim
