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

#include "clipsim/clip.h"

#include <cmath>

#include "clipsim/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace clipsim {
namespace {

TEST(ClipTest, InsideBallIsIdentity) {
  const DenseVector x{0.3, -0.4};
  EXPECT_EQ(Clip(x, 1.0), x);
  EXPECT_EQ(Clip(x, 0.5), x);
}

TEST(ClipTest, OutsideBallIsRescaled) {
  const DenseVector clipped = Clip(DenseVector{3.0, 4.0}, 1.0);
  EXPECT_DOUBLE_EQ(clipped[0], 0.6);
  EXPECT_DOUBLE_EQ(clipped[1], 0.8);
}

TEST(ClipTest, ScalarExample) {
  EXPECT_EQ(Clip(DenseVector{-3.0}, 1.0), (DenseVector{-1.0}));
  EXPECT_EQ(Clip(DenseVector{3.0}, 1.0), (DenseVector{1.0}));
}

TEST(ClipTest, ZeroVectorStaysZero) {
  EXPECT_EQ(Clip(DenseVector(3), 0.1), DenseVector(3));
}

TEST(ClipTest, NonPositiveTauThrows) {
  EXPECT_THROW(Clip(DenseVector{1.0}, 0.0), InvalidParameterError);
  EXPECT_THROW(Clip(DenseVector{1.0}, -1.0), InvalidParameterError);
  EXPECT_THROW(Clip(DenseVector{1.0}, std::nan("")), InvalidParameterError);
}

TEST(ClipTest, SentinelNeverClips) {
  const DenseVector x{1e12, -1e12};
  EXPECT_EQ(Clip(x, kNoClipping), x);
}

TEST(ClipTest, InPlaceReportsBranch) {
  DenseVector inside{0.1};
  DenseVector outside{2.0};
  EXPECT_FALSE(ClipInPlace(inside, 1.0));
  EXPECT_TRUE(ClipInPlace(outside, 1.0));
  EXPECT_EQ(outside, (DenseVector{1.0}));
}

// Norm bound, direction preservation, residual identity and idempotence on
// random inputs across many scales.
TEST(ClipTest, PropertiesOnRandomInputs) {
  testing::Gen gen(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = gen.Index(1, 6);
    const DenseVector x = gen.Vector(d, gen.Scale(-4, 4));
    const double tau = gen.Scale(-4, 4);
    const DenseVector c = Clip(x, tau);
    const double nx = Norm(x);

    EXPECT_LE(Norm(c), tau * (1 + 1e-12));
    EXPECT_NEAR(Norm(c), std::min(nx, tau), 1e-12 * std::max(nx, tau));
    EXPECT_GE(Dot(c, x), 0.0);
    EXPECT_NEAR(Norm(c - x), std::max(nx - tau, 0.0), 1e-9 * std::max(nx, tau));
    EXPECT_NEAR(ClipResidualNorm(x, tau), std::max(nx - tau, 0.0),
                1e-9 * std::max(nx, tau));
    const DenseVector cc = Clip(c, tau);
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_NEAR(cc[j], c[j], 1e-12 * tau);
    }
  }
}

}  // namespace
}  // namespace clipsim
