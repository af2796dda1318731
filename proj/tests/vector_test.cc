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

#include "clipsim/vector.h"

#include <vector>

#include "clipsim/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace clipsim {
namespace {

TEST(VectorTest, ArithmeticAndNorms) {
  const DenseVector a{3.0, 4.0};
  const DenseVector b{1.0, -2.0};
  EXPECT_EQ(a + b, (DenseVector{4.0, 2.0}));
  EXPECT_EQ(a - b, (DenseVector{2.0, 6.0}));
  EXPECT_EQ(2.0 * b, (DenseVector{2.0, -4.0}));
  EXPECT_DOUBLE_EQ(Dot(a, b), -5.0);
  EXPECT_DOUBLE_EQ(SquaredNorm(a), 25.0);
  EXPECT_DOUBLE_EQ(Norm(a), 5.0);
}

TEST(VectorTest, AxpyAccumulates) {
  DenseVector y{1.0, 1.0, 1.0};
  Axpy(0.5, DenseVector{2.0, 4.0, -2.0}, y);
  EXPECT_EQ(y, (DenseVector{2.0, 3.0, 0.0}));
}

TEST(VectorTest, SizeMismatchThrows) {
  DenseVector a(2);
  EXPECT_THROW(a += DenseVector(3), StateError);
  EXPECT_THROW(Dot(a, DenseVector(1)), StateError);
}

TEST(VectorTest, AllFiniteDetectsNan) {
  DenseVector v{1.0, 2.0};
  EXPECT_TRUE(v.AllFinite());
  v[1] = std::nan("");
  EXPECT_FALSE(v.AllFinite());
}

TEST(VectorTest, PairwiseSumMatchesSmallCases) {
  const std::vector<double> values = {1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_DOUBLE_EQ(PairwiseSum(values), 15.0);
  EXPECT_DOUBLE_EQ(PairwiseSum(std::vector<double>{}), 0.0);

  const std::vector<DenseVector> terms = {{1.0, 0.0}, {2.0, 1.0}, {3.0, 2.0}};
  EXPECT_EQ(PairwiseSum(terms), (DenseVector{6.0, 3.0}));
}

TEST(VectorTest, PairwiseSumIntoAgreesWithAllocatingForm) {
  testing::Gen gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.Index(1, 40);
    const std::size_t d = gen.Index(1, 8);
    std::vector<DenseVector> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(gen.Vector(d, 1e3));
    DenseVector out(d);
    PairwiseSumInto(terms, out);
    EXPECT_EQ(out, PairwiseSum(terms));
  }
}

TEST(VectorTest, PairwiseSumIsCloseToNaiveSum) {
  testing::Gen gen(11);
  std::vector<double> values(1000);
  double naive = 0.0;
  for (double& v : values) {
    v = gen.Uniform(-1.0, 1.0);
    naive += v;
  }
  EXPECT_NEAR(PairwiseSum(values), naive, 1e-12);
}

}  // namespace
}  // namespace clipsim
