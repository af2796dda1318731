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

#include "clipsim/dataset.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "clipsim/errors.h"
#include "gtest/gtest.h"

namespace clipsim {
namespace {

double RowNorm(const SparseRow& row) {
  double sq = 0.0;
  for (const auto& e : row) sq += e.value * e.value;
  return std::sqrt(sq);
}

TEST(LibsvmTest, ParsesIndicesLabelsAndDimension) {
  const SparseDataset data = ParseLibsvm("+1 1:0.5 3:2\n-1 2:1.5\n");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data.dim, 3u);
  EXPECT_EQ(data.labels, (std::vector<int>{1, -1}));
  EXPECT_EQ(data.rows[0], (SparseRow{{0, 0.5}, {2, 2.0}}));
  EXPECT_EQ(data.rows[1], (SparseRow{{1, 1.5}}));
}

TEST(LibsvmTest, CommentsAndBlankLinesAreSkipped) {
  const SparseDataset data =
      ParseLibsvm("# header\n\n1 1:1 # trailing\n\n0 2:1\n");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data.labels, (std::vector<int>{1, -1}));
}

TEST(LibsvmTest, ZeroOneLabelsMapToSigns) {
  const SparseDataset data = ParseLibsvm("0 1:1\n1 1:2\n0 1:3\n");
  EXPECT_EQ(data.labels, (std::vector<int>{-1, 1, -1}));
}

TEST(LibsvmTest, NonIncreasingIndexReportsLine) {
  try {
    ParseLibsvm("1 1:1 2:1\n-1 3:1 2:1\n", "bad.svm");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LibsvmTest, MalformedTokensThrow) {
  EXPECT_THROW(ParseLibsvm("abc 1:1\n"), ParseError);
  EXPECT_THROW(ParseLibsvm("1 0:1\n"), ParseError);
  EXPECT_THROW(ParseLibsvm("1 1:x\n"), ParseError);
  EXPECT_THROW(ParseLibsvm("1 1\n"), ParseError);
}

TEST(LibsvmTest, MulticlassIsRejected) {
  EXPECT_THROW(ParseLibsvm("1 1:1\n2 1:1\n3 1:1\n"), UnsupportedDatasetError);
}

TEST(LibsvmTest, WriteLoadRoundTripIsExact) {
  const SparseDataset data = MakeSyntheticDataset(20, 15, 0.3, 5);
  const auto path = std::filesystem::temp_directory_path() / "clipsim_rt.svm";
  WriteLibsvm(data, path.string());
  const SparseDataset back = LoadLibsvm(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(back.rows, data.rows);
  EXPECT_EQ(back.labels, data.labels);
}

TEST(LibsvmTest, MissingFileThrows) {
  EXPECT_ANY_THROW(LoadLibsvm("/nonexistent/clipsim.svm"));
}

TEST(DatasetTest, NormalizeRowsGivesUnitNorms) {
  SparseDataset data = ParseLibsvm("1 1:3 2:4\n-1 3:2\n1 1:0\n");
  data = NormalizeRows(std::move(data));
  EXPECT_DOUBLE_EQ(RowNorm(data.rows[0]), 1.0);
  EXPECT_DOUBLE_EQ(RowNorm(data.rows[1]), 1.0);
  EXPECT_DOUBLE_EQ(RowNorm(data.rows[2]), 0.0);
}

TEST(DatasetTest, PartitionIsBalancedAndCoversEveryRow) {
  const SparseDataset data = MakeSyntheticDataset(45, 10, 0.5, 2);
  for (std::size_t n : {1, 2, 4, 7, 45}) {
    const auto shards = Partition(data, n, 13);
    ASSERT_EQ(shards.size(), n);
    std::size_t lo = data.size();
    std::size_t hi = 0;
    std::vector<SparseRow> seen;
    for (const auto& s : shards) {
      lo = std::min(lo, s.size());
      hi = std::max(hi, s.size());
      EXPECT_EQ(s.dim, data.dim);
      seen.insert(seen.end(), s.rows.begin(), s.rows.end());
    }
    EXPECT_LE(hi - lo, 1u);
    std::vector<SparseRow> all = data.rows;
    std::sort(all.begin(), all.end());
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(seen, all);
  }
}

TEST(DatasetTest, PartitionDependsOnlyOnSeed) {
  const SparseDataset data = MakeSyntheticDataset(30, 10, 0.5, 2);
  const auto a = Partition(data, 3, 1);
  const auto b = Partition(data, 3, 1);
  const auto c = Partition(data, 3, 2);
  EXPECT_EQ(a[0].rows, b[0].rows);
  EXPECT_NE(a[0].rows, c[0].rows);
}

TEST(DatasetTest, PartitionNeedsEnoughRows) {
  const SparseDataset data = MakeSyntheticDataset(3, 4, 0.5, 2);
  EXPECT_ANY_THROW(Partition(data, 4, 0));
  EXPECT_ANY_THROW(Partition(data, 0, 0));
}

TEST(DatasetTest, SyntheticShape) {
  const SparseDataset data = MakeSyntheticDataset(44, 100, 0.2, 1);
  EXPECT_EQ(data.size(), 44u);
  EXPECT_EQ(data.dim, 100u);
  EXPECT_NE(std::count(data.labels.begin(), data.labels.end(), 1), 0);
  EXPECT_NE(std::count(data.labels.begin(), data.labels.end(), -1), 0);
}

}  // namespace
}  // namespace clipsim
