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

#ifndef CLIPSIM_DATASET_H_
#define CLIPSIM_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace clipsim {

struct SparseEntry {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
  friend auto operator<=>(const SparseEntry&, const SparseEntry&) = default;
};

using SparseRow = std::vector<SparseEntry>;

// Binary-labelled sparse design matrix. Indices are 0-based and strictly
// increasing within a row; labels are -1 or +1.
struct SparseDataset {
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

// Reads LibSVM text ("<label> <idx>:<val> ...", 1-based indices). The two
// distinct raw labels map to -1 and +1 in ascending numeric order. Throws
// ParseError (with line number) on malformed lines and
// UnsupportedDatasetError on more than two labels.
SparseDataset LoadLibsvm(const std::string& path);
SparseDataset ParseLibsvm(const std::string& text,
                          const std::string& source = "<memory>");
void WriteLibsvm(const SparseDataset& data, const std::string& path);

// Scales each nonempty row to unit Euclidean norm. All-zero rows stay as they
// are.
SparseDataset NormalizeRows(SparseDataset data);

// Shuffles rows with `seed` and deals them into `n_workers` contiguous shards
// whose sizes differ by at most one. Every shard keeps the full `dim`.
std::vector<SparseDataset> Partition(const SparseDataset& data,
                                     std::size_t n_workers,
                                     std::uint64_t seed);

// Deterministic synthetic data: a random linear separator with label noise.
// `density` is the fraction of nonzero features per row.
SparseDataset MakeSyntheticDataset(std::size_t rows, std::size_t dim,
                                   double density, std::uint64_t seed);

}  // namespace clipsim

#endif  // CLIPSIM_DATASET_H_
