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

#ifndef CLIPSIM_VECTOR_H_
#define CLIPSIM_VECTOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace clipsim {

// Fixed-length dense vector of doubles. Binary operations require equal
// lengths and throw StateError otherwise.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double value = 0.0)
      : entries_(dim, value) {}
  DenseVector(std::initializer_list<double> values) : entries_(values) {}
  explicit DenseVector(std::vector<double> values)
      : entries_(std::move(values)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  double* data() { return entries_.data(); }
  const double* data() const { return entries_.data(); }
  std::span<double> span() { return entries_; }
  std::span<const double> span() const { return entries_; }
  const std::vector<double>& values() const { return entries_; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void SetZero();
  bool AllFinite() const;

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double scale);

  // Exact element-wise equality (-0.0 == +0.0).
  friend bool operator==(const DenseVector& a, const DenseVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<double> entries_;
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator*(double scale, DenseVector a);

// Throws StateError when the lengths differ.
void CheckSameSize(const DenseVector& a, const DenseVector& b);

double Dot(const DenseVector& a, const DenseVector& b);
double SquaredNorm(const DenseVector& x);
double Norm(const DenseVector& x);

// y += alpha * x
void Axpy(double alpha, const DenseVector& x, DenseVector& y);

// Sum of `terms` by recursive halving over the index range. The grouping
// depends only on the number of terms, so the result is independent of the
// order in which the terms were produced.
DenseVector PairwiseSum(std::span<const DenseVector> terms);
void PairwiseSumInto(std::span<const DenseVector> terms, DenseVector& out);
double PairwiseSum(std::span<const double> terms);

}  // namespace clipsim

#endif  // CLIPSIM_VECTOR_H_
