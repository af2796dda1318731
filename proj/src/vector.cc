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

#include <cmath>
#include <string>

#include "clipsim/errors.h"

namespace clipsim {

void DenseVector::SetZero() {
  for (double& v : entries_) v = 0.0;
}

bool DenseVector::AllFinite() const {
  for (double v : entries_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  CheckSameSize(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  CheckSameSize(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double scale) {
  for (double& v : entries_) v *= scale;
  return *this;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator*(double scale, DenseVector a) { return a *= scale; }

void CheckSameSize(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw StateError("dimension mismatch: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
}

double Dot(const DenseVector& a, const DenseVector& b) {
  CheckSameSize(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double SquaredNorm(const DenseVector& x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum;
}

double Norm(const DenseVector& x) { return std::sqrt(SquaredNorm(x)); }

void Axpy(double alpha, const DenseVector& x, DenseVector& y) {
  CheckSameSize(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

namespace {

double AddCoordinate(std::span<const DenseVector> terms, std::size_t k) {
  if (terms.size() == 1) return terms[0][k];
  const std::size_t half = terms.size() / 2;
  return AddCoordinate(terms.first(half), k) +
         AddCoordinate(terms.subspan(half), k);
}

double AddRange(std::span<const double> terms) {
  if (terms.size() == 1) return terms[0];
  const std::size_t half = terms.size() / 2;
  return AddRange(terms.first(half)) + AddRange(terms.subspan(half));
}

}  // namespace

void PairwiseSumInto(std::span<const DenseVector> terms, DenseVector& out) {
  if (terms.empty()) {
    out.SetZero();
    return;
  }
  for (const DenseVector& t : terms) CheckSameSize(terms[0], t);
  if (out.size() != terms[0].size()) out = DenseVector(terms[0].size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = AddCoordinate(terms, k);
  }
}

DenseVector PairwiseSum(std::span<const DenseVector> terms) {
  DenseVector out;
  if (terms.empty()) return out;
  PairwiseSumInto(terms, out);
  return out;
}

double PairwiseSum(std::span<const double> terms) {
  if (terms.empty()) return 0.0;
  return AddRange(terms);
}

}  // namespace clipsim
