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

#include "clipsim/problems.h"

#include <cmath>
#include <numeric>

#include "clipsim/errors.h"

namespace clipsim {
namespace {

void CheckWorker(const Problem& p, std::size_t worker) {
  if (worker >= p.num_workers()) {
    throw InvalidParameterError("worker index " + std::to_string(worker) +
                                " out of range");
  }
}

void CheckDim(const Problem& p, const DenseVector& x) {
  if (x.size() != p.dim()) {
    throw StateError("point has dimension " + std::to_string(x.size()) +
                     ", problem expects " + std::to_string(p.dim()));
  }
}

void ResizeOut(std::size_t dim, DenseVector& out) {
  if (out.size() != dim) out = DenseVector(dim);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double SparseDot(const SparseRow& row, const DenseVector& x) {
  double s = 0.0;
  for (const SparseEntry& e : row) s += e.value * x[e.index];
  return s;
}

}  // namespace

void Problem::SampleGradient(std::size_t /*worker*/, const DenseVector& /*x*/,
                             std::span<const std::size_t> /*rows*/,
                             DenseVector& /*out*/) const {
  throw ConfigError("problem '" + name() +
                    "' has no finite-sum structure for minibatch sampling");
}

DenseVector Problem::Gradient(std::size_t worker, const DenseVector& x) const {
  DenseVector out(dim());
  Gradient(worker, x, out);
  return out;
}

double Problem::Value(const DenseVector& x) const {
  std::vector<double> values(num_workers());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = Value(i, x);
  return PairwiseSum(values) / static_cast<double>(values.size());
}

DenseVector Problem::FullGradient(const DenseVector& x) const {
  std::vector<DenseVector> grads(num_workers());
  for (std::size_t i = 0; i < grads.size(); ++i) grads[i] = Gradient(i, x);
  DenseVector sum = PairwiseSum(grads);
  sum *= 1.0 / static_cast<double>(grads.size());
  return sum;
}

// ---------------------------------------------------------------- Chen

double ChenExample::Value(std::size_t worker, const DenseVector& x) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  const double shift = worker == 0 ? 3.0 : -3.0;
  const double r = x[0] - shift;
  return 0.5 * r * r;
}

void ChenExample::Gradient(std::size_t worker, const DenseVector& x,
                           DenseVector& out) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  ResizeOut(1, out);
  out[0] = x[0] - (worker == 0 ? 3.0 : -3.0);
}

// ---------------------------------------------------------------- quadratic

ScaledQuadratic::ScaledQuadratic(double smoothness, std::size_t dim,
                                 std::size_t n_workers)
    : smoothness_(smoothness), dim_(dim), n_workers_(n_workers) {
  if (!(smoothness > 0.0)) throw InvalidParameterError("L must be positive");
  if (dim == 0) throw InvalidParameterError("dimension must be positive");
  if (n_workers == 0) throw InvalidParameterError("n_workers must be >= 1");
}

double ScaledQuadratic::Value(std::size_t worker, const DenseVector& x) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  return 0.5 * smoothness_ * SquaredNorm(x);
}

void ScaledQuadratic::Gradient(std::size_t worker, const DenseVector& x,
                               DenseVector& out) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  ResizeOut(dim_, out);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = smoothness_ * x[k];
}

// ---------------------------------------------------------------- logreg

NonconvexLogReg::NonconvexLogReg(std::vector<SparseDataset> shards,
                                 double lambda)
    : shards_(std::move(shards)), lambda_(lambda) {
  if (shards_.empty()) throw ConfigError("logistic regression needs >= 1 shard");
  if (!(lambda >= 0.0)) throw InvalidParameterError("lambda must be >= 0");
  dim_ = shards_[0].dim;
  if (dim_ == 0) throw ConfigError("dataset has dimension 0");
  double max_curvature = 0.0;
  for (std::size_t w = 0; w < shards_.size(); ++w) {
    const SparseDataset& s = shards_[w];
    if (s.dim != dim_) {
      throw ConfigError("shard " + std::to_string(w) + " has dimension " +
                        std::to_string(s.dim) + ", expected " +
                        std::to_string(dim_));
    }
    if (s.empty()) {
      throw ConfigError("shard " + std::to_string(w) + " has no samples");
    }
    double frob = 0.0;
    for (const SparseRow& row : s.rows) {
      for (const SparseEntry& e : row) {
        if (e.index >= dim_) throw ConfigError("feature index out of range");
        frob += e.value * e.value;
      }
    }
    max_curvature =
        std::max(max_curvature, frob / (4.0 * static_cast<double>(s.size())));
    std::vector<std::size_t> all(s.size());
    std::iota(all.begin(), all.end(), 0);
    all_rows_.push_back(std::move(all));
  }
  smoothness_ = max_curvature + 2.0 * lambda_;
}

double NonconvexLogReg::Regularizer(const DenseVector& x) {
  double r = 0.0;
  for (double v : x) {
    const double sq = v * v;
    r += sq / (1.0 + sq);
  }
  return r;
}

double NonconvexLogReg::Value(std::size_t worker, const DenseVector& x) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  const SparseDataset& s = shards_[worker];
  double loss = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    loss += Softplus(-s.labels[j] * SparseDot(s.rows[j], x));
  }
  return loss / static_cast<double>(s.size()) + lambda_ * Regularizer(x);
}

void NonconvexLogReg::Gradient(std::size_t worker, const DenseVector& x,
                               DenseVector& out) const {
  SampleGradient(worker, x, all_rows_.at(worker), out);
}

std::size_t NonconvexLogReg::num_samples(std::size_t worker) const {
  CheckWorker(*this, worker);
  return shards_[worker].size();
}

void NonconvexLogReg::SampleGradient(std::size_t worker, const DenseVector& x,
                                     std::span<const std::size_t> rows,
                                     DenseVector& out) const {
  CheckWorker(*this, worker);
  CheckDim(*this, x);
  if (rows.empty()) throw InvalidParameterError("empty minibatch");
  ResizeOut(dim_, out);
  out.SetZero();
  const SparseDataset& s = shards_[worker];
  for (std::size_t j : rows) {
    const double b = s.labels[j];
    // d/dz log(1 + exp(-b z)) = -b * sigmoid(-b z)
    const double weight = -b * Sigmoid(-b * SparseDot(s.rows[j], x));
    for (const SparseEntry& e : s.rows[j]) out[e.index] += weight * e.value;
  }
  const double inv_m = 1.0 / static_cast<double>(rows.size());
  for (std::size_t k = 0; k < dim_; ++k) {
    const double denom = 1.0 + x[k] * x[k];
    out[k] = out[k] * inv_m + lambda_ * (2.0 * x[k] / (denom * denom));
  }
}

std::unique_ptr<Problem> MakeChenExample() {
  return std::make_unique<ChenExample>();
}

std::unique_ptr<Problem> MakeScaledQuadratic(double smoothness, std::size_t dim,
                                             std::size_t n_workers) {
  return std::make_unique<ScaledQuadratic>(smoothness, dim, n_workers);
}

std::unique_ptr<Problem> MakeNonconvexLogReg(std::vector<SparseDataset> shards,
                                             double lambda) {
  return std::make_unique<NonconvexLogReg>(std::move(shards), lambda);
}

}  // namespace clipsim
