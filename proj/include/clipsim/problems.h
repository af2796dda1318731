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

#ifndef CLIPSIM_PROBLEMS_H_
#define CLIPSIM_PROBLEMS_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clipsim/dataset.h"
#include "clipsim/vector.h"

namespace clipsim {

// f(x) = (1/n) sum_i f_i(x), with each f_i L-smooth. Evaluators are pure and
// may be called concurrently for different workers.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t num_workers() const = 0;
  // Upper bound on the smoothness constant of every f_i.
  virtual double smoothness() const = 0;
  virtual std::optional<double> f_star() const { return std::nullopt; }

  virtual double Value(std::size_t worker, const DenseVector& x) const = 0;
  virtual void Gradient(std::size_t worker, const DenseVector& x,
                        DenseVector& out) const = 0;

  // Finite-sum structure for minibatch oracles. Problems without samples
  // report 0 and throw from SampleGradient.
  virtual std::size_t num_samples(std::size_t /*worker*/) const { return 0; }
  virtual void SampleGradient(std::size_t worker, const DenseVector& x,
                              std::span<const std::size_t> rows,
                              DenseVector& out) const;

  DenseVector Gradient(std::size_t worker, const DenseVector& x) const;
  // Averages over workers use a fixed pairwise order.
  double Value(const DenseVector& x) const;
  DenseVector FullGradient(const DenseVector& x) const;
};

// n = 2, d = 1: f_1(x) = (x - 3)^2 / 2, f_2(x) = (x + 3)^2 / 2. Clipped
// gradient descent stalls on [-2, 2] for tau = 1.
class ChenExample final : public Problem {
 public:
  std::string name() const override { return "chen"; }
  std::size_t dim() const override { return 1; }
  std::size_t num_workers() const override { return 2; }
  double smoothness() const override { return 1.0; }
  std::optional<double> f_star() const override { return 4.5; }
  double Value(std::size_t worker, const DenseVector& x) const override;
  void Gradient(std::size_t worker, const DenseVector& x,
                DenseVector& out) const override;
};

// Every worker holds f_i(x) = (L/2) ||x||^2.
class ScaledQuadratic final : public Problem {
 public:
  ScaledQuadratic(double smoothness, std::size_t dim, std::size_t n_workers);

  std::string name() const override { return "quadratic"; }
  std::size_t dim() const override { return dim_; }
  std::size_t num_workers() const override { return n_workers_; }
  double smoothness() const override { return smoothness_; }
  std::optional<double> f_star() const override { return 0.0; }
  double Value(std::size_t worker, const DenseVector& x) const override;
  void Gradient(std::size_t worker, const DenseVector& x,
                DenseVector& out) const override;

 private:
  double smoothness_;
  std::size_t dim_;
  std::size_t n_workers_;
};

// f_i(x) = (1/m_i) sum_j log(1 + exp(-b_ij <a_ij, x>))
//          + lambda sum_l x_l^2 / (1 + x_l^2).
// f* is unknown; smoothness() is the closed-form bound
// max_i ||A_i||_F^2 / (4 m_i) + 2 lambda.
class NonconvexLogReg final : public Problem {
 public:
  NonconvexLogReg(std::vector<SparseDataset> shards, double lambda);

  std::string name() const override { return "logreg"; }
  std::size_t dim() const override { return dim_; }
  std::size_t num_workers() const override { return shards_.size(); }
  double smoothness() const override { return smoothness_; }
  double Value(std::size_t worker, const DenseVector& x) const override;
  void Gradient(std::size_t worker, const DenseVector& x,
                DenseVector& out) const override;
  std::size_t num_samples(std::size_t worker) const override;
  void SampleGradient(std::size_t worker, const DenseVector& x,
                      std::span<const std::size_t> rows,
                      DenseVector& out) const override;

  double lambda() const { return lambda_; }
  const SparseDataset& shard(std::size_t worker) const { return shards_[worker]; }

  static double Regularizer(const DenseVector& x);

 private:
  std::vector<SparseDataset> shards_;
  std::vector<std::vector<std::size_t>> all_rows_;
  double lambda_;
  std::size_t dim_ = 0;
  double smoothness_ = 0.0;
};

std::unique_ptr<Problem> MakeChenExample();
std::unique_ptr<Problem> MakeScaledQuadratic(double smoothness, std::size_t dim,
                                             std::size_t n_workers);
std::unique_ptr<Problem> MakeNonconvexLogReg(std::vector<SparseDataset> shards,
                                             double lambda);

}  // namespace clipsim

#endif  // CLIPSIM_PROBLEMS_H_
