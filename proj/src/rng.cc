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

#include "clipsim/rng.h"

#include <random>

#include "clipsim/errors.h"

namespace clipsim {

RngStream::RngStream(std::uint64_t seed, StreamId id)
    : seed_(seed), id_(id) {
  std::uint64_t key = Mix64(seed ^ 0x6a09e667f3bcc908ULL);
  key = Mix64(key ^ (id.worker * 0xd1b54a32d192ed03ULL));
  key = Mix64(key ^ (static_cast<std::uint64_t>(id.purpose) *
                     0x8cb92ba72f3d8dd7ULL));
  key_ = key;
}

CounterEngine RngStream::ForStep(std::uint64_t t) const {
  return CounterEngine(Mix64(key_ ^ Mix64(t + 0xa0761d6478bd642fULL)));
}

void AddGaussianNoise(CounterEngine& engine, double sigma, DenseVector& out) {
  if (sigma < 0.0) throw InvalidParameterError("sigma must be nonnegative");
  if (sigma == 0.0) return;
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& v : out) v += normal(engine);
}

DenseVector GaussianVector(CounterEngine& engine, std::size_t dim,
                           double sigma) {
  DenseVector out(dim);
  AddGaussianNoise(engine, sigma, out);
  return out;
}

DenseVector GaussianVector(const RngStream& stream, std::uint64_t t,
                           std::size_t dim, double sigma) {
  CounterEngine engine = stream.ForStep(t);
  return GaussianVector(engine, dim, sigma);
}

}  // namespace clipsim
