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

#ifndef CLIPSIM_RNG_H_
#define CLIPSIM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>

#include "clipsim/vector.h"

namespace clipsim {

enum class StreamPurpose : std::uint32_t {
  kBatchNoise = 1,
  kDpNoise = 2,
  kPartition = 3,
  kData = 4,
};

struct StreamId {
  std::uint64_t worker = 0;
  StreamPurpose purpose = StreamPurpose::kBatchNoise;
};

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is Mix64(key + i * golden), so an
// engine is fully determined by its key and can be re-created anywhere.
// Satisfies UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit CounterEngine(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(key_ + counter_);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// A family of engines indexed by iteration, derived from a master seed and a
// (worker, purpose) stream id. One stream is owned by one worker.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id);

  // Engine for iteration t; identical for identical (seed, id, t).
  CounterEngine ForStep(std::uint64_t t) const;

  std::uint64_t seed() const { return seed_; }
  StreamId id() const { return id_; }

 private:
  std::uint64_t seed_;
  StreamId id_;
  std::uint64_t key_;
};

// d i.i.d. N(0, sigma^2) samples; sigma == 0 yields zeros without drawing.
DenseVector GaussianVector(CounterEngine& engine, std::size_t dim, double sigma);
DenseVector GaussianVector(const RngStream& stream, std::uint64_t t,
                           std::size_t dim, double sigma);
void AddGaussianNoise(CounterEngine& engine, double sigma, DenseVector& out);

}  // namespace clipsim

#endif  // CLIPSIM_RNG_H_
