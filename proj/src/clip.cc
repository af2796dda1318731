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

namespace clipsim {
namespace {

void CheckTau(double tau) {
  if (!(tau > 0.0) || std::isnan(tau)) {
    throw InvalidParameterError("clipping level must be positive");
  }
}

}  // namespace

bool ClipInPlace(DenseVector& x, double tau) {
  CheckTau(tau);
  const double norm = Norm(x);
  if (norm <= tau) return false;
  x *= tau / norm;
  return true;
}

DenseVector Clip(const DenseVector& x, double tau) {
  DenseVector out = x;
  ClipInPlace(out, tau);
  return out;
}

double ClipResidualNorm(const DenseVector& x, double tau) {
  return Norm(Clip(x, tau) - x);
}

}  // namespace clipsim
