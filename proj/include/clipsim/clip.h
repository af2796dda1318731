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

#ifndef CLIPSIM_CLIP_H_
#define CLIPSIM_CLIP_H_

#include "clipsim/vector.h"

namespace clipsim {

// Stand-in for an infinite clipping level. No realistic vector exceeds it.
inline constexpr double kNoClipping = 1e18;

// Euclidean clipping: returns x when ||x|| <= tau, else (tau/||x||) x.
// Throws InvalidParameterError unless tau > 0.
DenseVector Clip(const DenseVector& x, double tau);

// In-place form used by the step kernels. Returns true when the scaling
// branch was taken.
bool ClipInPlace(DenseVector& x, double tau);

// ||Clip(x, tau) - x||, which equals max(||x|| - tau, 0).
double ClipResidualNorm(const DenseVector& x, double tau);

}  // namespace clipsim

#endif  // CLIPSIM_CLIP_H_
