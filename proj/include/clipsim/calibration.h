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

#ifndef CLIPSIM_CALIBRATION_H_
#define CLIPSIM_CALIBRATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clipsim {

// Constants of the high-probability analysis. a bounds the accumulated DP
// noise, b a single worker's gradient noise, c the worker-averaged noise.
// B is the gradient-scale bound, eta = tau / B, Delta >= Phi^0.
struct TheoryConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double B = 0.0;
  double eta = 1.0;
  double Delta = 0.0;
  double alpha = 0.1;
};

// a = (sqrt(2) + 2 sqrt(3 log(6(T+1)/alpha))) sqrt(d) sigma_omega sqrt(T/n)
// b^2 = 2 sigma^2 log(12 (T+1) n / alpha)
// c^2 = (sqrt(2) + 2 sqrt(3 log(6(T+1)/alpha)))^2 sigma^2
// Only a, b, c and alpha are filled in.
TheoryConstants ComputeTheoryConstants(double sigma, double sigma_omega,
                                       std::uint64_t T, std::uint64_t n,
                                       std::uint64_t d, double alpha);

// Phi^0 at the default initialization (g = v = 0) as a function of gamma,
// with beta tied to gamma by the caller's rule.
struct InitialGeometry {
  double f_gap = 0.0;             // f(x0) - f*
  double mean_local_sq = 0.0;     // (1/n) sum_i ||grad f_i(x0)||^2
  double global_sq = 0.0;         // ||grad f(x0)||^2
};

double InitialLyapunov(const InitialGeometry& geometry, double gamma,
                       double beta, double beta_hat, double eta);

struct DeterministicInputs {
  double L = 1.0;
  double B = 1.0;      // max_i ||grad f_i(x0)||
  double tau = 1.0;
  double beta_hat = 1.0;
  // Either a fixed Delta or the geometry to evaluate Phi^0(gamma).
  std::optional<double> Delta;
  std::optional<InitialGeometry> geometry;
};

struct DeterministicParams {
  double gamma = 0.0;
  double beta = 0.0;
  double Delta = 0.0;   // the Delta the constraints were checked with
  double eta = 1.0;
  // B <= tau: the (1 + B/tau) rate is vacuous and gamma = 1/(12L) is returned
  // without the remaining restrictions.
  bool vacuous = false;
  // beta_hat <= 1/(2 eta); automatic when B >= 3 tau.
  bool beta_hat_ok = true;
};

// Largest gamma (bisection, 1e-12 relative) with beta = 4 L gamma satisfying
//   gamma <= min{1/(12L), tau/(12 B L)},
//   5/8 - 32 beta^2 L^2 gamma^2/(bh^2 eta^2) - 96 L^2 gamma^2/(bh^2 eta^2) >= 0,
//   (8/3) beta sqrt(L Delta) <= bh tau / 4,
//   (7/4) beta (B - tau) <= bh tau / 4.
DeterministicParams ComputeDeterministicParams(const DeterministicInputs& in);

struct StochasticInputs {
  double L = 1.0;
  double Delta = 1.0;
  double B = 1.0;       // max{3 tau, max_i ||grad f_i(x0)|| + b}
  double tau = 1.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::uint64_t n = 1;
  std::uint64_t T = 1;
  double sigma = 0.0;
  double alpha = 0.1;
  double beta_hat_request = 1.0;
};

struct StochasticParams {
  double gamma = 0.0;
  double beta = 0.0;
  double beta_hat = 1.0;
  double eta = 1.0;
  bool fell_back_to_deterministic = false;
  // Name of the restriction that set beta (for reporting).
  std::string binding;
};

// Upper bounds on beta from every momentum restriction, keyed by name. Used
// by ComputeStochasticParams and exposed for reporting.
struct NamedBound {
  std::string name;
  double value;
};
std::vector<NamedBound> StochasticBetaBounds(const StochasticInputs& in,
                                             double beta_hat);

// beta_hat = min{request, sqrt(L Delta)/a, 1}; beta = the smallest bound;
// gamma = beta / (6 L); then beta and gamma shrink together until
// 1/3 - 32 beta^2 L^2 gamma^2/(bh^2 eta^2) - 96 L^2 gamma^2/(bh^2 eta^2) >= 0.
StochasticParams ComputeStochasticParams(const StochasticInputs& in);

// sigma_omega = (8 tau / eps) sqrt(T log(5T/(4 delta)) log(1/delta)).
double DpSigma(double tau, double epsilon, double delta, std::uint64_t T);

struct PerStepPrivacy {
  double epsilon = 0.0;
  double delta = 0.0;
};

// eps~ = eps / (2 sqrt(2 T log(1/delta))), delta~ = PerStepDelta(delta, T).
PerStepPrivacy PerStepBudget(double epsilon, double delta, std::uint64_t T);

// delta / T, rounded down so that T * delta~ <= delta in floating point.
double PerStepDelta(double delta, std::uint64_t T);

// Gaussian mechanism with L2 sensitivity 2 tau: the per-step epsilon that
// noise of std `sigma_omega` buys at per-step `delta_step`.
double GaussianMechanismEpsilon(double sigma_omega, double tau,
                                double delta_step);

struct PrivacySpend {
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t steps = 0;
};

// Advanced composition of spend.steps + T identical steps with slack
// delta_prime:
//   eps = sqrt(2 k log(1/delta')) eps~ + k eps~ (e^eps~ - 1),
//   delta = k delta~ + delta'.
PrivacySpend Account(const PrivacySpend& spend, const PerStepPrivacy& per_step,
                     std::uint64_t T, double delta_prime);

}  // namespace clipsim

#endif  // CLIPSIM_CALIBRATION_H_
