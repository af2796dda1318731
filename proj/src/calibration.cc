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

#include "clipsim/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clipsim/errors.h"

namespace clipsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTolerance = 1e-12;

// num / den with den == 0 mapped to +inf (the restriction is inactive).
double Ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

double Root(double x, double power) {
  return std::isinf(x) ? kInf : std::pow(x, 1.0 / power);
}

// Largest point of [0, hi] where the monotone predicate holds.
template <typename Pred>
double LargestFeasible(double hi, Pred feasible) {
  if (feasible(hi)) return hi;
  double lo = 0.0;
  while (hi - lo > kBisectionTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void CheckPositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameterError(std::string(name) + " must be positive");
  }
}

void CheckEpsilon(double v) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw InvalidParameterError("epsilon must lie in (0, 1]");
  }
}

void CheckUnitInterval(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidParameterError(std::string(name) + " must lie in (0, 1)");
  }
}

}  // namespace

TheoryConstants ComputeTheoryConstants(double sigma, double sigma_omega,
                                       std::uint64_t T, std::uint64_t n,
                                       std::uint64_t d, double alpha) {
  CheckUnitInterval(alpha, "alpha");
  if (T < 1 || n < 1) throw InvalidParameterError("T and n must be >= 1");
  if (sigma < 0.0 || sigma_omega < 0.0) {
    throw InvalidParameterError("noise levels must be >= 0");
  }
  const double Tp1 = static_cast<double>(T) + 1.0;
  const double radius =
      std::sqrt(2.0) + 2.0 * std::sqrt(3.0 * std::log(6.0 * Tp1 / alpha));
  TheoryConstants k;
  k.alpha = alpha;
  k.a = radius * std::sqrt(static_cast<double>(d)) * sigma_omega *
        std::sqrt(static_cast<double>(T) / static_cast<double>(n));
  k.b = std::sqrt(2.0 * sigma * sigma *
                  std::log(12.0 * Tp1 * static_cast<double>(n) / alpha));
  k.c = radius * sigma;
  return k;
}

double InitialLyapunov(const InitialGeometry& geometry, double gamma,
                       double beta, double beta_hat, double eta) {
  return geometry.f_gap +
         8.0 * gamma * beta / (beta_hat * beta_hat * eta * eta) *
             geometry.mean_local_sq +
         2.0 * gamma / beta * geometry.global_sq;
}

DeterministicParams ComputeDeterministicParams(const DeterministicInputs& in) {
  CheckPositive(in.L, "L");
  CheckPositive(in.tau, "tau");
  if (!(in.B >= 0.0)) throw InvalidParameterError("B must be >= 0");
  if (!(in.beta_hat > 0.0 && in.beta_hat <= 1.0)) {
    throw InvalidParameterError("beta_hat must lie in (0, 1]");
  }
  if (!in.Delta && !in.geometry) {
    throw InvalidParameterError(
        "Delta is required when the initial geometry is unknown");
  }

  DeterministicParams out;
  const double L = in.L;
  const double bh = in.beta_hat;
  auto delta_at = [&](double gamma, double eta) {
    if (in.Delta) return *in.Delta;
    return InitialLyapunov(*in.geometry, gamma, 4.0 * L * gamma, bh, eta);
  };

  if (in.B <= in.tau) {
    out.vacuous = true;
    out.eta = 1.0;
    out.gamma = 1.0 / (12.0 * L);
    out.beta = 4.0 * L * out.gamma;
    out.Delta = delta_at(out.gamma, out.eta);
    return out;
  }

  const double eta = in.tau / in.B;
  out.eta = eta;
  out.beta_hat_ok = bh <= 1.0 / (2.0 * eta);
  const double scale = 1.0 / (bh * bh * eta * eta);
  auto feasible = [&](double gamma) {
    const double beta = 4.0 * L * gamma;
    const double g2 = gamma * gamma;
    const double quad = 5.0 / 8.0 - 32.0 * beta * beta * L * L * g2 * scale -
                        96.0 * L * L * g2 * scale;
    if (quad < 0.0) return false;
    const double Delta = delta_at(gamma, eta);
    if (8.0 / 3.0 * beta * std::sqrt(L * Delta) > bh * in.tau / 4.0)
      return false;
    if (7.0 / 4.0 * beta * (in.B - in.tau) > bh * in.tau / 4.0) return false;
    return true;
  };
  const double cap = std::min(1.0 / (12.0 * L), in.tau / (12.0 * in.B * L));
  out.gamma = LargestFeasible(cap, feasible);
  out.beta = 4.0 * L * out.gamma;
  out.Delta = delta_at(out.gamma, eta);
  return out;
}

std::vector<NamedBound> StochasticBetaBounds(const StochasticInputs& in,
                                             double bh) {
  const double L = in.L;
  const double D = in.Delta;
  const double LD = L * D;
  const double sLD = std::sqrt(LD);
  const double eta = in.tau / in.B;
  const double T = static_cast<double>(in.T);
  const double sT = std::sqrt(T);
  const double n = static_cast<double>(in.n);
  const double sn = std::sqrt(n);
  const double b = in.b;
  const double c = in.c;
  const double sigma = in.sigma;
  const double Bm = in.B - in.tau;
  const double b1 = std::sqrt(3.0 * std::log(14.0 * (T + 1.0) / in.alpha));
  const double s2 = std::sqrt(2.0);
  const double noise = (1.0 + b1) * sigma * sT;  // common denominator factor

  std::vector<NamedBound> bounds = {
      {"unit", 1.0},
      {"stepsize", 0.5},  // 12 L gamma <= 1 with gamma = beta / (6L)
      {"ii", Ratio(3.0 * bh * in.tau, 64.0 * sLD)},
      {"iii", Ratio(bh * in.tau, 14.0 * Bm)},
      {"iv", Ratio(bh * in.tau, 22.0 * b)},
      {"1a", Root(Ratio(LD * bh * eta, 8.0 * T * b * b), 3.0)},
      {"1b", Root(Ratio(LD * bh * bh * eta * eta, 32.0 * T * b * b), 4.0)},
      {"1c", Root(Ratio(LD * n, 8.0 * T * c * c), 2.0)},
      {"2", Root(Ratio(3.0 * LD * sn * bh * eta,
                       16.0 * s2 * noise * in.B),
                 2.0)},
      {"3", Root(Ratio(3.0 * LD * bh * eta * sn,
                       16.0 * s2 * noise *
                           (std::sqrt(9.0 * LD) + 1.5 * Bm + 1.5 * b)),
                 3.0)},
      {"4", Root(Ratio(9.0 * LD * bh * eta * sn,
                       8.0 * s2 * noise * (11.0 * sLD + 3.0 * (Bm + b))),
                 4.0)},
      {"5", Root(Ratio(3.0 * LD * bh * bh * eta * eta * sn,
                       64.0 * s2 * noise * (3.0 * sLD + 1.5 * Bm + 1.5 * b)),
                 3.0)},
      {"6", Ratio(3.0 * LD * sn,
                  16.0 * s2 * noise * (3.0 * sLD + 1.5 * Bm + 1.5 * b))},
      // Carries (B - tau + B) in the last factor, not (B - tau + b).
      {"7", Root(Ratio(9.0 * LD * bh * bh * eta * eta * sn,
                       32.0 * s2 * noise * (11.0 * sLD + 3.0 * (Bm + in.B))),
                 4.0)},
      {"8", Root(Ratio(9.0 * LD * sn,
                       s2 * noise * (11.0 * sLD + 3.0 * (Bm + b))),
                 2.0)},
  };
  return bounds;
}

StochasticParams ComputeStochasticParams(const StochasticInputs& in) {
  CheckPositive(in.L, "L");
  CheckPositive(in.Delta, "Delta");
  CheckPositive(in.tau, "tau");
  CheckUnitInterval(in.alpha, "alpha");
  if (!(in.beta_hat_request > 0.0)) {
    throw InvalidParameterError("beta_hat request must be positive");
  }
  if (in.a < 0.0 || in.b < 0.0 || in.c < 0.0 || in.sigma < 0.0) {
    throw InvalidParameterError("a, b, c, sigma must be >= 0");
  }
  if (in.n < 1 || in.T < 1) throw InvalidParameterError("n, T must be >= 1");

  StochasticParams out;
  if (in.B <= in.tau && in.b == 0.0 && in.sigma == 0.0) {
    DeterministicInputs det;
    det.L = in.L;
    det.B = in.B;
    det.tau = in.tau;
    det.beta_hat = std::min(in.beta_hat_request, 1.0);
    det.Delta = in.Delta;
    const DeterministicParams d = ComputeDeterministicParams(det);
    out.gamma = d.gamma;
    out.beta = d.beta;
    out.beta_hat = det.beta_hat;
    out.eta = d.eta;
    out.fell_back_to_deterministic = true;
    out.binding = "deterministic";
    return out;
  }
  if (!(in.B > 0.0)) throw InvalidParameterError("B must be positive");

  double bh = std::min(in.beta_hat_request, 1.0);
  if (in.a > 0.0) bh = std::min(bh, std::sqrt(in.L * in.Delta) / in.a);
  out.beta_hat = bh;
  out.eta = in.tau / in.B;

  const auto bounds = StochasticBetaBounds(in, bh);
  const auto smallest = std::min_element(
      bounds.begin(), bounds.end(),
      [](const NamedBound& x, const NamedBound& y) { return x.value < y.value; });
  double beta = smallest->value;
  out.binding = smallest->name;

  const double eta = out.eta;
  auto quad_ok = [&](double b) {
    const double lg = b / 6.0;  // L * gamma
    const double s = 1.0 / (bh * bh * eta * eta);
    return 1.0 / 3.0 - 32.0 * b * b * lg * lg * s - 96.0 * lg * lg * s >= 0.0;
  };
  if (!quad_ok(beta)) {
    beta = LargestFeasible(beta, quad_ok);
    out.binding = "quadratic";
  }
  out.beta = beta;
  out.gamma = beta / (6.0 * in.L);
  return out;
}

double DpSigma(double tau, double epsilon, double delta, std::uint64_t T) {
  CheckPositive(tau, "tau");
  CheckEpsilon(epsilon);
  CheckUnitInterval(delta, "delta");
  if (T < 1) throw InvalidParameterError("T must be >= 1");
  const double t = static_cast<double>(T);
  return 8.0 * tau / epsilon *
         std::sqrt(t * std::log(5.0 * t / (4.0 * delta)) * std::log(1.0 / delta));
}

PerStepPrivacy PerStepBudget(double epsilon, double delta, std::uint64_t T) {
  CheckEpsilon(epsilon);
  CheckUnitInterval(delta, "delta");
  if (T < 1) throw InvalidParameterError("T must be >= 1");
  const double t = static_cast<double>(T);
  return {epsilon / (2.0 * std::sqrt(2.0 * t * std::log(1.0 / delta))),
          PerStepDelta(delta, T)};
}

double PerStepDelta(double delta, std::uint64_t T) {
  CheckUnitInterval(delta, "delta");
  if (T < 1) throw InvalidParameterError("T must be >= 1");
  const double t = static_cast<double>(T);
  double step = delta / t;
  while (step * t > delta) step = std::nextafter(step, 0.0);
  return step;
}

double GaussianMechanismEpsilon(double sigma_omega, double tau,
                                double delta_step) {
  CheckPositive(tau, "tau");
  CheckUnitInterval(delta_step, "delta_step");
  if (!(sigma_omega > 0.0)) return kInf;
  return 2.0 * tau * std::sqrt(2.0 * std::log(1.25 / delta_step)) /
         sigma_omega;
}

PrivacySpend Account(const PrivacySpend& spend, const PerStepPrivacy& per_step,
                     std::uint64_t T, double delta_prime) {
  if (!(per_step.epsilon > 0.0) || !(per_step.delta >= 0.0)) {
    throw InvalidParameterError("per-step privacy parameters must be positive");
  }
  CheckUnitInterval(delta_prime, "delta_prime");
  PrivacySpend out;
  out.steps = spend.steps + T;
  if (out.steps == 0) return out;
  const double k = static_cast<double>(out.steps);
  const double e = per_step.epsilon;
  out.epsilon = std::sqrt(2.0 * k * std::log(1.0 / delta_prime)) * e +
                k * e * std::expm1(e);
  out.delta = k * per_step.delta + delta_prime;
  return out;
}

}  // namespace clipsim
