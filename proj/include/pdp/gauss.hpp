// Copyright 2026 The pdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "pdp/core.hpp"
#include "pdp/error.hpp"

namespace pdp {
namespace internal {

// erfc(y) for y >= 0, W. J. Cody, "Rational Chebyshev approximations for the
// error function", Math. Comp. 23 (1969). Coefficients as distributed in the
// netlib specfun CALERF routine; relative error below 1e-16 in IEEE double
// for every branch. Only exp() is taken from the platform.
inline double cody_erfc_nonneg(double y) {
  static constexpr std::array<double, 5> a = {
      3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
      3.20937758913846947e03, 1.85777706184603153e-1};
  static constexpr std::array<double, 4> b = {
      2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
      2.84423683343917062e03};
  static constexpr std::array<double, 9> c = {
      5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
      2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
      2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
  static constexpr std::array<double, 8> d = {
      1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
      1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
      3.43936767414372164e03, 1.23033935480374942e03};
  static constexpr std::array<double, 6> p = {
      3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
      1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
  static constexpr std::array<double, 5> q = {
      2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
      6.05183413124413191e-2, 2.33520497626869185e-3};
  constexpr double kSqrtPiInv = 5.6418958354775628695e-1;
  constexpr double kThresh = 0.46875;
  constexpr double kBig = 26.543;

  // exp(-y^2) split as exp(-ys^2) exp(-(y-ys)(y+ys)) with ys = trunc(16y)/16,
  // which keeps the large-argument tail accurate.
  auto scaled_exp = [](double v) {
    const double vs = std::trunc(v * 16.0) / 16.0;
    const double del = (v - vs) * (v + vs);
    return std::exp(-vs * vs) * std::exp(-del);
  };

  if (y <= kThresh) {
    const double ysq = y > 1.11e-16 ? y * y : 0.0;
    double num = a[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + a[i]) * ysq;
      den = (den + b[i]) * ysq;
    }
    return 1.0 - y * (num + a[3]) / (den + b[3]);
  }
  if (y <= 4.0) {
    double num = c[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + c[i]) * y;
      den = (den + d[i]) * y;
    }
    return scaled_exp(y) * (num + c[7]) / (den + d[7]);
  }
  if (y >= kBig) return 0.0;
  const double ysq = 1.0 / (y * y);
  double num = p[5] * ysq;
  double den = ysq;
  for (int i = 0; i < 4; ++i) {
    num = (num + p[i]) * ysq;
    den = (den + q[i]) * ysq;
  }
  const double r = (kSqrtPiInv - ysq * (num + p[4]) / (den + q[4])) / y;
  return scaled_exp(y) * r;
}

inline double normal_pdf(double z) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

}  // namespace internal

// Standard normal CDF. Evaluated as erfc(-z / sqrt 2) / 2 on the side where
// the result is small, so both tails keep full relative precision.
inline double phi(double z) {
  internal::require(std::isfinite(z), ErrorCode::kInvalidValue,
                    "phi argument must be finite");
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const double t = z * kInvSqrt2;
  if (t < 0.0) return 0.5 * internal::cody_erfc_nonneg(-t);
  return 1.0 - 0.5 * internal::cody_erfc_nonneg(t);
}

// Inverse standard normal CDF: Acklam's rational approximation (relative error
// about 1.15e-9) followed by one Newton step against phi.
inline double phi_inv(double p) {
  internal::require(p > 0.0 && p < 1.0, ErrorCode::kDomainError,
                    "phi_inv needs p in (0, 1)");
  static constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  // Work in the lower half and reflect, so the Newton residual is taken
  // against a small probability without cancellation.
  const bool upper = p > 0.5;
  const double pl = upper ? 1.0 - p : p;

  double x;
  if (pl < kLow) {
    const double r = std::sqrt(-2.0 * std::log(pl));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else {
    const double s = pl - 0.5;
    const double r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  x -= (phi(x) - pl) / internal::normal_pdf(x);
  return upper ? -x : x;
}

// 64-bit random stream with explicit seeding. Independent streams are derived
// from a master seed and a stream index through splitmix64, so Monte Carlo
// iterations can each own one without sharing state. Uniform and normal
// variates are produced by code in this class, not by <random> distributions,
// so sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng stream(std::uint64_t master, std::uint64_t index,
                    std::uint64_t sub = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (index + 0x632be59bd9b4e019ULL));
    s = splitmix64(s ^ (sub + 0x9e3779b97f4a7c15ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n) by rejection, no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    internal::require(n > 0, ErrorCode::kDomainError, "empty index range");
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t u;
    do {
      u = next_u64();
    } while (u >= limit);
    return u % n;
  }

  // Standard normal via Marsaglia's polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// mean + std * Z with Z i.i.d. standard normal. std == 0 returns mean exactly
// and consumes no randomness.
inline Vector sample_gaussian(Rng& rng, const Vector& mean, double std) {
  internal::require(std::isfinite(std) && std >= 0.0, ErrorCode::kDomainError,
                    "standard deviation must be >= 0");
  if (std == 0.0) return mean;
  Vector out(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    out[i] = mean[i] + std * rng.normal();
  }
  return out;
}

}  // namespace pdp
