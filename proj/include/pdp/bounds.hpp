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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "pdp/core.hpp"
#include "pdp/error.hpp"
#include "pdp/gauss.hpp"
#include "pdp/lossgrad.hpp"
#include "pdp/snr.hpp"

namespace pdp {

enum class BoundVariant { kPerPoint, kNormFloor };

// Interval for the change of empirical risk L(w; D1) - L(w; D0) caused by
// deleting one point, given that point's membership error eps_v:
//
//   L(w;D0)/(n-1) -/+ (eps_v + 2 phi_inv(1-alpha)) K - ||s_yx - s_xx w|| / ((n-1) N)
//
// with N = ||x_v|| and K = C = sigma/N sqrt(gamma / (2(n-1))) for kPerPoint,
// or N = B and K = D = sigma/B sqrt(gamma / (2(n-1))) for kNormFloor.
//
// The derivation treats l(w, v) and |y_v - <x_v, w>| as the same quantity,
// so the interval is not guaranteed to bracket the true change. Both readings
// are reported:
//   actual_delta      = (L(w;D0) - (y_v - <x_v,w>)^2) / (n-1)   (squared loss)
//   actual_delta_abs  = (L(w;D0) - |y_v - <x_v,w>|) / (n-1)
// with a containment flag for each. `nonnegative_change` records whether the
// squared-loss change is >= 0, which the interval's derivation assumes.
struct RiskBounds {
  double lower = 0.0;
  double upper = 0.0;
  double constant = 0.0;
  BoundVariant variant = BoundVariant::kPerPoint;
  std::optional<double> b_floor;

  double actual_delta = 0.0;
  double actual_delta_abs = 0.0;
  bool contained_a = false;
  bool contained_b = false;
  bool nonnegative_change = false;
};

struct PrivacyFloor {
  double eps_lower = 0.0;
};

namespace internal {

inline RiskBounds evaluate_risk_bounds(const Dataset& ds, std::size_t index,
                                       const Weights& w, const HyperParams& hp,
                                       double eps_v, double norm,
                                       BoundVariant variant) {
  const double m = static_cast<double>(ds.size()) - 1.0;
  const double target = advantage_target(hp.alpha);
  require(std::isfinite(eps_v) && eps_v + target >= 0.0,
          ErrorCode::kDomainError,
          "eps_v implies a negative signal-to-noise ratio");

  const SufficientStats& s = ds.stats();
  const double drift = (s.s_yx - s.s_xx * w).norm();
  const double base = risk(w, ds);

  RiskBounds out;
  out.variant = variant;
  out.constant = hp.sigma / norm * std::sqrt(hp.gamma / (2.0 * m));
  const double centre = base / m - drift / (m * norm);
  const double half_width = (eps_v + target) * out.constant;
  out.lower = centre - half_width;
  out.upper = centre + half_width;

  const DataPoint& v = ds.point(index);
  const double residual = v.y - v.x.dot(w);
  out.actual_delta = (base - residual * residual) / m;
  out.actual_delta_abs = (base - std::abs(residual)) / m;
  out.contained_a = out.lower <= out.actual_delta && out.actual_delta <= out.upper;
  out.contained_b =
      out.lower <= out.actual_delta_abs && out.actual_delta_abs <= out.upper;
  out.nonnegative_change = out.actual_delta >= 0.0;
  return out;
}

inline void check_bound_inputs(const Dataset& ds, std::size_t index,
                               const Weights& w, const HyperParams& hp) {
  hp.validate();
  require(ds.size() >= 2, ErrorCode::kWouldEmptyDataset,
          "risk-change bounds need n >= 2");
  require(index < ds.size(), ErrorCode::kIndexOutOfRange, "index out of range");
  require(hp.gamma > 0.0 && hp.sigma > 0.0, ErrorCode::kDegenerateNoise,
          "gamma and sigma must both be > 0");
  check_weights(w, ds.dim());
}

}  // namespace internal

inline RiskBounds risk_change_bounds(const Dataset& ds, std::size_t index,
                                     const Weights& w, const HyperParams& hp,
                                     double eps_v) {
  internal::check_bound_inputs(ds, index, w, hp);
  const double norm = ds.point(index).x.norm();
  internal::require(norm > 0.0, ErrorCode::kZeroFeatureNorm,
                    "deleted point has a zero feature vector");
  return internal::evaluate_risk_bounds(ds, index, w, hp, eps_v, norm,
                                        BoundVariant::kPerPoint);
}

// Same interval with ||x_v|| replaced by a floor B that every point's feature
// norm must reach.
inline RiskBounds risk_change_bounds_floor(const Dataset& ds,
                                           std::size_t index, const Weights& w,
                                           const HyperParams& hp, double eps_v,
                                           double b_floor) {
  internal::check_bound_inputs(ds, index, w, hp);
  internal::require(std::isfinite(b_floor) && b_floor > 0.0,
                    ErrorCode::kDomainError, "B must be finite and > 0");
  for (const DataPoint& p : ds.points()) {
    internal::require(p.x.norm() >= b_floor, ErrorCode::kFloorViolated,
                      "a feature norm is below B");
  }
  RiskBounds out = internal::evaluate_risk_bounds(
      ds, index, w, hp, eps_v, b_floor, BoundVariant::kNormFloor);
  out.b_floor = b_floor;
  return out;
}

// max{ ln[Phi(Phi^-1(alpha) - eps_v) + 1 - alpha], 0 }
inline PrivacyFloor privacy_floor(double eps_v, double alpha) {
  internal::check_alpha(alpha);
  internal::require(!std::isnan(eps_v), ErrorCode::kInvalidValue,
                    "eps_v is NaN");
  // Phi(Phi^-1(alpha) - eps_v) <= alpha here, so the log is <= 0.
  if (eps_v >= 0.0) return {0.0};
  const double raw = std::log1p(phi(phi_inv(alpha) - eps_v) - alpha);
  return {std::max(raw, 0.0)};
}

}  // namespace pdp
