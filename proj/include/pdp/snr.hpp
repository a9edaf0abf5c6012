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

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/error.hpp"
#include "pdp/gauss.hpp"
#include "pdp/lossgrad.hpp"

namespace pdp {

// Signal-to-noise ratio of deleting one point. `numerator` is
//   || (y_v - <x_v, w>) x_v - (s_yx - s_xx w) ||_2,
// which equals half the distance between the original gradient and the
// deleted point's own gradient; `denominator` depends on the convention.
struct SnrValue {
  double d_v = 0.0;
  double numerator = 0.0;
  double denominator = 1.0;
};

struct MembershipError {
  double eps_v = 0.0;
};

// One row of a whole-dataset scan.
struct CandidateScore {
  PointId id = 0;
  std::size_t position = 0;
  double d_v = 0.0;
  double eps_v = 0.0;
  double distance = 0.0;  // |d_v - 2 phi_inv(1 - alpha)| == |eps_v|
  double advantage = 0.0;
  double feature_norm = 0.0;
};

namespace internal {

inline void check_snr_inputs(const Dataset& ds, const Weights& w,
                             const HyperParams& hp) {
  hp.validate();
  require(ds.size() >= 2, ErrorCode::kWouldEmptyDataset,
          "signal-to-noise ratio needs n >= 2");
  require(hp.gamma > 0.0 && hp.sigma > 0.0, ErrorCode::kDegenerateNoise,
          "gamma and sigma must both be > 0");
  check_weights(w, ds.dim());
}

inline void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 0.5, ErrorCode::kDomainError,
          "alpha must lie in (0, 0.5)");
}

}  // namespace internal

inline double snr_denominator(std::size_t n, const HyperParams& hp) {
  const double m = static_cast<double>(n) - 1.0;
  switch (hp.snr_convention) {
    case SnrConvention::kPaper:
      return std::sqrt(hp.gamma * m / 2.0) * hp.sigma;
    case SnrConvention::kConsistent:
      return hp.sigma * m / 2.0;
  }
  return 0.0;
}

// 2 phi_inv(1 - alpha): the d_v at which the membership advantage vanishes.
inline double advantage_target(double alpha) {
  internal::check_alpha(alpha);
  return 2.0 * phi_inv(1.0 - alpha);
}

// d_v from the sufficient statistics, in O(d) for the point once s_xx w is
// known. The outer product x_v x_v^T is never formed.
inline SnrValue snr_closed_form(const Dataset& ds, std::size_t index,
                                const Weights& w, const HyperParams& hp) {
  internal::check_snr_inputs(ds, w, hp);
  internal::require(index < ds.size(), ErrorCode::kIndexOutOfRange,
                    "index out of range");
  const SufficientStats& s = ds.stats();
  const Vector g = s.s_yx - s.s_xx * w;
  const DataPoint& v = ds.point(index);
  const double r = v.y - v.x.dot(w);
  SnrValue out;
  out.numerator = (r * v.x - g).norm();
  out.denominator = snr_denominator(ds.size(), hp);
  out.d_v = out.numerator / out.denominator;
  return out;
}

// d_v from raw per-point gradients: by the deleted-gradient identity,
// ||grad L(D1) - grad L(D0)|| = ||grad L(D0) - grad l(v)|| / (n - 1), and the
// gradient difference is twice the closed-form numerator.
inline SnrValue snr_definition_form(const Dataset& ds, std::size_t index,
                                    const Weights& w, const HyperParams& hp) {
  internal::check_snr_inputs(ds, w, hp);
  internal::require(index < ds.size(), ErrorCode::kIndexOutOfRange,
                    "index out of range");
  const Vector diff = mean_point_grad(w, ds) - point_grad(w, ds.point(index));
  SnrValue out;
  out.numerator = 0.5 * diff.norm();
  out.denominator = snr_denominator(ds.size(), hp);
  out.d_v = out.numerator / out.denominator;
  return out;
}

// |Phi(Phi^-1(1 - alpha) - d) - alpha|
inline double membership_advantage(double d, double alpha) {
  internal::check_alpha(alpha);
  internal::require(std::isfinite(d) && d >= 0.0, ErrorCode::kDomainError,
                    "signal-to-noise ratio must be finite and >= 0");
  return std::abs(phi(phi_inv(1.0 - alpha) - d) - alpha);
}

inline MembershipError membership_error(const SnrValue& d, double alpha) {
  return {d.d_v - advantage_target(alpha)};
}

// Scores every point in one pass sharing the s_yx - s_xx w precompute.
inline std::vector<CandidateScore> scan_candidates(const Dataset& ds,
                                                   const Weights& w,
                                                   const HyperParams& hp) {
  internal::check_snr_inputs(ds, w, hp);
  const SufficientStats& s = ds.stats();
  const Vector g = s.s_yx - s.s_xx * w;
  const double denominator = snr_denominator(ds.size(), hp);
  const double z = phi_inv(1.0 - hp.alpha);
  const double target = 2.0 * z;
  const Eigen::Index dim = ds.dim();

  std::vector<CandidateScore> scores(ds.size());
  const auto points = ds.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const DataPoint& v = points[i];
    const double r = v.y - v.x.dot(w);
    double sq = 0.0;
    double xsq = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double e = r * v.x[j] - g[j];
      sq += e * e;
      xsq += v.x[j] * v.x[j];
    }
    CandidateScore& c = scores[i];
    c.id = ds.id(i);
    c.position = i;
    c.d_v = std::sqrt(sq) / denominator;
    c.eps_v = c.d_v - target;
    c.distance = std::abs(c.eps_v);
    c.advantage = std::abs(phi(z - c.d_v) - hp.alpha);
    c.feature_norm = std::sqrt(xsq);
  }
  return scores;
}

}  // namespace pdp
