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

#include <cstddef>
#include <string>

#include "pdp/core.hpp"
#include "pdp/error.hpp"

namespace pdp {
namespace internal {

inline void check_weights(const Weights& w, Eigen::Index dim) {
  require(w.size() == dim, ErrorCode::kDimensionMismatch,
          "weights have dimension " + std::to_string(w.size()) +
              ", data has " + std::to_string(dim));
}

}  // namespace internal

// Squared residual (y - <w, x>)^2.
inline double point_loss(const Weights& w, const DataPoint& v) {
  internal::check_weights(w, v.x.size());
  const double r = v.y - w.dot(v.x);
  return r * r;
}

// -2 (y - <w, x>) x
inline Vector point_grad(const Weights& w, const DataPoint& v) {
  internal::check_weights(w, v.x.size());
  return -2.0 * (v.y - w.dot(v.x)) * v.x;
}

// Empirical risk: mean point loss.
inline double risk(const Weights& w, const Dataset& ds) {
  internal::check_weights(w, ds.dim());
  double total = 0.0;
  for (const DataPoint& p : ds.points()) {
    const double r = p.y - w.dot(p.x);
    total += r * r;
  }
  return total / static_cast<double>(ds.size());
}

// Gradient of the empirical risk from the sufficient statistics,
// 2 (s_xx w - s_yx). O(d^2), independent of n.
inline Vector risk_grad(const Weights& w, const Dataset& ds) {
  internal::check_weights(w, ds.dim());
  const SufficientStats& s = ds.stats();
  return 2.0 * (s.s_xx * w - s.s_yx);
}

// Same quantity as risk_grad, as the plain mean of per-point gradients.
inline Vector mean_point_grad(const Weights& w, const Dataset& ds) {
  internal::check_weights(w, ds.dim());
  Vector g = Vector::Zero(ds.dim());
  for (const DataPoint& p : ds.points()) g += point_grad(w, p);
  return g / static_cast<double>(ds.size());
}

// Gradient of the risk after removing the point at position `index`,
// without materialising the reduced dataset:
//   grad L(D1) = n/(n-1) grad L(D0) - 1/(n-1) grad l(v).
inline Vector deleted_grad(const Weights& w, const Dataset& ds,
                           std::size_t index) {
  internal::require(ds.size() >= 2, ErrorCode::kWouldEmptyDataset,
                    "deleting from a single-point dataset");
  internal::require(index < ds.size(), ErrorCode::kIndexOutOfRange,
                    "index out of range");
  const double n = static_cast<double>(ds.size());
  return (n * risk_grad(w, ds) - point_grad(w, ds.point(index))) / (n - 1.0);
}

}  // namespace pdp
