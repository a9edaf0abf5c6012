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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pdp/error.hpp"

namespace pdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Model weights. Kept as a plain Eigen vector; the dimension must match the
// dataset it is evaluated against.
using Weights = Vector;

// Stable identifier of a training sample. Survives deletions, so reports can
// name the original row a deleted point came from.
using PointId = std::size_t;

struct DataPoint {
  Vector x;
  double y = 0.0;
};

// Averaged second moments of a dataset:
//   s_yx = (1/n) sum y_i x_i,   s_xx = (1/n) sum x_i x_i^T.
struct SufficientStats {
  Vector s_yx;
  Matrix s_xx;
};

enum class SnrConvention {
  // Denominator sqrt(gamma (n-1) / 2) * sigma, as in the closed-form d_v.
  kPaper,
  // Denominator sigma (n-1) / 2, i.e. ||mu(D1) - mu(D0)|| / (gamma sigma),
  // which is the separation the simulated one-step updates actually have.
  kConsistent,
};

struct HyperParams {
  double gamma = 0.01;
  double sigma = 2.0;
  double alpha = 0.01;
  double delta = 100.0;
  SnrConvention snr_convention = SnrConvention::kPaper;
  std::uint64_t seed = 0;

  // Field-level checks only. Operations that need gamma > 0 or sigma > 0
  // check that themselves.
  void validate() const {
    using internal::require;
    require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::kDomainError,
            "gamma must be finite and >= 0");
    require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::kDomainError,
            "sigma must be finite and >= 0");
    require(alpha > 0.0 && alpha < 0.5, ErrorCode::kDomainError,
            "alpha must lie in (0, 0.5)");
    require(std::isfinite(delta) && delta >= 0.0, ErrorCode::kDomainError,
            "delta must be finite and >= 0");
  }
};

namespace internal {

inline void check_point(const DataPoint& p, Eigen::Index dim) {
  require(p.x.size() >= 1, ErrorCode::kDimensionMismatch,
          "feature vector must have dimension >= 1");
  require(p.x.size() == dim, ErrorCode::kDimensionMismatch,
          "point has dimension " + std::to_string(p.x.size()) + ", expected " +
              std::to_string(dim));
  require(p.x.allFinite() && std::isfinite(p.y), ErrorCode::kInvalidValue,
          "non-finite entry in data point");
}

struct MomentSums {
  Vector yx;
  Matrix xx;
};

inline MomentSums sum_moments(std::span<const DataPoint> points) {
  require(!points.empty(), ErrorCode::kEmptyDataset, "no data points");
  const Eigen::Index dim = points.front().x.size();
  MomentSums sums{Vector::Zero(dim), Matrix::Zero(dim, dim)};
  for (const DataPoint& p : points) {
    check_point(p, dim);
    sums.yx.noalias() += p.y * p.x;
    sums.xx.selfadjointView<Eigen::Lower>().rankUpdate(p.x);
  }
  sums.xx.triangularView<Eigen::StrictlyUpper>() = sums.xx.transpose();
  return sums;
}

}  // namespace internal

inline SufficientStats compute_stats(std::span<const DataPoint> points) {
  internal::MomentSums sums = internal::sum_moments(points);
  const double n = static_cast<double>(points.size());
  return {sums.yx / n, sums.xx / n};
}

// Immutable snapshot of a training set together with its sufficient
// statistics. Deletion and insertion return new snapshots whose statistics
// are updated in O(d^2) from running sums rather than recomputed.
class Dataset {
 public:
  explicit Dataset(std::vector<DataPoint> points)
      : points_(std::move(points)) {
    ids_.resize(points_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = i;
    sums_ = internal::sum_moments(points_);
    refresh_stats();
  }

  Dataset(std::vector<DataPoint> points, std::vector<PointId> ids)
      : points_(std::move(points)), ids_(std::move(ids)) {
    internal::require(ids_.size() == points_.size(),
                      ErrorCode::kDimensionMismatch,
                      "id list length differs from point count");
    sums_ = internal::sum_moments(points_);
    refresh_stats();
  }

  std::size_t size() const noexcept { return points_.size(); }
  Eigen::Index dim() const noexcept { return points_.front().x.size(); }

  const DataPoint& point(std::size_t index) const { return points_.at(index); }
  PointId id(std::size_t index) const { return ids_.at(index); }
  std::span<const DataPoint> points() const noexcept { return points_; }
  std::span<const PointId> ids() const noexcept { return ids_; }
  const SufficientStats& stats() const noexcept { return stats_; }

  // Largest id in use plus one; a fresh id for insert_point.
  PointId next_id() const noexcept {
    PointId next = 0;
    for (PointId id : ids_) next = std::max(next, id + 1);
    return next;
  }

  friend Dataset delete_point(const Dataset& ds, std::size_t index);
  friend Dataset insert_point(const Dataset& ds, DataPoint point, PointId id);

 private:
  Dataset() = default;

  void refresh_stats() {
    const double n = static_cast<double>(points_.size());
    stats_.s_yx = sums_.yx / n;
    stats_.s_xx = sums_.xx / n;
  }

  std::vector<DataPoint> points_;
  std::vector<PointId> ids_;
  internal::MomentSums sums_;
  SufficientStats stats_;
};

// Returns ds without the point at position `index` (positions are 0..n-1 in
// the current snapshot; ids are untouched).
inline Dataset delete_point(const Dataset& ds, std::size_t index) {
  using internal::require;
  require(ds.size() >= 2, ErrorCode::kWouldEmptyDataset,
          "cannot delete the only remaining point");
  require(index < ds.size(), ErrorCode::kIndexOutOfRange,
          "index " + std::to_string(index) + " out of range for n=" +
              std::to_string(ds.size()));
  Dataset out;
  out.points_.reserve(ds.size() - 1);
  out.ids_.reserve(ds.size() - 1);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i == index) continue;
    out.points_.push_back(ds.points_[i]);
    out.ids_.push_back(ds.ids_[i]);
  }
  const DataPoint& v = ds.points_[index];
  out.sums_.yx = ds.sums_.yx - v.y * v.x;
  out.sums_.xx = ds.sums_.xx - v.x * v.x.transpose();
  out.refresh_stats();
  return out;
}

inline Dataset insert_point(const Dataset& ds, DataPoint point, PointId id) {
  internal::check_point(point, ds.dim());
  Dataset out;
  out.points_ = ds.points_;
  out.ids_ = ds.ids_;
  out.sums_.yx = ds.sums_.yx + point.y * point.x;
  out.sums_.xx = ds.sums_.xx + point.x * point.x.transpose();
  out.points_.push_back(std::move(point));
  out.ids_.push_back(id);
  out.refresh_stats();
  return out;
}

}  // namespace pdp
