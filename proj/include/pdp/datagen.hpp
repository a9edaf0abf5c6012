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
#include <cstdint>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/error.hpp"
#include "pdp/gauss.hpp"

namespace pdp {

// Synthetic one-feature regression data: x ~ U[x_low, x_high],
// y = slope * x + noise_scale * N(0, noise_std^2). Defaults give 200 points
// on [0, 10] around y = 3.1415926535 x with effective label noise std 20.
struct GenConfig {
  std::size_t n = 200;
  double x_low = 0.0;
  double x_high = 10.0;
  double slope = 3.1415926535;
  double noise_std = 2.0;
  double noise_scale = 10.0;
  // Extra independent U[x_low, x_high] features appended after x0. They do
  // not enter the label.
  std::size_t extra_features = 0;
  std::uint64_t seed = 40;

  void validate() const {
    using internal::require;
    require(n >= 1, ErrorCode::kDomainError, "n must be >= 1");
    require(std::isfinite(x_low) && std::isfinite(x_high) && x_low < x_high,
            ErrorCode::kDomainError, "need finite x_low < x_high");
    require(std::isfinite(slope), ErrorCode::kDomainError, "slope not finite");
    require(std::isfinite(noise_std) && noise_std >= 0.0,
            ErrorCode::kDomainError, "noise_std must be >= 0");
    require(std::isfinite(noise_scale) && noise_scale >= 0.0,
            ErrorCode::kDomainError, "noise_scale must be >= 0");
  }
};

inline Dataset generate(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto dim = static_cast<Eigen::Index>(1 + cfg.extra_features);
  std::vector<DataPoint> points;
  points.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    DataPoint p;
    p.x.resize(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      p.x[j] = rng.uniform(cfg.x_low, cfg.x_high);
    }
    const double noise = cfg.noise_std * rng.normal();
    p.y = cfg.slope * p.x[0] + cfg.noise_scale * noise;
    points.push_back(std::move(p));
  }
  return Dataset(std::move(points));
}

}  // namespace pdp
