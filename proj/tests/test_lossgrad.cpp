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
#include "pdp/lossgrad.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace pdp {
namespace {

using testing::t3;
using testing::vec;

TEST(LossTest, ThreePointRisk) {
  EXPECT_NEAR(risk(vec({0.5}), t3()), 37.0 / 6.0, 1e-14);
  EXPECT_NEAR(risk_grad(vec({0.0}), t3())[0], -46.0 / 3.0, 1e-13);
}

TEST(LossTest, PointLossAndGrad) {
  const DataPoint v{vec({1.0, 2.0}), 3.0};
  const Weights w = vec({0.5, 0.25});
  EXPECT_DOUBLE_EQ(point_loss(w, v), 4.0);
  const Vector g = point_grad(w, v);
  EXPECT_DOUBLE_EQ(g[0], -4.0);
  EXPECT_DOUBLE_EQ(g[1], -8.0);
}

TEST(LossTest, DimensionMismatch) {
  try {
    risk(vec({1.0, 2.0}), t3());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_THROW(risk_grad(vec({1.0, 2.0}), t3()), Error);
  EXPECT_THROW(point_grad(vec({1.0, 2.0}), t3().point(0)), Error);
}

TEST(LossTest, RiskMatchesOracle) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testing::random_instance(gen, 2 + trial, 1 + trial % 4);
    const double want =
        oracle::risk(testing::to_oracle(inst.ds), testing::to_std(inst.w));
    EXPECT_LE(testing::rel_err(risk(inst.w, inst.ds), want), 1e-13);
  }
}

// Central finite differences of the empirical risk.
TEST(LossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = testing::random_instance(gen, 10, 3);
    const Vector g = risk_grad(inst.w, inst.ds);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double h = 1e-5;
      Weights up = inst.w, down = inst.w;
      up[j] += h;
      down[j] -= h;
      const double fd = (risk(up, inst.ds) - risk(down, inst.ds)) / (2 * h);
      EXPECT_NEAR(g[j], fd, 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(LossTest, StatsGradientMatchesLoop) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testing::random_instance(gen, 3 + trial, 1 + trial % 5);
    const Vector a = risk_grad(inst.w, inst.ds);
    const Vector b = mean_point_grad(inst.w, inst.ds);
    EXPECT_LE((a - b).norm(), 1e-12 * (1.0 + b.norm()));
  }
}

// grad L(D1) - grad L(D0) = (grad L(D0) - grad l(v)) / (n - 1)
TEST(DeletedGradTest, IdentityOnRandomInstances) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<std::size_t> n_dist(2, 40);
    auto inst = testing::random_instance(gen, n_dist(gen), 1 + trial % 4);
    const double m = static_cast<double>(inst.ds.size()) - 1.0;
    for (std::size_t i = 0; i < inst.ds.size(); ++i) {
      const Vector g0 = risk_grad(inst.w, inst.ds);
      const Vector g1 = risk_grad(inst.w, delete_point(inst.ds, i));
      const Vector lhs = g1 - g0;
      const Vector rhs = (g0 - point_grad(inst.w, inst.ds.point(i))) / m;
      EXPECT_LE((lhs - rhs).norm(), 1e-10 * (1.0 + rhs.norm()));
      EXPECT_LE((deleted_grad(inst.w, inst.ds, i) - g1).norm(),
                1e-10 * (1.0 + g1.norm()));
    }
  }
}

TEST(DeletedGradTest, TwoIdenticalPoints) {
  const DataPoint p{vec({1.5, -2.0}), 0.7};
  const Dataset ds(std::vector<DataPoint>{p, p});
  const Weights w = vec({0.3, 0.1});
  EXPECT_LE((deleted_grad(w, ds, 0) - risk_grad(w, ds)).norm(), 1e-14);
}

TEST(DeletedGradTest, Errors) {
  const Dataset single(std::vector<DataPoint>{{vec({1.0}), 1.0}});
  EXPECT_THROW(deleted_grad(vec({0.0}), single, 0), Error);
  EXPECT_THROW(deleted_grad(vec({0.0}), t3(), 5), Error);
}

}  // namespace
}  // namespace pdp
