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
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pdp/core.hpp"
#include "pdp/error.hpp"
#include "pdp/gauss.hpp"
#include "pdp/lossgrad.hpp"
#include "pdp/selector.hpp"

namespace pdp {

enum class Protocol { kPerfectDelete, kRandomDelete, kNoDelete };

inline std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kPerfectDelete: return "perfect-delete";
    case Protocol::kRandomDelete: return "random-delete";
    case Protocol::kNoDelete: return "no-delete";
  }
  return "unknown";
}

inline Protocol parse_protocol(std::string_view name) {
  if (name == "perfect-delete" || name == "perfect_delete") {
    return Protocol::kPerfectDelete;
  }
  if (name == "random-delete" || name == "random_delete") {
    return Protocol::kRandomDelete;
  }
  if (name == "no-delete" || name == "no_delete") return Protocol::kNoDelete;
  throw Error(ErrorCode::kParseError,
              "unknown protocol '" + std::string(name) + "'");
}

struct StepConfig {
  Protocol protocol = Protocol::kNoDelete;
  std::size_t steps = 1;
  std::size_t iterations = 100;
  HyperParams hp;
  Weights w0;
  TieBreak tie_break = TieBreak::kNormFirst;
  std::size_t bins = 30;
  unsigned jobs = 1;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

struct WeightSummary {
  Vector mean;
  Vector variance;                   // unbiased; 0 for a single sample
  std::vector<Histogram> histograms;  // one per coordinate
};

struct ExperimentResult {
  std::vector<Weights> final_weights;
  Vector mean;
  Vector variance;
  std::vector<Histogram> histograms;
  // Per iteration, per step: original id of the deleted point, or empty when
  // the step deleted nothing (no-delete protocol, or no point within delta).
  std::vector<std::vector<std::optional<PointId>>> deletions_log;
  std::size_t skipped_selections = 0;
};

// Sub-stream indices under each iteration's stream; the noise stream is the
// same for every protocol so paired runs see identical eta draws.
inline constexpr std::uint64_t kNoiseStream = 0;
inline constexpr std::uint64_t kDeletionStream = 1;

// w - gamma (grad L(w; D) + eta), eta ~ N(0, sigma^2 I).
inline Weights sgd_step(const Weights& w, const Dataset& ds,
                        const HyperParams& hp, Rng& rng) {
  hp.validate();
  const Vector eta = sample_gaussian(rng, Vector::Zero(w.size()), hp.sigma);
  return w - hp.gamma * (risk_grad(w, ds) + eta);
}

inline WeightSummary summarize(std::span<const Weights> weights,
                               std::size_t bins) {
  internal::require(!weights.empty(), ErrorCode::kEmptyInput,
                    "no weight samples");
  internal::require(bins >= 1, ErrorCode::kDomainError, "bins must be >= 1");
  const Eigen::Index dim = weights.front().size();
  const double count = static_cast<double>(weights.size());

  WeightSummary out;
  out.mean = Vector::Zero(dim);
  for (const Weights& w : weights) {
    internal::check_weights(w, dim);
    out.mean += w;
  }
  out.mean /= count;

  out.variance = Vector::Zero(dim);
  if (weights.size() > 1) {
    for (const Weights& w : weights) {
      out.variance += (w - out.mean).cwiseAbs2();
    }
    out.variance /= count - 1.0;
  }

  for (Eigen::Index j = 0; j < dim; ++j) {
    double lo = weights.front()[j];
    double hi = lo;
    for (const Weights& w : weights) {
      lo = std::min(lo, w[j]);
      hi = std::max(hi, w[j]);
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    Histogram h;
    h.counts.assign(bins, 0);
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
      h.edges[b] = lo + width * static_cast<double>(b);
    }
    h.edges[bins] = hi;
    for (const Weights& w : weights) {
      auto b = static_cast<std::size_t>((w[j] - lo) / width);
      h.counts[std::min(b, bins - 1)] += 1;
    }
    out.histograms.push_back(std::move(h));
  }
  return out;
}

namespace internal {

struct IterationOutcome {
  Weights final_weight;
  std::vector<std::optional<PointId>> deletions;
  std::size_t skipped = 0;
};

inline IterationOutcome run_iteration(const StepConfig& cfg, const Dataset& ds,
                                      std::size_t iteration) {
  Rng noise = Rng::stream(cfg.hp.seed, iteration, kNoiseStream);
  Rng deletion = Rng::stream(cfg.hp.seed, iteration, kDeletionStream);
  IterationOutcome out;
  Dataset current = ds;
  Weights w = cfg.w0;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    switch (cfg.protocol) {
      case Protocol::kPerfectDelete: {
        const SelectionResult sel =
            find_perfect_deleted_point(current, w, cfg.hp, cfg.tie_break);
        if (sel.best) {
          out.deletions.push_back(sel.best->id);
          current = delete_point(current, sel.best->position);
        } else {
          out.deletions.push_back(std::nullopt);
          ++out.skipped;
        }
        break;
      }
      case Protocol::kRandomDelete: {
        const auto pos =
            static_cast<std::size_t>(deletion.uniform_index(current.size()));
        out.deletions.push_back(current.id(pos));
        current = delete_point(current, pos);
        break;
      }
      case Protocol::kNoDelete:
        break;
    }
    w = sgd_step(w, current, cfg.hp, noise);
  }
  out.final_weight = std::move(w);
  return out;
}

}  // namespace internal

// Runs cfg.iterations independent noisy-SGD trajectories from cfg.w0 on a
// fresh copy of ds, deleting one point per step according to the protocol.
// Iteration i uses the streams split from (hp.seed, i), so results do not
// depend on cfg.jobs.
inline ExperimentResult run_protocol(const StepConfig& cfg, const Dataset& ds) {
  using internal::require;
  cfg.hp.validate();
  require(cfg.steps >= 1, ErrorCode::kDomainError, "steps must be >= 1");
  require(cfg.iterations >= 1, ErrorCode::kDomainError,
          "iterations must be >= 1");
  internal::check_weights(cfg.w0, ds.dim());
  if (cfg.protocol != Protocol::kNoDelete) {
    require(cfg.steps <= ds.size() - 1, ErrorCode::kTooManyDeletions,
            std::to_string(cfg.steps) + " deletions requested from " +
                std::to_string(ds.size()) + " points");
  }

  std::vector<internal::IterationOutcome> outcomes(cfg.iterations);
  const unsigned jobs = std::max(
      1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.iterations)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < cfg.iterations; ++i) {
      outcomes[i] = internal::run_iteration(cfg, ds, i);
    }
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    {
      std::vector<std::jthread> workers;
      for (unsigned j = 0; j < jobs; ++j) {
        workers.emplace_back([&, j] {
          try {
            for (std::size_t i = j; i < cfg.iterations; i += jobs) {
              outcomes[i] = internal::run_iteration(cfg, ds, i);
            }
          } catch (...) {
            errors[j] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentResult out;
  out.final_weights.reserve(cfg.iterations);
  out.deletions_log.reserve(cfg.iterations);
  for (auto& o : outcomes) {
    out.final_weights.push_back(std::move(o.final_weight));
    out.deletions_log.push_back(std::move(o.deletions));
    out.skipped_selections += o.skipped;
  }
  WeightSummary summary = summarize(out.final_weights, cfg.bins);
  out.mean = std::move(summary.mean);
  out.variance = std::move(summary.variance);
  out.histograms = std::move(summary.histograms);
  return out;
}

struct AdvantageEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double true_negative_rate = 0.0;   // P(accept H0 | H0)
  double rejection_rate_h1 = 0.0;    // P(reject H0 | H1)
};

// Monte Carlo estimate of the membership advantage of deleting the point at
// `index`. One-step updates dw = -gamma (grad L(w; D) + eta) are drawn for the
// original dataset (H0) and the deleted one (H1); each is tested with the
// likelihood-ratio statistic W^T dw, W = (mu1 - mu0) / sigma_g^2, at level
// alpha using the known H0 distribution. Returns |TNR - P(reject | H1)|,
// whose expectation is |Phi(Phi^-1(1-alpha) - d) - alpha| with
// d = ||mu1 - mu0|| / sigma_g.
inline AdvantageEstimate empirical_advantage(const Dataset& ds,
                                             std::size_t index,
                                             const Weights& w,
                                             const HyperParams& hp,
                                             std::size_t trials) {
  using internal::require;
  hp.validate();
  require(trials >= 1000, ErrorCode::kDomainError, "trials must be >= 1000");
  internal::check_weights(w, ds.dim());
  const double sigma_g = hp.gamma * hp.sigma;
  require(sigma_g > 0.0, ErrorCode::kDegenerateNoise,
          "gamma * sigma must be > 0");

  const Dataset deleted = delete_point(ds, index);
  const Vector mu0 = -hp.gamma * risk_grad(w, ds);
  const Vector mu1 = -hp.gamma * risk_grad(w, deleted);

  // Standardised W: with W = 0 every test has the same power, so any fixed
  // direction gives a level-alpha test.
  Vector direction = mu1 - mu0;
  const double separation = direction.norm();
  if (separation > 0.0) {
    direction /= separation;
  } else {
    direction = Vector::Unit(w.size(), 0);
  }
  const double threshold = phi_inv(1.0 - hp.alpha);

  Rng rng = Rng::stream(hp.seed, index, 0xad);
  const Vector zero = Vector::Zero(w.size());
  std::size_t accept_h0 = 0;
  std::size_t reject_h1 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Vector dw0 = mu0 - hp.gamma * sample_gaussian(rng, zero, hp.sigma);
    const Vector dw1 = mu1 - hp.gamma * sample_gaussian(rng, zero, hp.sigma);
    if (direction.dot(dw0 - mu0) / sigma_g <= threshold) ++accept_h0;
    if (direction.dot(dw1 - mu0) / sigma_g > threshold) ++reject_h1;
  }

  const double n = static_cast<double>(trials);
  AdvantageEstimate out;
  out.true_negative_rate = static_cast<double>(accept_h0) / n;
  out.rejection_rate_h1 = static_cast<double>(reject_h1) / n;
  out.estimate = std::abs(out.true_negative_rate - out.rejection_rate_h1);
  const double tnr = out.true_negative_rate;
  const double rej = out.rejection_rate_h1;
  out.standard_error = std::sqrt((tnr * (1.0 - tnr) + rej * (1.0 - rej)) / n);
  return out;
}

}  // namespace pdp
