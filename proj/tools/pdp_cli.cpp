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

// pdp: generate synthetic data, find the perfect deleted point, evaluate
// risk/privacy bounds, and run multi-step deletion experiments.
//
// Exit codes: 0 success, 2 usage or input error, 3 no point within delta,
// 4 numeric error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdp/io.hpp"
#include "pdp/pdp.hpp"

namespace {

namespace fs = std::filesystem;
using pdp::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoPoint = 3;
constexpr int kExitNumeric = 4;

#ifndef PDP_VERSION
#define PDP_VERSION "dev"
#endif

struct CommonOptions {
  std::string dataset;
  double gamma = 0.01;
  double sigma = 2.0;
  double alpha = 0.01;
  double delta = 100.0;
  std::string w0;
  std::uint64_t seed = 0;
  std::string snr_convention = "paper";
  std::string tie_break = "norm-first";
  std::string out;

  pdp::HyperParams hyperparams() const {
    pdp::HyperParams hp;
    hp.gamma = gamma;
    hp.sigma = sigma;
    hp.alpha = alpha;
    hp.delta = delta;
    hp.seed = seed;
    hp.snr_convention = pdp::io::parse_convention(snr_convention);
    hp.validate();
    return hp;
  }

  pdp::Weights weights(const pdp::Dataset& ds) const {
    if (w0.empty()) return pdp::Weights::Zero(ds.dim());
    pdp::Weights w = pdp::io::parse_vector_list(w0);
    if (w.size() != ds.dim()) {
      throw pdp::Error(pdp::ErrorCode::kDimensionMismatch,
                       "--w0 has " + std::to_string(w.size()) +
                           " entries, dataset dimension is " +
                           std::to_string(ds.dim()));
    }
    return w;
  }

  json to_json() const {
    return json{{"dataset", dataset}, {"gamma", gamma},
                {"sigma", sigma},     {"alpha", alpha},
                {"delta", delta},     {"w0", w0},
                {"seed", seed},       {"snr_convention", snr_convention},
                {"tie_break", tie_break}};
  }
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_dataset = true) {
  auto* ds = cmd->add_option("--dataset", o.dataset, "Dataset CSV path");
  if (needs_dataset) ds->required()->check(CLI::ExistingFile);
  cmd->add_option("--gamma", o.gamma, "Learning rate")->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "Gradient noise std")
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Type I error")->capture_default_str();
  cmd->add_option("--delta", o.delta, "Selection tolerance")
      ->capture_default_str();
  cmd->add_option("--w0", o.w0, "Comma-separated weights (default zeros)");
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--snr-convention", o.snr_convention)
      ->check(CLI::IsMember({"paper", "consistent"}))
      ->capture_default_str();
  cmd->add_option("--tie-break", o.tie_break)
      ->check(CLI::IsMember({"paper", "norm-first"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory for artifacts");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw pdp::Error(pdp::ErrorCode::kIoError,
                     "cannot write " + path.string());
  }
  f << text;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw pdp::Error(pdp::ErrorCode::kIoError,
                     "cannot create " + dir + ": " + ec.message());
  }
  return fs::path(dir);
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const std::vector<std::string>& artifacts,
                    std::chrono::steady_clock::time_point start) {
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  json m{{"format_version", pdp::io::kFormatVersion},
         {"command", command},
         {"config", config},
         {"seed", seed},
         {"artifacts", artifacts},
         {"tool_version", PDP_VERSION},
         {"wall_time_seconds", wall}};
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect deleted point selection for noisy-SGD linear regression"};
  app.require_subcommand(1);
  const auto start = std::chrono::steady_clock::now();

  // gen
  pdp::GenConfig gen_cfg;
  std::string gen_out = ".";
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset CSV");
  gen->add_option("--n", gen_cfg.n)->capture_default_str();
  gen->add_option("--x-low", gen_cfg.x_low)->capture_default_str();
  gen->add_option("--x-high", gen_cfg.x_high)->capture_default_str();
  gen->add_option("--slope", gen_cfg.slope)->capture_default_str();
  gen->add_option("--noise-std", gen_cfg.noise_std)->capture_default_str();
  gen->add_option("--noise-scale", gen_cfg.noise_scale)->capture_default_str();
  gen->add_option("--extra-features", gen_cfg.extra_features)
      ->capture_default_str();
  gen->add_option("--seed", gen_cfg.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  CommonOptions select_opts;
  auto* select = app.add_subcommand("select", "Find the perfect deleted point");
  add_common(select, select_opts);

  CommonOptions scan_opts;
  auto* scan = app.add_subcommand("scan", "Score every point (CSV)");
  add_common(scan, scan_opts);

  CommonOptions bounds_opts;
  std::optional<double> floor_b;
  auto* bounds = app.add_subcommand(
      "bounds", "Risk-change intervals and privacy floors per point");
  add_common(bounds, bounds_opts);
  bounds->add_option("--floor", floor_b,
                     "Feature-norm floor B for the norm-floor interval");

  CommonOptions sim_opts;
  std::string protocol = "no-delete";
  std::size_t steps = 1;
  std::size_t iterations = 100;
  std::size_t bins = 30;
  unsigned jobs = 1;
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo multi-step deletion run");
  add_common(simulate, sim_opts);
  simulate->add_option("--protocol", protocol)
      ->check(CLI::IsMember({"perfect-delete", "random-delete", "no-delete"}))
      ->capture_default_str();
  simulate->add_option("--steps", steps)->capture_default_str();
  simulate->add_option("--iterations", iterations)->capture_default_str();
  simulate->add_option("--bins", bins)->capture_default_str();
  simulate->add_option("--jobs", jobs)->capture_default_str();

  std::vector<std::string> summaries;
  std::string report_out;
  auto* report =
      app.add_subcommand("report", "Tabulate one or more summary.json files");
  report->add_option("summaries", summaries, "summary.json files")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Output directory for report.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const pdp::Dataset ds = pdp::generate(gen_cfg);
      const fs::path dir = prepare_out(gen_out);
      std::ostringstream csv;
      pdp::io::write_dataset_csv(csv, ds);
      write_text(dir / "dataset.csv", csv.str());
      json cfg{{"n", gen_cfg.n},
               {"x_low", gen_cfg.x_low},
               {"x_high", gen_cfg.x_high},
               {"slope", gen_cfg.slope},
               {"noise_std", gen_cfg.noise_std},
               {"noise_scale", gen_cfg.noise_scale},
               {"extra_features", gen_cfg.extra_features},
               {"seed", gen_cfg.seed}};
      write_manifest(dir, "gen", cfg, gen_cfg.seed, {"dataset.csv"}, start);
      return kExitOk;
    }

    if (*select) {
      const pdp::Dataset ds = pdp::io::load_dataset_csv(select_opts.dataset);
      const pdp::HyperParams hp = select_opts.hyperparams();
      const pdp::SelectionResult result = pdp::find_perfect_deleted_point(
          ds, select_opts.weights(ds), hp,
          pdp::io::parse_tie_break(select_opts.tie_break));
      const std::string text = pdp::io::to_json(result).dump(2) + "\n";
      std::cout << text;
      if (!select_opts.out.empty()) {
        const fs::path dir = prepare_out(select_opts.out);
        write_text(dir / "selection.json", text);
        write_manifest(dir, "select", select_opts.to_json(), hp.seed,
                       {"selection.json"}, start);
      }
      return result.best ? kExitOk : kExitNoPoint;
    }

    if (*scan) {
      const pdp::Dataset ds = pdp::io::load_dataset_csv(scan_opts.dataset);
      const pdp::HyperParams hp = scan_opts.hyperparams();
      std::ostringstream csv;
      pdp::io::write_scan_csv(
          csv, pdp::scan_candidates(ds, scan_opts.weights(ds), hp));
      std::cout << csv.str();
      if (!scan_opts.out.empty()) {
        const fs::path dir = prepare_out(scan_opts.out);
        write_text(dir / "scan.csv", csv.str());
        write_manifest(dir, "scan", scan_opts.to_json(), hp.seed, {"scan.csv"},
                       start);
      }
      return kExitOk;
    }

    if (*bounds) {
      const pdp::Dataset ds = pdp::io::load_dataset_csv(bounds_opts.dataset);
      const pdp::HyperParams hp = bounds_opts.hyperparams();
      const auto rows = pdp::io::compute_bounds_rows(
          ds, bounds_opts.weights(ds), hp, floor_b);
      const std::string text =
          pdp::io::bounds_to_json(rows, pdp::advantage_target(hp.alpha))
              .dump(2) +
          "\n";
      std::cout << text;
      if (!bounds_opts.out.empty()) {
        const fs::path dir = prepare_out(bounds_opts.out);
        write_text(dir / "bounds.json", text);
        json cfg = bounds_opts.to_json();
        cfg["floor"] = floor_b ? json(*floor_b) : json(nullptr);
        write_manifest(dir, "bounds", cfg, hp.seed, {"bounds.json"}, start);
      }
      return kExitOk;
    }

    if (*simulate) {
      if (sim_opts.out.empty()) {
        throw pdp::Error(pdp::ErrorCode::kIoError, "simulate requires --out");
      }
      const pdp::Dataset ds = pdp::io::load_dataset_csv(sim_opts.dataset);
      pdp::StepConfig cfg;
      cfg.protocol = pdp::parse_protocol(protocol);
      cfg.steps = steps;
      cfg.iterations = iterations;
      cfg.hp = sim_opts.hyperparams();
      cfg.w0 = sim_opts.weights(ds);
      cfg.tie_break = pdp::io::parse_tie_break(sim_opts.tie_break);
      cfg.bins = bins;
      cfg.jobs = jobs;
      const pdp::ExperimentResult result = pdp::run_protocol(cfg, ds);

      const fs::path dir = prepare_out(sim_opts.out);
      std::ostringstream csv;
      pdp::io::write_weights_csv(csv, result.final_weights);
      write_text(dir / "weights.csv", csv.str());
      write_text(dir / "summary.json",
                 pdp::io::summary_to_json(cfg, result).dump(2) + "\n");
      json mcfg = sim_opts.to_json();
      mcfg["protocol"] = protocol;
      mcfg["steps"] = steps;
      mcfg["iterations"] = iterations;
      mcfg["bins"] = bins;
      mcfg["jobs"] = jobs;
      write_manifest(dir, "simulate", mcfg, cfg.hp.seed,
                     {"weights.csv", "summary.json"}, start);
      return kExitOk;
    }

    if (*report) {
      std::vector<pdp::io::SummaryRow> rows;
      for (const std::string& path : summaries) {
        rows.push_back(pdp::io::load_summary_row(path));
      }
      const std::string text = pdp::io::render_report(std::move(rows));
      std::cout << text;
      if (!report_out.empty()) {
        const fs::path dir = prepare_out(report_out);
        write_text(dir / "report.md", text);
        write_manifest(dir, "report", json{{"summaries", summaries}}, 0,
                       {"report.md"}, start);
      }
      return kExitOk;
    }
  } catch (const pdp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == pdp::ErrorCode::kDegenerateNoise ? kExitNumeric
                                                        : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
