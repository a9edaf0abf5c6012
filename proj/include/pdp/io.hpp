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

// File formats: dataset CSV, scan CSV, weights CSV, and the JSON documents
// emitted by the command-line tool. Every JSON document carries
// "format_version".

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "pdp/bounds.hpp"
#include "pdp/core.hpp"
#include "pdp/error.hpp"
#include "pdp/selector.hpp"
#include "pdp/sim.hpp"
#include "pdp/snr.hpp"

namespace pdp::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                where + ": cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// "1,2.5,-3" -> vector. Used for --w0.
inline Vector parse_vector_list(std::string_view text) {
  const auto parts = split(text, ',');
  Vector out(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = parse_double(parts[i], "vector list");
  }
  return out;
}

// Header x0,...,x{d-1},y then one row per point.
inline Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kEmptyDataset, "dataset CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() < 2 || header.back() != "y") {
    throw Error(ErrorCode::kParseError,
                "dataset header must be x0,...,x{d-1},y");
  }
  for (std::size_t j = 0; j + 1 < header.size(); ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw Error(ErrorCode::kParseError,
                  "dataset header column " + std::to_string(j) +
                      " must be x" + std::to_string(j));
    }
  }
  const std::size_t dim = header.size() - 1;

  std::vector<DataPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != dim + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  where + ": expected " + std::to_string(dim + 1) + " fields");
    }
    DataPoint p;
    p.x.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      p.x[static_cast<Eigen::Index>(j)] = parse_double(fields[j], where);
    }
    p.y = parse_double(fields[dim], where);
    points.push_back(std::move(p));
  }
  if (points.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "dataset CSV has no rows");
  }
  return Dataset(std::move(points));
}

inline Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return read_dataset_csv(in);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  for (Eigen::Index j = 0; j < ds.dim(); ++j) out << 'x' << j << ',';
  out << "y\n";
  for (const DataPoint& p : ds.points()) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      out << format_double(p.x[j]) << ',';
    }
    out << format_double(p.y) << '\n';
  }
}

inline void write_scan_csv(std::ostream& out,
                           const std::vector<CandidateScore>& scores) {
  out << "index,d_v,eps_v,advantage,feature_norm\n";
  for (const CandidateScore& c : scores) {
    out << c.id << ',' << format_double(c.d_v) << ',' << format_double(c.eps_v)
        << ',' << format_double(c.advantage) << ','
        << format_double(c.feature_norm) << '\n';
  }
}

inline json to_json(const CandidateScore& c) {
  return json{{"index", c.id},
              {"position", c.position},
              {"d_v", c.d_v},
              {"eps_v", c.eps_v},
              {"distance", c.distance},
              {"advantage", c.advantage},
              {"feature_norm", c.feature_norm}};
}

inline json to_json(const SelectionResult& r) {
  json scores = json::array();
  for (const CandidateScore& c : r.scores) scores.push_back(to_json(c));
  return json{{"format_version", kFormatVersion},
              {"target", r.target},
              {"best", r.best ? to_json(*r.best) : json(nullptr)},
              {"scores", std::move(scores)}};
}

inline std::string_view convention_name(SnrConvention c) {
  return c == SnrConvention::kPaper ? "paper" : "consistent";
}

inline SnrConvention parse_convention(std::string_view name) {
  if (name == "paper") return SnrConvention::kPaper;
  if (name == "consistent") return SnrConvention::kConsistent;
  throw Error(ErrorCode::kParseError,
              "unknown snr convention '" + std::string(name) + "'");
}

inline std::string_view tie_break_name(TieBreak t) {
  return t == TieBreak::kPaper ? "paper" : "norm-first";
}

inline TieBreak parse_tie_break(std::string_view name) {
  if (name == "paper") return TieBreak::kPaper;
  if (name == "norm-first") return TieBreak::kNormFirst;
  throw Error(ErrorCode::kParseError,
              "unknown tie-break '" + std::string(name) + "'");
}

inline json to_json(const HyperParams& hp) {
  return json{{"gamma", hp.gamma},
              {"sigma", hp.sigma},
              {"alpha", hp.alpha},
              {"delta", hp.delta},
              {"snr_convention", convention_name(hp.snr_convention)},
              {"seed", hp.seed}};
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

// One row of the `bounds` report.
struct BoundsRow {
  PointId index = 0;
  double d_v = 0.0;
  double eps_v = 0.0;
  std::optional<RiskBounds> bounds;   // empty when ||x_v|| == 0
  std::optional<RiskBounds> floor;    // present when a floor B was requested
  PrivacyFloor privacy;
};

inline json to_json(const BoundsRow& row) {
  json j{{"index", row.index},
         {"d_v", row.d_v},
         {"eps_v", row.eps_v},
         {"privacy_floor", row.privacy.eps_lower}};
  if (row.bounds) {
    const RiskBounds& b = *row.bounds;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["constant"] = b.constant;
    j["actual_delta"] = b.actual_delta;
    j["actual_delta_abs"] = b.actual_delta_abs;
    j["contained_A"] = b.contained_a;
    j["contained_B"] = b.contained_b;
    j["nonnegative_change"] = b.nonnegative_change;
  } else {
    for (const char* k : {"lower", "upper", "constant", "actual_delta",
                          "actual_delta_abs", "contained_A", "contained_B",
                          "nonnegative_change"}) {
      j[k] = nullptr;
    }
    j["error"] = "ZeroFeatureNorm";
  }
  if (row.floor) {
    j["floor"] = json{{"B", *row.floor->b_floor},
                      {"lower", row.floor->lower},
                      {"upper", row.floor->upper},
                      {"constant", row.floor->constant},
                      {"contained_A", row.floor->contained_a},
                      {"contained_B", row.floor->contained_b}};
  }
  return j;
}

// Scores every point and evaluates its risk-change interval and privacy
// floor under hp. b_floor, when given, adds the norm-floor interval.
inline std::vector<BoundsRow> compute_bounds_rows(
    const Dataset& ds, const Weights& w, const HyperParams& hp,
    std::optional<double> b_floor = std::nullopt) {
  const std::vector<CandidateScore> scores = scan_candidates(ds, w, hp);
  std::vector<BoundsRow> rows;
  rows.reserve(scores.size());
  for (const CandidateScore& c : scores) {
    BoundsRow row;
    row.index = c.id;
    row.d_v = c.d_v;
    row.eps_v = c.eps_v;
    if (c.feature_norm > 0.0) {
      row.bounds = risk_change_bounds(ds, c.position, w, hp, c.eps_v);
    }
    if (b_floor) {
      row.floor =
          risk_change_bounds_floor(ds, c.position, w, hp, c.eps_v, *b_floor);
    }
    row.privacy = privacy_floor(c.eps_v, hp.alpha);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json bounds_to_json(const std::vector<BoundsRow>& rows, double target) {
  json arr = json::array();
  for (const BoundsRow& r : rows) arr.push_back(to_json(r));
  return json{{"format_version", kFormatVersion},
              {"target", target},
              {"rows", std::move(arr)}};
}

inline void write_weights_csv(std::ostream& out,
                              const std::vector<Weights>& weights) {
  out << "iteration";
  const Eigen::Index dim = weights.empty() ? 0 : weights.front().size();
  for (Eigen::Index j = 0; j < dim; ++j) out << ",w" << j;
  out << '\n';
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < dim; ++j) {
      out << ',' << format_double(weights[i][j]);
    }
    out << '\n';
  }
}

inline json summary_to_json(const StepConfig& cfg, const ExperimentResult& r) {
  json hist = json::array();
  for (std::size_t j = 0; j < r.histograms.size(); ++j) {
    hist.push_back(json{{"coordinate", j},
                        {"edges", r.histograms[j].edges},
                        {"counts", r.histograms[j].counts}});
  }
  json log = json::array();
  for (const auto& iteration : r.deletions_log) {
    json steps = json::array();
    for (const auto& id : iteration) {
      steps.push_back(id ? json(*id) : json(nullptr));
    }
    log.push_back(std::move(steps));
  }
  return json{{"format_version", kFormatVersion},
              {"protocol", protocol_name(cfg.protocol)},
              {"steps", cfg.steps},
              {"iterations", cfg.iterations},
              {"hyperparams", to_json(cfg.hp)},
              {"tie_break", tie_break_name(cfg.tie_break)},
              {"w0", to_json(cfg.w0)},
              {"mean", to_json(r.mean)},
              {"variance", to_json(r.variance)},
              {"histogram", std::move(hist)},
              {"deletions_log", std::move(log)},
              {"skipped_selections", r.skipped_selections}};
}

// The subset of summary.json the report needs.
struct SummaryRow {
  Protocol protocol = Protocol::kNoDelete;
  std::size_t steps = 0;
  std::size_t iterations = 0;
  std::vector<double> mean;
  std::vector<double> variance;
};

inline SummaryRow summary_row_from_json(const json& j) {
  try {
    SummaryRow row;
    row.protocol = parse_protocol(j.at("protocol").get<std::string>());
    row.steps = j.at("steps").get<std::size_t>();
    row.iterations = j.at("iterations").get<std::size_t>();
    row.mean = j.at("mean").get<std::vector<double>>();
    row.variance = j.at("variance").get<std::vector<double>>();
    return row;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("malformed summary: ") + e.what());
  }
}

inline SummaryRow load_summary_row(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  return summary_row_from_json(j);
}

// Markdown table, rows ordered by (steps, protocol) with protocols in the
// order perfect-delete, random-delete, no-delete. Numbers are printed in
// shortest round-trip form; multi-coordinate values are joined with spaces.
inline std::string render_report(std::vector<SummaryRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) {
                     if (a.steps != b.steps) return a.steps < b.steps;
                     return static_cast<int>(a.protocol) <
                            static_cast<int>(b.protocol);
                   });
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      s += format_double(v[i]);
    }
    return s;
  };
  std::ostringstream out;
  out << "| steps | protocol | iterations | mean | variance |\n";
  out << "|---|---|---|---|---|\n";
  for (const SummaryRow& r : rows) {
    out << "| " << r.steps << " | " << protocol_name(r.protocol) << " | "
        << r.iterations << " | " << join(r.mean) << " | " << join(r.variance)
        << " |\n";
  }
  return out.str();
}

}  // namespace pdp::io
