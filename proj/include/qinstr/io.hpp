// Copyright 2026 The qinstr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QINSTR_IO_HPP
#define QINSTR_IO_HPP

// JSON and CSV encodings.
//
//   ComplexMatrix      {"rows", "cols", "re": [[..]], "im": [[..]]}
//   KrausChannel       {"dim_in", "dim_out", "kraus": [ComplexMatrix, ..]}
//   ChoiMatrix         {"dim_in", "dim_out", "matrix": ComplexMatrix}
//   StochasticChannel  {"dim", "nu", "weights": [{"a", "b", "w"}, ..]}
//   Model              {"type", "D", "E", "table": [..]} or {"type": "general", "D", "E", "branches": [..]}
//
// Doubles are written in shortest round-trip form, so finite values survive
// serialize/parse unchanged.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qinstr/channels.hpp"
#include "qinstr/config.hpp"
#include "qinstr/instruments.hpp"
#include "qinstr/linalg.hpp"
#include "qinstr/metrics.hpp"
#include "qinstr/oracle.hpp"

namespace qinstr::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::kParse, std::string("missing field \"") + key + "\"");
  return *it;
}

inline long long get_int(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorKind::kParse, std::string("field \"") + key + "\" must be an integer");
  return v.get<long long>();
}

inline double get_number(const json& v, const char* what) {
  if (!v.is_number()) throw Error(ErrorKind::kParse, std::string(what) + " must be a number");
  return v.get<double>();
}

inline Eigen::Index get_dim(const json& j, const char* key) {
  const long long v = get_int(j, key);
  if (v < 1) throw Error(ErrorKind::kParse, std::string("field \"") + key + "\" must be positive");
  return static_cast<Eigen::Index>(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

inline json to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const Eigen::Index rows = detail::get_dim(j, "rows");
  const Eigen::Index cols = detail::get_dim(j, "cols");
  const json& re = detail::field(j, "re");
  const json& im = detail::field(j, "im");
  auto check_shape = [&](const json& part, const char* name) {
    if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != rows) {
      throw Error(ErrorKind::kParse, std::string("\"") + name + "\" must hold " + std::to_string(rows) + " rows");
    }
    for (const auto& row : part) {
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorKind::kParse, std::string("\"") + name + "\" rows must hold " + std::to_string(cols) + " entries");
      }
    }
  };
  check_shape(re, "re");
  check_shape(im, "im");
  std::vector<cplx> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      entries.emplace_back(detail::get_number(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], "matrix entry"),
                           detail::get_number(im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], "matrix entry"));
    }
  }
  return make_matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), entries);
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& k : ch.kraus()) ops.push_back(to_json(k));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(ops)}};
}

inline KrausChannel kraus_from_json(const json& j) {
  const Eigen::Index din = detail::get_dim(j, "dim_in");
  const Eigen::Index dout = detail::get_dim(j, "dim_out");
  const json& ops = detail::field(j, "kraus");
  if (!ops.is_array()) throw Error(ErrorKind::kParse, "\"kraus\" must be an array");
  std::vector<ComplexMatrix> ks;
  for (const auto& op : ops) ks.push_back(matrix_from_json(op));
  return {din, dout, std::move(ks)};
}

inline json to_json(const ChoiMatrix& c) {
  return {{"dim_in", c.dim_in()}, {"dim_out", c.dim_out()}, {"matrix", to_json(c.matrix())}};
}

inline ChoiMatrix choi_from_json(const json& j) {
  return {detail::get_dim(j, "dim_in"), detail::get_dim(j, "dim_out"), matrix_from_json(detail::field(j, "matrix"))};
}

/// Only Weyl-basis channels have this encoding; others raise InvalidArgument.
inline json to_json(const StochasticChannel& t) {
  if (!t.all_weyl()) throw Error(ErrorKind::kInvalidArgument, "only Weyl-basis stochastic channels serialize");
  json w = json::array();
  for (const auto& c : t.components()) {
    if (c.weight != 0.0) w.push_back({{"a", c.label->a}, {"b", c.label->b}, {"w", c.weight}});
  }
  return {{"dim", t.dim()}, {"nu", t.nu()}, {"weights", std::move(w)}};
}

inline StochasticChannel stochastic_from_json(const json& j, const Tolerances& tol = default_tolerances()) {
  const Eigen::Index dim = detail::get_dim(j, "dim");
  const json& ws = detail::field(j, "weights");
  if (!ws.is_array()) throw Error(ErrorKind::kParse, "\"weights\" must be an array");
  std::vector<std::pair<WeylIndex, double>> weights;
  for (const auto& w : ws) {
    weights.push_back({{static_cast<Eigen::Index>(detail::get_int(w, "a")), static_cast<Eigen::Index>(detail::get_int(w, "b"))},
                       detail::get_number(detail::field(w, "w"), "weight")});
  }
  StochasticChannel t = StochasticChannel::weyl(dim, weights, tol);
  if (j.contains("nu")) {
    const double nu = detail::get_number(j["nu"], "\"nu\"");
    if (std::abs(nu - t.nu()) > tol.normalization) {
      throw Error(ErrorKind::kInvalidChannel, "\"nu\" disagrees with the sum of weights");
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

using Model = std::variant<UniformStochasticModel, NonUniformStochasticModel, InstrumentImplementation>;

inline json to_json(const UniformStochasticModel& m) {
  json table = json::array();
  for (const auto& e : m.table()) table.push_back({{"a", e.a}, {"b", e.b}, {"channel", to_json(e.channel)}});
  return {{"type", "uniform"}, {"D", m.D()}, {"E", m.E()}, {"table", std::move(table)}};
}

inline json to_json(const NonUniformStochasticModel& m) {
  json table = json::array();
  for (const auto& e : m.table()) {
    table.push_back({{"a", e.a}, {"b", e.b}, {"j", e.j}, {"channel", to_json(e.channel)}});
  }
  return {{"type", "nonuniform"}, {"D", m.D()}, {"E", m.E()}, {"table", std::move(table)}};
}

inline json to_json(const InstrumentImplementation& impl) {
  json branches = json::array();
  for (const auto& b : impl.branches()) branches.push_back(to_json(b));
  return {{"type", "general"}, {"D", impl.D()}, {"E", impl.E()}, {"branches", std::move(branches)}};
}

inline json to_json(const Model& m) {
  return std::visit([](const auto& x) { return to_json(x); }, m);
}

inline Model model_from_json(const json& j) {
  const json& type = detail::field(j, "type");
  if (!type.is_string()) throw Error(ErrorKind::kParse, "\"type\" must be a string");
  const std::string t = type.get<std::string>();
  const Eigen::Index D = detail::get_dim(j, "D");
  const Eigen::Index E = detail::get_dim(j, "E");
  if (t == "general") {
    const json& bs = detail::field(j, "branches");
    if (!bs.is_array()) throw Error(ErrorKind::kParse, "\"branches\" must be an array");
    std::vector<KrausChannel> branches;
    for (const auto& b : bs) branches.push_back(kraus_from_json(b));
    return InstrumentImplementation(D, E, std::move(branches));
  }
  const json& table = detail::field(j, "table");
  if (!table.is_array()) throw Error(ErrorKind::kParse, "\"table\" must be an array");
  if (t == "uniform") {
    std::vector<UniformEntry> entries;
    for (const auto& e : table) {
      entries.push_back({detail::get_int(e, "a"), detail::get_int(e, "b"), stochastic_from_json(detail::field(e, "channel"))});
    }
    return UniformStochasticModel(D, E, std::move(entries));
  }
  if (t == "nonuniform") {
    std::vector<NonUniformEntry> entries;
    for (const auto& e : table) {
      entries.push_back({detail::get_int(e, "a"), detail::get_int(e, "b"), detail::get_int(e, "j"),
                         stochastic_from_json(detail::field(e, "channel"))});
    }
    return NonUniformStochasticModel(D, E, std::move(entries));
  }
  throw Error(ErrorKind::kParse, "unknown model type \"" + t + "\"");
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline json to_json(const MetricsReport& r) {
  json j;
  j["fidelity"] = r.fidelity;
  j["diamond_lower"] = r.diamond_lower;
  j["diamond_upper"] = r.diamond_upper;
  j["diamond_exact"] = r.diamond_exact ? json(*r.diamond_exact) : json(nullptr);
  j["nu00"] = r.nu00 ? json(*r.nu00) : json(nullptr);
  j["lambda00"] = r.lambda00 ? json(*r.lambda00) : json(nullptr);
  j["per_branch_trace_distances"] = r.per_branch_trace_distances;
  j["conventions"] = {{"diamond", "full-norm"}};
  return j;
}

inline json to_json(const DiamondNormResult& r) {
  return {{"value", r.value},        {"primal_bound", r.primal_bound}, {"dual_bound", r.dual_bound},
          {"gap", r.gap},            {"iterations", r.iterations},     {"converged", r.converged}};
}

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

/// %.17g; enough digits to round-trip any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string metrics_csv_header() {
  return "fidelity,diamond_lower,diamond_upper,diamond_exact,nu00,lambda00,per_branch_trace_distances";
}

/// Optional fields are empty cells; branch distances are ';'-separated.
inline std::string metrics_csv_row(const MetricsReport& r) {
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  std::string branches;
  for (std::size_t k = 0; k < r.per_branch_trace_distances.size(); ++k) {
    if (k) branches += ';';
    branches += format_double(r.per_branch_trace_distances[k]);
  }
  return format_double(r.fidelity) + ',' + format_double(r.diamond_lower) + ',' + format_double(r.diamond_upper) + ',' +
         opt(r.diamond_exact) + ',' + opt(r.nu00) + ',' + opt(r.lambda00) + ',' + branches;
}

}  // namespace qinstr::io

#endif  // QINSTR_IO_HPP
