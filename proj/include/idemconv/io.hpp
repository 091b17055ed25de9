/*
 *   Copyright 2026 The idemconv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * JSON serialization (nlohmann::json, insertion-ordered objects).
 *
 * Numbers are written rounded to 12 significant digits; bottom of R_max is
 * the string "-inf". "-inf" is rejected in max-times input. Point
 * coordinates are written in native coordinates of the flavor.
 *
 * Schemas:
 *   measure          {"flavor", "weights": {label: w, ...}}
 *                    or {"flavor", "space": [labels], "weights": [w, ...]}
 *   embedded measure {"flavor", "atoms": [[...], ...], "weights": [...]}
 *   polytope         {"flavor", "generators": [[...], ...]}
 *   queries          {"queries": [[...], ...]}
 *   map spec         {"name"?, "flavor", "source": domain, "target": domain,
 *                     "expr": [expression per target coordinate]}
 *   domain           {"factors": [{"kind": "box", "dim", "lo", "hi"} | {"kind": "pair"}]}
 *   expression       ["max", e, e, ...] | ["add", e, e, ...] | ["mul", e, e, ...]
 *                    | ["coord", i] | ["const", c]
 *   pins             {"points": [[...], ...]}
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "idemconv/barycenter.hpp"
#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/expr.hpp"
#include "idemconv/measures.hpp"
#include "idemconv/probe.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv::io {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

/// v rounded to 12 significant digits (and -0 folded into 0).
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + ": expected a number");
  return j.get<double>();
}

// ---------------------------------------------------------------------------
// Scalars and points

template <Flavor F>
json scalar_to_json(const typename F::scalar& s) {
  if constexpr (std::same_as<F, MaxPlus>) {
    return s.is_bottom() ? json("-inf") : number(s.value());
  } else {
    return number(s);
  }
}

template <Flavor F>
typename F::scalar scalar_from_json(const json& j) {
  if constexpr (std::same_as<F, MaxPlus>) {
    if (j.is_string()) {
      if (j.get<std::string>() == "-inf") return ExtendedReal::bottom();
      throw SchemaError("max-plus scalar: unknown token '" + j.get<std::string>() + "'");
    }
    const double v = as_double(j, "max-plus scalar");
    if (!std::isfinite(v)) throw SchemaError("max-plus scalar: not finite");
    return ExtendedReal(v);
  } else {
    if (j.is_string()) throw SchemaError("max-times scalar: token '" + j.get<std::string>() + "' not allowed");
    const double v = as_double(j, "max-times scalar");
    if (!(v >= 0.0 && v <= 1.0)) throw SchemaError("max-times scalar: value outside [0,1]");
    return v;
  }
}

template <Flavor F>
json point_to_json(const Point<F>& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(scalar_to_json<F>(c));
  return a;
}

template <Flavor F>
Point<F> point_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("point: expected an array");
  Point<F> p;
  for (const auto& c : j) p.push_back(scalar_from_json<F>(c));
  return p;
}

inline std::string flavor_of(const json& j) {
  const auto& f = field(j, "flavor");
  if (!f.is_string()) throw SchemaError("flavor: expected a string");
  const auto s = f.get<std::string>();
  if (s != MaxPlus::name && s != MaxTimes::name) throw SchemaError("unknown flavor '" + s + "'");
  return s;
}

// ---------------------------------------------------------------------------
// Measures

template <Flavor F>
Measure<F> measure_from_json(const json& j) {
  if (flavor_of(j) != F::name) throw SchemaError("measure: flavor mismatch");
  const auto& w = field(j, "weights");
  std::vector<std::string> labels;
  std::vector<typename F::scalar> weights;
  if (w.is_object()) {
    for (const auto& [k, v] : w.items()) {
      labels.push_back(k);
      weights.push_back(scalar_from_json<F>(v));
    }
  } else if (w.is_array()) {
    for (const auto& v : w) weights.push_back(scalar_from_json<F>(v));
    if (j.contains("space")) {
      for (const auto& l : j.at("space")) {
        if (!l.is_string()) throw SchemaError("space: labels must be strings");
        labels.push_back(l.get<std::string>());
      }
      if (labels.size() != weights.size()) throw DimensionError("measure: space and weights differ in size");
    } else {
      for (std::size_t i = 0; i < weights.size(); ++i) labels.push_back(std::to_string(i));
    }
  } else {
    throw SchemaError("measure: 'weights' must be an object or an array");
  }
  if (weights.empty()) throw SchemaError("measure: no weights");
  try {
    return Measure<F>(FiniteSpace(std::move(labels)), std::move(weights));
  } catch (const NormalizationError&) {
    throw;
  } catch (const DimensionError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
}

template <Flavor F>
json measure_to_json(const Measure<F>& m) {
  json w = json::object();
  for (std::size_t i = 0; i < m.space().size(); ++i) w[m.space().label(i)] = scalar_to_json<F>(m.weight(i));
  return json{{"flavor", std::string(F::name)}, {"weights", w}};
}

template <Flavor F>
EmbeddedMeasure<F> embedded_from_json(const json& j) {
  if (flavor_of(j) != F::name) throw SchemaError("measure: flavor mismatch");
  const auto& a = field(j, "atoms");
  const auto& w = field(j, "weights");
  if (!a.is_array() || !w.is_array()) throw SchemaError("measure: 'atoms' and 'weights' must be arrays");
  std::vector<Point<F>> atoms;
  std::vector<typename F::scalar> weights;
  for (const auto& p : a) atoms.push_back(point_from_json<F>(p));
  for (const auto& v : w) weights.push_back(scalar_from_json<F>(v));
  if (atoms.empty()) throw SchemaError("measure: no atoms");
  return EmbeddedMeasure<F>(std::move(atoms), std::move(weights));
}

template <Flavor F>
json embedded_to_json(const EmbeddedMeasure<F>& m) {
  json atoms = json::array();
  json weights = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    atoms.push_back(point_to_json<F>(m.atoms()[i]));
    weights.push_back(scalar_to_json<F>(m.weights()[i]));
  }
  return json{{"flavor", std::string(F::name)}, {"atoms", atoms}, {"weights", weights}};
}

// ---------------------------------------------------------------------------
// Polytopes

template <Flavor F>
Polytope<F> polytope_from_json(const json& j) {
  if (flavor_of(j) != F::name) throw SchemaError("polytope: flavor mismatch");
  const auto& g = field(j, "generators");
  if (!g.is_array() || g.empty()) throw SchemaError("polytope: 'generators' must be a non-empty array");
  std::vector<Point<F>> gens;
  for (const auto& p : g) gens.push_back(point_from_json<F>(p));
  return Polytope<F>(std::move(gens));
}

template <Flavor F>
std::vector<Point<F>> queries_from_json(const json& j) {
  const json& q = j.is_array() ? j : field(j, "queries");
  if (!q.is_array()) throw SchemaError("queries: expected an array");
  std::vector<Point<F>> out;
  for (const auto& p : q) out.push_back(point_from_json<F>(p));
  return out;
}

// ---------------------------------------------------------------------------
// Domains, expressions, map specs

inline probe::Domain domain_from_json(const json& j, probe::Model model) {
  const auto& fs = field(j, "factors");
  if (!fs.is_array() || fs.empty()) throw SchemaError("domain: 'factors' must be a non-empty array");
  std::vector<probe::Factor> factors;
  for (const auto& f : fs) {
    const auto& kind = field(f, "kind");
    if (kind == "pair") {
      factors.push_back(probe::Factor::pair());
    } else if (kind == "box") {
      const auto& d = field(f, "dim");
      if (!d.is_number_integer() || d.get<long>() < 1) throw SchemaError("box: 'dim' must be a positive integer");
      double lo = 0.0;
      double hi = 0.0;
      if (model == probe::Model::MaxPlus) {
        lo = MaxPlus::chart(scalar_from_json<MaxPlus>(field(f, "lo")));
        hi = MaxPlus::chart(scalar_from_json<MaxPlus>(field(f, "hi")));
      } else {
        lo = scalar_from_json<MaxTimes>(field(f, "lo"));
        hi = scalar_from_json<MaxTimes>(field(f, "hi"));
      }
      if (!(lo <= hi)) throw SchemaError("box: lo must not exceed hi");
      factors.push_back(probe::Factor::box(d.get<std::size_t>(), lo, hi));
    } else {
      throw SchemaError("domain: unknown factor kind");
    }
  }
  return probe::Domain(model, std::move(factors));
}

inline json chart_scalar_to_json(probe::Model model, double c) {
  if (model == probe::Model::MaxPlus) return scalar_to_json<MaxPlus>(MaxPlus::from_chart(c));
  return number(c);
}

inline json domain_to_json(const probe::Domain& d) {
  json fs = json::array();
  for (const auto& f : d.factors()) {
    if (f.kind == probe::Factor::Kind::Pair) {
      fs.push_back(json{{"kind", "pair"}});
    } else {
      fs.push_back(json{{"kind", "box"},
                        {"dim", f.dim},
                        {"lo", chart_scalar_to_json(d.model(), f.lo)},
                        {"hi", chart_scalar_to_json(d.model(), f.hi)}});
    }
  }
  return json{{"factors", fs}};
}

inline probe::Expr expr_from_json(const json& j, probe::Model model) {
  using probe::Expr;
  if (!j.is_array() || j.empty() || !j[0].is_string()) throw SchemaError("expression: expected [op, ...]");
  const auto op = j[0].get<std::string>();
  if (op == "coord") {
    if (j.size() != 2 || !j[1].is_number_integer() || j[1].get<long>() < 0) {
      throw SchemaError("expression: ['coord', i] with i >= 0");
    }
    return Expr::make_coord(j[1].get<std::size_t>());
  }
  if (op == "const") {
    if (j.size() != 2) throw SchemaError("expression: ['const', c]");
    if (model == probe::Model::MaxPlus) return Expr::make_const(scalar_from_json<MaxPlus>(j[1]));
    return Expr::make_const(ExtendedReal(scalar_from_json<MaxTimes>(j[1])));
  }
  Expr::Op code;
  if (op == "max") {
    code = Expr::Op::Max;
  } else if (op == "add") {
    code = Expr::Op::Add;
  } else if (op == "mul") {
    code = Expr::Op::Mul;
  } else {
    throw SchemaError("expression: unknown operator '" + op + "'");
  }
  std::vector<Expr> args;
  for (std::size_t i = 1; i < j.size(); ++i) args.push_back(expr_from_json(j[i], model));
  return Expr::make(code, std::move(args));
}

inline json expr_to_json(const probe::Expr& e, probe::Model model) {
  using probe::Expr;
  switch (e.op) {
    case Expr::Op::Coord: return json::array({"coord", e.coord});
    case Expr::Op::Const:
      return json::array({"const", model == probe::Model::MaxPlus ? scalar_to_json<MaxPlus>(e.constant)
                                                                  : number(e.constant.to_double())});
    default: {
      json a = json::array({std::string(probe::op_name(e.op))});
      for (const auto& x : e.args) a.push_back(expr_to_json(x, model));
      return a;
    }
  }
}

inline probe::ExprMap map_from_json(const json& j) {
  const auto model = probe::parse_model(flavor_of(j));
  auto source = domain_from_json(field(j, "source"), model);
  auto target = domain_from_json(field(j, "target"), model);
  const auto& ex = field(j, "expr");
  if (!ex.is_array()) throw SchemaError("map: 'expr' must be an array");
  std::vector<probe::Expr> exprs;
  for (const auto& e : ex) exprs.push_back(expr_from_json(e, model));
  std::string name = "map";
  if (j.contains("name") && j.at("name").is_string()) name = j.at("name").get<std::string>();
  probe::ExprMap m(std::move(name), std::move(source), std::move(target), std::move(exprs));
  m.check_typing();
  return m;
}

inline json map_to_json(const probe::ExprMap& m) {
  json ex = json::array();
  for (const auto& e : m.exprs()) ex.push_back(expr_to_json(e, m.model()));
  return json{{"name", m.description()},
              {"flavor", std::string(probe::model_name(m.model()))},
              {"source", domain_to_json(m.source())},
              {"target", domain_to_json(m.target())},
              {"expr", ex}};
}

/// Chart point from native coordinates; must lie in the domain.
inline probe::ChartPoint chart_point_from_json(const json& j, const probe::Domain& d) {
  probe::ChartPoint c;
  if (d.model() == probe::Model::MaxPlus) {
    c = d.chart_of(point_from_json<MaxPlus>(j));
  } else {
    c = d.chart_of(point_from_json<MaxTimes>(j));
  }
  if (c.size() != d.dim()) throw DimensionError("point: wrong dimension for the domain");
  if (!d.contains(c, 1e-9)) throw SchemaError("point: outside the domain");
  return d.snap(c);
}

inline json native_point_to_json(std::span<const double> c, probe::Model model) {
  json a = json::array();
  for (double v : c) a.push_back(chart_scalar_to_json(model, v));
  return a;
}

inline std::vector<probe::ChartPoint> pins_from_json(const json& j, const probe::Domain& d) {
  const json& pts = j.is_array() ? j : field(j, "points");
  if (!pts.is_array()) throw SchemaError("pins: 'points' must be an array");
  std::vector<probe::ChartPoint> out;
  for (const auto& p : pts) out.push_back(chart_point_from_json(p, d));
  return out;
}

// ---------------------------------------------------------------------------
// Probe configuration and verdicts

inline probe::ProbeConfig config_from_json(const json& j, probe::ProbeConfig cfg = {}) {
  if (!j.is_object()) throw SchemaError("config: expected an object");
  auto real = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = as_double(j.at(k), k);
  };
  auto count = [&](const char* k, auto& dst) {
    if (!j.contains(k)) return;
    if (!j.at(k).is_number_integer() || j.at(k).get<long long>() < 0) {
      throw SchemaError(std::string("config: '") + k + "' must be a non-negative integer");
    }
    dst = j.at(k).get<std::remove_reference_t<decltype(dst)>>();
  };
  real("epsilon", cfg.epsilon);
  if (j.contains("deltas")) {
    cfg.deltas.clear();
    for (const auto& d : j.at("deltas")) cfg.deltas.push_back(as_double(d, "deltas"));
  }
  count("target_samples", cfg.target_samples);
  real("grid", cfg.grid);
  real("tolerance", cfg.tolerance);
  count("point_samples", cfg.point_samples);
  count("seed", cfg.seed);
  real("certification_resolution", cfg.certification_resolution);
  count("cell_budget", cfg.cell_budget);
  count("max_certifications", cfg.max_certifications);
  count("search_top_k", cfg.search_top_k);
  cfg.validate();
  return cfg;
}

inline json config_to_json(const probe::ProbeConfig& cfg) {
  json deltas = json::array();
  for (double d : cfg.deltas) deltas.push_back(number(d));
  return json{{"epsilon", number(cfg.epsilon)},
              {"deltas", deltas},
              {"target_samples", cfg.target_samples},
              {"grid", number(cfg.grid)},
              {"tolerance", number(cfg.tolerance)},
              {"point_samples", cfg.point_samples},
              {"seed", cfg.seed},
              {"certification_resolution", number(cfg.certification_resolution)},
              {"cell_budget", cfg.cell_budget},
              {"max_certifications", cfg.max_certifications},
              {"search_top_k", cfg.search_top_k}};
}

inline json certification_to_json(const probe::Certification& c, const probe::Domain& source) {
  json j{{"status", std::string(probe::cert_name(c.status))},
         {"epsilon", number(c.epsilon)},
         {"resolution", number(c.resolution)},
         {"tolerance", number(c.tolerance)},
         {"lipschitz", number(c.lipschitz)},
         {"cells", c.cells},
         {"unresolved", c.unresolved},
         {"budget_exhausted", c.budget_exhausted}};
  if (c.status == probe::CertStatus::Certified) j["gap_lower_bound"] = number(c.gap_lower_bound);
  if (!c.preimage.empty()) j["preimage"] = native_point_to_json(c.preimage, source.model());
  return j;
}

inline json record_to_json(const probe::PointRecord& r, const probe::ChartMap& f) {
  const auto model = f.source().model();
  json j{{"kind", std::string(probe::kind_name(r.kind))},
         {"x", native_point_to_json(r.x, model)},
         {"fx", native_point_to_json(r.fx, model)},
         {"epsilon", number(r.epsilon)}};
  if (r.kind == probe::PointKind::OpenEvidence) {
    j["delta_star"] = r.delta_star ? number(*r.delta_star) : json(nullptr);
  }
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back(json{{"delta", number(l.delta)},
                          {"targets", l.targets},
                          {"covered", l.covered},
                          {"max_gap", number(l.max_gap)}});
  }
  j["levels"] = levels;
  if (r.kind != probe::PointKind::OpenEvidence) {
    j["target"] = native_point_to_json(r.target, model);
    j["delta"] = number(r.delta);
    j["target_distance"] = number(r.target_distance);
    if (r.certification) j["certification"] = certification_to_json(*r.certification, f.source());
  }
  return j;
}

inline json verdict_to_json(const probe::Verdict& v, const probe::ChartMap& f, const probe::ProbeConfig& cfg) {
  json records = json::array();
  for (const auto& r : v.records) records.push_back(record_to_json(r, f));
  return json{{"map", v.map},
              {"flavor", std::string(probe::model_name(f.source().model()))},
              {"semantics", std::string(probe::kVerdictSemantics)},
              {"config", config_to_json(cfg)},
              {"summary",
               {{"points", v.records.size()},
                {"open_evidence", v.open_count},
                {"witness", v.witness_count},
                {"inconclusive", v.inconclusive_count}}},
              {"records", records}};
}

inline json report_to_json(const IdentityReport& r) {
  return json{{"suite", r.name},
              {"passed", r.passed()},
              {"cases", r.cases},
              {"failures", r.failures},
              {"max_discrepancy", number(r.max_discrepancy)},
              {"tolerance", number(r.tolerance)}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace idemconv::io
