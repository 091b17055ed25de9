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

// idemconv: batch front end. Reads JSON, writes JSON to stdout (or --out).
//
// Exit codes: 0 ok, 1 check failure, 2 schema, 3 dimension,
// 4 normalization, 10 certified witness, 11 inconclusive certification.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idemconv/barycenter.hpp"
#include "idemconv/checks.hpp"
#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/io.hpp"
#include "idemconv/measures.hpp"
#include "idemconv/probe.hpp"
#include "idemconv/svg.hpp"

namespace {

using idemconv::io::json;
namespace io = idemconv::io;
namespace probe = idemconv::probe;

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kSchema = 2,
  kDimension = 3,
  kNormalization = 4,
  kWitness = 10,
  kInconclusive = 11,
};

struct Output {
  std::string path;

  void emit(const json& j) const {
    const auto text = io::dump(j);
    if (path.empty()) {
      std::cout << text;
    } else {
      io::write_text_file(path, text);
    }
  }
};

// -- hull --------------------------------------------------------------------

template <idemconv::Flavor F>
int hull(const json& poly_j, const json& queries_j, const std::string& svg_path, const Output& out) {
  const auto poly = io::polytope_from_json<F>(poly_j);
  const auto queries = io::queries_from_json<F>(queries_j);
  json results = json::array();
  std::vector<bool> member;
  for (const auto& q : queries) {
    const auto proj = idemconv::hull_project(q, poly);
    const auto m = idemconv::hull_member(q, poly);
    json lambdas = json::array();
    for (const auto& l : m.lambdas) lambdas.push_back(io::scalar_to_json<F>(l));
    results.push_back(json{{"query", io::point_to_json<F>(q)},
                           {"member", m.member},
                           {"projection", io::point_to_json<F>(proj.point)},
                           {"lambdas", lambdas},
                           {"distance", io::number(m.distance)}});
    member.push_back(m.member);
  }
  if (!svg_path.empty()) io::write_text_file(svg_path, idemconv::svg::hull_svg(poly, queries, member));
  out.emit(json{{"flavor", std::string(F::name)}, {"results", results}});
  return kOk;
}

int cmd_hull(const std::string& poly_path, const std::string& queries_path, const std::string& svg_path,
             const Output& out) {
  const auto pj = io::read_json_file(poly_path);
  const auto qj = io::read_json_file(queries_path);
  if (io::flavor_of(pj) == idemconv::MaxPlus::name) return hull<idemconv::MaxPlus>(pj, qj, svg_path, out);
  return hull<idemconv::MaxTimes>(pj, qj, svg_path, out);
}

// -- bary --------------------------------------------------------------------

int cmd_bary(const std::string& path, const Output& out) {
  const auto j = io::read_json_file(path);
  if (io::flavor_of(j) == idemconv::MaxPlus::name) {
    const auto mu = io::embedded_from_json<idemconv::MaxPlus>(j);
    out.emit(json{{"flavor", "max-plus"}, {"barycenter", io::point_to_json<idemconv::MaxPlus>(idemconv::bary_mp(mu))}});
  } else {
    const auto nu = io::embedded_from_json<idemconv::MaxTimes>(j);
    out.emit(json{{"flavor", "max-times"}, {"barycenter", io::point_to_json<idemconv::MaxTimes>(idemconv::bary_mt(nu))}});
  }
  return kOk;
}

// -- iso ---------------------------------------------------------------------

int cmd_iso(const std::string& path, const std::string& direction, int depth, bool round_trip, const Output& out) {
  using idemconv::MaxPlus;
  using idemconv::MaxTimes;
  const auto j = io::read_json_file(path);
  json result;
  double err = 0.0;
  if (direction == "gx") {
    const auto nu = io::measure_from_json<MaxTimes>(j);
    const auto mu = idemconv::iso_gX(nu);
    result = io::measure_to_json(mu);
    const auto back = idemconv::iso_gX_inv(mu);
    for (std::size_t i = 0; i < nu.weights().size(); ++i) err = std::max(err, std::abs(back.weight(i) - nu.weight(i)));
  } else if (direction == "gx-inv") {
    const auto mu = io::measure_from_json<MaxPlus>(j);
    const auto nu = idemconv::iso_gX_inv(mu);
    result = io::measure_to_json(nu);
    const auto back = idemconv::iso_gX(nu);
    for (std::size_t i = 0; i < mu.weights().size(); ++i) err = std::max(err, idemconv::rho_metric(back.weight(i), mu.weight(i)));
  } else {
    const auto nu = io::embedded_from_json<MaxTimes>(j);
    if (depth <= 0) {
      std::vector<idemconv::ExtendedReal> logs;
      for (const auto& a : nu.atoms()) {
        for (double c : a) logs.push_back(idemconv::to_maxplus(idemconv::UnitWeight(c)));
      }
      depth = idemconv::default_depth(logs);
    }
    const auto h = idemconv::build_embedding(nu.dim(), depth);
    result = io::embedded_to_json(idemconv::transport_lh(nu, h));
    result["embedding_depth"] = depth;
  }
  if (round_trip && direction != "lh") {
    result["round_trip"] = json{{"max_error", io::number(err)}, {"ok", err <= 1e-12}};
  }
  out.emit(result);
  return kOk;
}

// -- probe -------------------------------------------------------------------

int cmd_probe(const std::string& map_path, const std::string& config_path, const std::string& pin_path,
              const std::string& svg_path, const Output& out) {
  const auto spec = io::read_json_file(map_path);
  const auto f = io::map_from_json(spec);
  probe::ProbeConfig cfg;
  bool search = false;
  if (!config_path.empty()) {
    const auto cj = io::read_json_file(config_path);
    cfg = io::config_from_json(cj);
    if (cj.contains("witness_search")) {
      if (!cj.at("witness_search").is_boolean()) throw idemconv::SchemaError("config: 'witness_search' must be a boolean");
      search = cj.at("witness_search").get<bool>();
    }
  }
  std::vector<probe::ChartPoint> pins;
  if (!pin_path.empty()) pins = io::pins_from_json(io::read_json_file(pin_path), f.source());

  auto verdict = probe::probe_map(f, cfg, pins);
  json search_j;
  if (search) {
    const auto rep = probe::witness_search(f, cfg);
    for (const auto& c : rep.candidates) probe::tally(verdict, c.record);
    search_j = json{{"lattice_points", rep.lattice_points},
                    {"probed", rep.probed.size()},
                    {"candidates", rep.candidates.size()}};
  }
  auto j = io::verdict_to_json(verdict, f, cfg);
  j["map_spec"] = io::map_to_json(f);
  if (search) j["witness_search"] = search_j;

  if (!svg_path.empty() && f.target().dim() == 2) {
    for (const auto& r : verdict.records) {
      if (r.kind == probe::PointKind::Witness) {
        io::write_text_file(svg_path, idemconv::svg::witness_svg(f, r));
        break;
      }
    }
  }
  out.emit(j);
  if (verdict.witness_count > 0) return kWitness;
  if (verdict.inconclusive_count > 0) return kInconclusive;
  return kOk;
}

// -- check -------------------------------------------------------------------

int cmd_check(const std::string& suite, long trials, std::uint64_t seed, const Output& out) {
  const auto reports = idemconv::checks::run(suite, trials, seed);
  json suites = json::array();
  bool passed = true;
  for (const auto& r : reports) {
    suites.push_back(io::report_to_json(r));
    passed = passed && r.passed();
  }
  out.emit(json{{"suite", suite}, {"seed", seed}, {"trials", trials}, {"passed", passed}, {"suites", suites}});
  return passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idempotent measures, tropical convexity and openness probes"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("-o,--out", out.path, "write JSON here instead of stdout");

  std::string polytope, queries, svg_path, measure, direction = "gx", map_path, config_path, pin_path, suite;
  int depth = 0;
  bool round_trip = false;
  long trials = 10000;
  std::uint64_t seed = 1;

  auto* hull = app.add_subcommand("hull", "membership and projection onto a tropical polytope");
  hull->add_option("--polytope", polytope)->required();
  hull->add_option("--queries", queries)->required();
  hull->add_option("--svg", svg_path);

  auto* bary = app.add_subcommand("bary", "barycenter of a finitely supported measure");
  bary->add_option("--measure", measure)->required();

  auto* iso = app.add_subcommand("iso", "max-times <-> max-plus transport of measures");
  iso->add_option("--measure", measure)->required();
  iso->add_option("--direction", direction)->check(CLI::IsMember({"gx", "gx-inv", "lh"}));
  iso->add_option("--embedding-depth", depth, "truncation depth for lh (default: from the data)");
  iso->add_flag("--round-trip", round_trip);

  auto* pr = app.add_subcommand("probe", "epsilon-delta openness probe of a map spec");
  pr->add_option("--map", map_path)->required();
  pr->add_option("--config", config_path);
  pr->add_option("--pin", pin_path);
  pr->add_option("--svg", svg_path);

  auto* check = app.add_subcommand("check", "run invariant suites");
  check->add_option("--suite", suite)->required();
  check->add_option("--trials", trials)->check(CLI::PositiveNumber);
  check->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchema;
  }

  try {
    if (*hull) return cmd_hull(polytope, queries, svg_path, out);
    if (*bary) return cmd_bary(measure, out);
    if (*iso) return cmd_iso(measure, direction, depth, round_trip, out);
    if (*pr) return cmd_probe(map_path, config_path, pin_path, svg_path, out);
    if (*check) return cmd_check(suite, trials, seed, out);
  } catch (const idemconv::NormalizationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNormalization;
  } catch (const idemconv::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDimension;
  } catch (const idemconv::SpaceMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDimension;
  } catch (const idemconv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSchema;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSchema;
  }
  return kSchema;
}
