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
 * Named invariant suites, as run by `idemconv check`.
 *
 *   def1        measure axioms for eval (both flavors)
 *   prop-af     truncation affinity f_n((l + s) \/ k) = (l + f_n(s)) \/ f_n(k)
 *   embed-g     (.,+)-affinity of the truncated log embedding
 *   lemma-l     l_h against pushforward o g_X and the density formula
 *   hombar      h(beta.(nu)) = beta(l_h(nu))
 *   monad       beta o I(delta) = id
 *   naturality  beta o I^2 f = I f o beta
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "idemconv/barycenter.hpp"
#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/measures.hpp"
#include "idemconv/sampling.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv::checks {

using Report = IdentityReport;

namespace detail {

inline Report make(std::string name, double tol) {
  Report r;
  r.name = std::move(name);
  r.tolerance = tol;
  return r;
}

inline double gap(ExtendedReal a, ExtendedReal b) {
  if (a == b) return 0.0;
  if (a.is_bottom() || b.is_bottom()) return std::numeric_limits<double>::infinity();
  const double g = std::abs(a.value() - b.value());
  return g > 0.0 ? g : std::numeric_limits<double>::min();
}

template <Flavor F>
Function<F> random_function(sampling::Rng& rng, const FiniteSpace& space) {
  std::vector<typename F::scalar> v(space.size());
  for (auto& x : v) {
    if constexpr (std::same_as<F, MaxPlus>) {
      x = sampling::uniform(rng) < 0.1 ? ExtendedReal::bottom() : ExtendedReal(sampling::dyadic(rng, -8.0, 8.0));
    } else {
      x = sampling::uniform(rng);
    }
  }
  return Function<F>(space, std::move(v));
}

}  // namespace detail

/// Measure axioms on random measures, `functions` test functions each.
/// Max-plus data is dyadic and compared exactly.
inline Report def1(long trials, std::uint64_t seed, int functions = 10) {
  sampling::Rng rng(seed);
  Report mp = detail::make("def1-max-plus", 0.0);
  Report mt = detail::make("def1-max-times", 1e-12);
  for (long t = 0; t < trials; ++t) {
    const auto space = FiniteSpace::of_size(1 + sampling::index(rng, 5));
    const auto mu = sampling::measure<MaxPlus>(rng, space, 0.2, true);
    const auto nu = sampling::measure<MaxTimes>(rng, space, 0.2);
    mp.record(detail::gap(eval_mp(mu, Function<MaxPlus>::constant(space, ExtendedReal(0.0))), ExtendedReal(0.0)));
    mt.record(std::abs(eval_mt(nu, Function<MaxTimes>::constant(space, 1.0)) - 1.0));
    for (int k = 0; k < functions; ++k) {
      const auto phi = detail::random_function<MaxPlus>(rng, space);
      const auto psi = detail::random_function<MaxPlus>(rng, space);
      const ExtendedReal c(sampling::dyadic(rng, -8.0, 8.0));
      std::vector<ExtendedReal> shifted;
      std::vector<ExtendedReal> joined;
      for (std::size_t i = 0; i < space.size(); ++i) {
        shifted.push_back(mp_mul(c, phi(i)));
        joined.push_back(mp_join(phi(i), psi(i)));
      }
      mp.record(detail::gap(eval_mp(mu, Function<MaxPlus>(space, shifted)), mp_mul(c, eval_mp(mu, phi))));
      mp.record(detail::gap(eval_mp(mu, Function<MaxPlus>(space, joined)),
                            mp_join(eval_mp(mu, phi), eval_mp(mu, psi))));

      const auto f = detail::random_function<MaxTimes>(rng, space);
      const auto g = detail::random_function<MaxTimes>(rng, space);
      const double a = sampling::uniform(rng);
      std::vector<double> scaled;
      std::vector<double> maxed;
      for (std::size_t i = 0; i < space.size(); ++i) {
        scaled.push_back(a * f(i));
        maxed.push_back(std::max(f(i), g(i)));
      }
      mt.record(std::abs(eval_mt(nu, Function<MaxTimes>(space, scaled)) - a * eval_mt(nu, f)));
      mt.record(std::abs(eval_mt(nu, Function<MaxTimes>(space, maxed)) - std::max(eval_mt(nu, f), eval_mt(nu, g))));
    }
  }
  mp.merge(mt);
  mp.name = "def1";
  mp.tolerance = 1e-12;
  return mp;
}

/// The quarter-step grid {0, -0.25, ..., -5, -inf}.
inline std::vector<ExtendedReal> quarter_grid() {
  std::vector<ExtendedReal> g;
  for (int i = 0; i <= 20; ++i) g.emplace_back(-0.25 * i);
  g.push_back(ExtendedReal::bottom());
  return g;
}

inline double truncation_affinity_gap(ExtendedReal l, ExtendedReal s, ExtendedReal k, int n) {
  const double lhs = truncate_n(mp_join(mp_mul(l, s), k), n);
  const ExtendedReal rhs = mp_join(mp_mul(l, ExtendedReal(truncate_n(s, n))), ExtendedReal(truncate_n(k, n)));
  return detail::gap(ExtendedReal(lhs), rhs);
}

/// Exhaustive on the quarter grid for n = 1..6, then `trials` random triples.
inline Report prop_af(long trials, std::uint64_t seed) {
  Report r = detail::make("prop-af", 0.0);
  const auto grid = quarter_grid();
  for (const auto& l : grid) {
    for (const auto& s : grid) {
      for (const auto& k : grid) {
        for (int n = 1; n <= 6; ++n) r.record(truncation_affinity_gap(l, s, k, n));
      }
    }
  }
  sampling::Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const auto l = sampling::weight<MaxPlus>(rng, 0.1, false, 8.0);
    const auto s = sampling::weight<MaxPlus>(rng, 0.1, false, 8.0);
    const auto k = sampling::weight<MaxPlus>(rng, 0.1, false, 8.0);
    r.record(truncation_affinity_gap(l, s, k, 1 + static_cast<int>(sampling::index(rng, 8))));
  }
  return r;
}

/// (.,+)-affinity of build_embedding(d, N) for d <= 3, N <= 8.
inline Report embed_g(long trials, std::uint64_t seed) {
  Report r = detail::make("embed-g", 1e-12);
  sampling::Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const std::size_t d = 1 + sampling::index(rng, 3);
    const int depth = 1 + static_cast<int>(sampling::index(rng, 8));
    const auto rep = check_affine(
        build_embedding(d, depth), [d](sampling::Rng& g) { return sampling::unit_cube_point(g, d); }, 1,
        rng(), 1e-12);
    r.record(rep.max_discrepancy);
  }
  return r;
}

/// l_h(nu) against pushforward o g_X (atoms placed at h(x_i)), exactly, and
/// the transported weights against the density formula within 1e-9.
inline Report lemma_l(long trials, std::uint64_t seed) {
  Report r = detail::make("lemma-l", 1e-9);
  sampling::Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    const std::size_t d = 1 + sampling::index(rng, 3);
    const std::size_t n = 1 + sampling::index(rng, 5);
    const auto h = build_embedding(d, 1 + static_cast<int>(sampling::index(rng, 6)));
    std::vector<MaxTimesPoint> atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(sampling::unit_cube_point(rng, d));
    const EmbeddedMeasure<MaxTimes> nu(atoms, sampling::normalized_weights<MaxTimes>(rng, n));

    const auto lh = transport_lh(nu, h);
    const auto via_g = place_atoms(iso_gX(as_space_measure(nu)), [&](std::size_t i) { return h(nu.atoms()[i]); });
    r.record(lh.atoms() == via_g.atoms() && lh.weights() == via_g.weights()
                 ? 0.0
                 : std::numeric_limits<double>::infinity());

    const auto space_mu = as_space_measure(lh);
    for (std::size_t i = 0; i < lh.size(); ++i) {
      const auto label = space_mu.space().label(i);
      r.record(detail::gap(density_inf_formula(space_mu, label), lh.weights()[i]));
    }
  }
  return r;
}

/// Commuting square for random polytopes K in [0,1]^d, d <= 4.
inline Report hombar(long trials, std::uint64_t seed) {
  Report r = detail::make("hombar", 1e-9);
  sampling::Rng rng(seed);
  const long per = 50;
  for (long t = 0; t < trials; t += per) {
    const std::size_t d = 1 + sampling::index(rng, 4);
    std::vector<MaxTimesPoint> gens;
    const std::size_t g = 1 + sampling::index(rng, 4);
    for (std::size_t i = 0; i < g; ++i) gens.push_back(sampling::unit_cube_point(rng, d));
    const Polytope<MaxTimes> k(std::move(gens));
    const int depth = 1 + static_cast<int>(sampling::index(rng, 6));
    auto part = check_hombar_square(k, depth, std::min(per, trials - t), rng(), 5, 1e-9);
    r.merge(part);
  }
  return r;
}

inline Report monad(long trials, std::uint64_t seed) {
  Report r = detail::make("monad", 0.0);
  r.merge(check_monad_identity_exhaustive<MaxPlus>());
  r.merge(check_monad_identity_exhaustive<MaxTimes>());
  r.merge(check_monad_identity<MaxPlus>(3, trials, seed));
  r.merge(check_monad_identity<MaxTimes>(3, trials, seed + 1));
  return r;
}

inline Report naturality(long trials, std::uint64_t seed) {
  Report r = detail::make("naturality", 0.0);
  r.merge(check_naturality_exhaustive<MaxPlus>());
  r.merge(check_naturality_exhaustive<MaxTimes>());
  r.merge(check_naturality_random_maps<MaxPlus>(3, trials, seed));
  r.merge(check_naturality_random_maps<MaxTimes>(3, trials, seed + 1));
  return r;
}

struct Suite {
  std::string_view name;
  std::function<Report(long, std::uint64_t)> run;
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"def1", [](long n, std::uint64_t s) { return def1(n, s); }},
      {"prop-af", prop_af},
      {"embed-g", embed_g},
      {"lemma-l", lemma_l},
      {"hombar", hombar},
      {"monad", monad},
      {"naturality", naturality},
  };
  return all;
}

/// Runs one suite, or every suite for "all". Unknown names throw SchemaError.
inline std::vector<Report> run(std::string_view name, long trials, std::uint64_t seed) {
  std::vector<Report> out;
  for (const auto& s : suites()) {
    if (name == "all" || name == s.name) out.push_back(s.run(trials, seed));
  }
  if (out.empty()) throw SchemaError("unknown suite '" + std::string(name) + "'");
  return out;
}

}  // namespace idemconv::checks
