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
 * Idempotent barycenter maps and the structural checks around them.
 *
 * The t-th coordinate of the barycenter of a measure on a coordinate
 * compactum is the measure of the t-th coordinate projection. For a finitely
 * supported measure that is the normalized combination of its atoms with its
 * weights.
 *
 * A measure on the finite space X is identified with its weight vector, a
 * point of R_max^X (or [0,1]^X). Measures of measures are then
 * EmbeddedMeasures whose atoms are such weight vectors.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/measures.hpp"
#include "idemconv/sampling.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv {

template <Flavor F>
Point<F> bary(const EmbeddedMeasure<F>& mu) {
  return combination<F>(std::span<const Point<F>>(mu.atoms()),
                        std::span<const typename F::scalar>(mu.weights()));
}

inline MaxPlusPoint bary_mp(const EmbeddedMeasure<MaxPlus>& mu) { return bary(mu); }
inline MaxTimesPoint bary_mt(const EmbeddedMeasure<MaxTimes>& nu) { return bary(nu); }

/// Outcome of an identity check over many instances.
struct IdentityReport {
  std::string name;
  long cases = 0;
  long failures = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  /// Index of the worst case, when any discrepancy was seen.
  std::optional<long> worst_case;

  bool passed() const noexcept { return failures == 0; }

  void record(double gap) {
    if (gap > max_discrepancy) {
      max_discrepancy = gap;
      worst_case = cases;
    }
    if (gap > tolerance) ++failures;
    ++cases;
  }

  void merge(const IdentityReport& other) {
    if (other.max_discrepancy > max_discrepancy) {
      max_discrepancy = other.max_discrepancy;
      if (other.worst_case) worst_case = cases + *other.worst_case;
    }
    cases += other.cases;
    failures += other.failures;
  }
};

namespace detail {

/// Exact comparison on the tagged representation; a nonzero gap is the sup
/// distance (infinite when bottom meets a finite value).
template <Flavor F>
double exact_gap(const Point<F>& a, const Point<F>& b) {
  if (a == b) return 0.0;
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if constexpr (std::same_as<F, MaxPlus>) {
    const double g = extended_gap(a, b);
    return g > 0.0 ? g : std::numeric_limits<double>::min();
  } else {
    double g = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) g = std::max(g, std::abs(a[j] - b[j]));
    return g > 0.0 ? g : std::numeric_limits<double>::min();
  }
}

}  // namespace detail

/// Weight vector of delta_x on a space with n points.
template <Flavor F>
Point<F> dirac_point(std::size_t n, std::size_t x) {
  Point<F> p(n, F::bottom());
  p.at(x) = F::unit();
  return p;
}

/// I(delta_X)(mu): mu transported onto the Dirac measures, as a measure on
/// the coordinate space of IX.
template <Flavor F>
EmbeddedMeasure<F> push_to_diracs(const Measure<F>& mu) {
  const std::size_t n = mu.space().size();
  return place_atoms(mu, [n](std::size_t i) { return dirac_point<F>(n, i); });
}

/// Sup gap between bary(I(delta)(mu)) and mu (zero when the identity holds
/// exactly).
template <Flavor F>
double monad_identity_gap(const Measure<F>& mu) {
  return detail::exact_gap<F>(bary(push_to_diracs(mu)), mu.weights());
}

/// I f on weight vectors.
template <Flavor F>
Point<F> push_weights(const SpaceMap& f, const Point<F>& weights) {
  return pushforward(f, Measure<F>(f.source(), weights)).weights();
}

/// Gap between beta_{IY}(I^2 f (M)) and I f (beta_{IX}(M)), where M is a
/// measure on IX given by weight-vector atoms.
template <Flavor F>
double naturality_gap(const SpaceMap& f, const EmbeddedMeasure<F>& big) {
  const auto lifted = big.pushforward([&f](const Point<F>& w) { return push_weights<F>(f, w); });
  const Point<F> lhs = bary(lifted);
  const Point<F> rhs = push_weights<F>(f, bary(big));
  return detail::exact_gap<F>(lhs, rhs);
}

/// Coarse weight grids used for exhaustive checks on small spaces.
template <Flavor F>
std::vector<typename F::scalar> weight_grid() {
  if constexpr (std::same_as<F, MaxPlus>) {
    return {ExtendedReal(0.0), ExtendedReal(-0.5), ExtendedReal(-1.0), ExtendedReal::bottom()};
  } else {
    return {0.0, 0.25, 0.5, 0.75, 1.0};
  }
}

/// All normalized weight vectors on n points with entries from the grid.
template <Flavor F>
std::vector<Point<F>> normalized_grid_vectors(std::size_t n) {
  const auto grid = weight_grid<F>();
  std::vector<Point<F>> out;
  std::vector<std::size_t> digits(n, 0);
  while (true) {
    Point<F> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = grid[digits[i]];
    if (is_normalized<F>(std::span<const typename F::scalar>(p))) out.push_back(p);
    std::size_t k = 0;
    while (k < n && ++digits[k] == grid.size()) digits[k++] = 0;
    if (k == n) break;
  }
  return out;
}

/// All maps between spaces of sizes m and n.
inline std::vector<SpaceMap> all_space_maps(const FiniteSpace& source, const FiniteSpace& target) {
  std::vector<SpaceMap> out;
  std::vector<std::size_t> img(source.size(), 0);
  while (true) {
    out.emplace_back(source, target, img);
    std::size_t k = 0;
    while (k < img.size() && ++img[k] == target.size()) img[k++] = 0;
    if (k == img.size()) break;
  }
  return out;
}

/// beta_{IX} o I(delta X) = id on random measures over spaces of at most
/// max_points points, compared exactly.
template <Flavor F>
IdentityReport check_monad_identity(std::size_t max_points, long trials, std::uint64_t seed) {
  sampling::Rng rng(seed);
  IdentityReport r;
  r.name = "monad-identity";
  for (long i = 0; i < trials; ++i) {
    const auto space = FiniteSpace::of_size(1 + sampling::index(rng, max_points));
    r.record(monad_identity_gap(sampling::measure<F>(rng, space)));
  }
  return r;
}

/// Exhaustive monad identity on the two-point space over the weight grid.
template <Flavor F>
IdentityReport check_monad_identity_exhaustive() {
  IdentityReport r;
  r.name = "monad-identity-grid";
  const auto space = FiniteSpace::of_size(2);
  for (const auto& w : normalized_grid_vectors<F>(2)) r.record(monad_identity_gap(Measure<F>(space, w)));
  return r;
}

namespace detail {

template <Flavor F>
EmbeddedMeasure<F> random_measure_of_measures(sampling::Rng& rng, const FiniteSpace& space,
                                              std::size_t max_atoms) {
  const std::size_t k = 1 + sampling::index(rng, max_atoms);
  std::vector<Point<F>> atoms;
  for (std::size_t i = 0; i < k; ++i) atoms.push_back(sampling::measure<F>(rng, space).weights());
  return EmbeddedMeasure<F>(std::move(atoms), sampling::normalized_weights<F>(rng, k));
}

}  // namespace detail

/// beta_{IY} o I^2 f = I f o beta_{IX} for a fixed f on random measures of
/// measures.
template <Flavor F>
IdentityReport check_naturality(const SpaceMap& f, long trials, std::uint64_t seed,
                                std::size_t max_atoms = 4) {
  sampling::Rng rng(seed);
  IdentityReport r;
  r.name = "naturality";
  for (long i = 0; i < trials; ++i) {
    r.record(naturality_gap(f, detail::random_measure_of_measures<F>(rng, f.source(), max_atoms)));
  }
  return r;
}

/// Naturality for random maps between random spaces of at most max_points
/// points.
template <Flavor F>
IdentityReport check_naturality_random_maps(std::size_t max_points, long trials, std::uint64_t seed) {
  sampling::Rng rng(seed);
  IdentityReport r;
  r.name = "naturality";
  for (long i = 0; i < trials; ++i) {
    const auto x = FiniteSpace::of_size(1 + sampling::index(rng, max_points));
    const auto y = FiniteSpace::of_size(1 + sampling::index(rng, max_points));
    std::vector<std::size_t> img(x.size());
    for (auto& j : img) j = sampling::index(rng, y.size());
    const SpaceMap f(x, y, std::move(img));
    r.record(naturality_gap(f, detail::random_measure_of_measures<F>(rng, x, 4)));
  }
  return r;
}

/// Naturality over every map of the two-point space into itself and every
/// measure of measures with at most two atoms drawn from the weight grid.
template <Flavor F>
IdentityReport check_naturality_exhaustive() {
  IdentityReport r;
  r.name = "naturality-grid";
  const auto space = FiniteSpace::of_size(2);
  const auto inner = normalized_grid_vectors<F>(2);
  const auto outer = normalized_grid_vectors<F>(2);
  for (const auto& f : all_space_maps(space, space)) {
    for (const auto& a : inner) {
      r.record(naturality_gap(f, EmbeddedMeasure<F>::dirac(a)));
      for (const auto& b : inner) {
        for (const auto& w : outer) {
          r.record(naturality_gap(f, EmbeddedMeasure<F>({a, b}, w)));
        }
      }
    }
  }
  return r;
}

/// The square h(beta.(nu)) = beta(l_h(nu)) for h = build_embedding(d, depth)
/// on random finitely supported nu with atoms in K.
inline IdentityReport check_hombar_square(const Polytope<MaxTimes>& k, int depth, long trials,
                                          std::uint64_t seed, std::size_t max_atoms = 5,
                                          double tol = kDefaultTol) {
  sampling::Rng rng(seed);
  const auto h = build_embedding(k.dim(), depth);
  IdentityReport r;
  r.name = "hombar";
  r.tolerance = tol;
  for (long i = 0; i < trials; ++i) {
    const std::size_t n = 1 + sampling::index(rng, max_atoms);
    std::vector<MaxTimesPoint> atoms;
    for (std::size_t a = 0; a < n; ++a) atoms.push_back(sampling::point_in(rng, k));
    const EmbeddedMeasure<MaxTimes> nu(std::move(atoms), sampling::normalized_weights<MaxTimes>(rng, n));
    const MaxPlusPoint lhs = h(bary_mt(nu));
    const MaxPlusPoint rhs = bary_mp(transport_lh(nu, h));
    r.record(detail::extended_gap(lhs, rhs));
  }
  return r;
}

}  // namespace idemconv
