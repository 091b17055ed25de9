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
 * Idempotent convex combinations, tropical polytopes given by generators,
 * membership through tropical projection, the binary combination maps and
 * (.,+)-affine embeddings of max-times compacta into max-plus space.
 *
 * A point is a plain coordinate vector of the flavor's scalar. A polytope is
 * the set of all normalized combinations of its generators:
 *
 *   max-plus:  \/_i (lambda_i + v_i),  lambda_i in [-inf, 0],  \/_i lambda_i = 0
 *   max-times: \/_i (lambda_i * v_i),  lambda_i in [0, 1],     \/_i lambda_i = 1
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idemconv/errors.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv {

template <Flavor F>
using Point = std::vector<typename F::scalar>;

using MaxPlusPoint = Point<MaxPlus>;
using MaxTimesPoint = Point<MaxTimes>;

template <Flavor F>
void validate_point(const Point<F>& p) {
  if constexpr (std::same_as<F, MaxTimes>) {
    for (double c : p) {
      if (!(c >= 0.0 && c <= 1.0)) throw DomainError("max-times point: coordinate outside [0,1]");
    }
  }
}

/// Sup over coordinates of the flavor's scalar distance (rho for max-plus).
template <Flavor F>
double point_distance(const Point<F>& a, const Point<F>& b) {
  if (a.size() != b.size()) throw DimensionError("point_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, F::distance(a[j], b[j]));
  return d;
}

template <Flavor F>
typename F::scalar join_all(std::span<const typename F::scalar> xs) {
  auto acc = F::bottom();
  for (const auto& x : xs) acc = F::join(acc, x);
  return acc;
}

/// All weights admissible and their join is exactly the unit.
template <Flavor F>
bool is_normalized(std::span<const typename F::scalar> lambdas) {
  if (lambdas.empty()) return false;
  for (const auto& l : lambdas) {
    if (!F::is_weight(l)) return false;
  }
  return join_all<F>(lambdas) == F::unit();
}

namespace detail {

template <Flavor F>
std::size_t common_dim(std::span<const Point<F>> points) {
  if (points.empty()) throw DimensionError("empty point list");
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("points of different dimensions");
  }
  return d;
}

/// \/_i (lambda_i (x) v_i) without any normalization check.
template <Flavor F>
Point<F> raw_combination(std::span<const Point<F>> points,
                         std::span<const typename F::scalar> lambdas) {
  const std::size_t d = common_dim<F>(points);
  Point<F> out(d, F::bottom());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out[j] = F::join(out[j], F::act(lambdas[i], points[i][j]));
    }
  }
  return out;
}

}  // namespace detail

template <Flavor F>
Point<F> combination(std::span<const Point<F>> points,
                     std::span<const typename F::scalar> lambdas) {
  if (points.size() != lambdas.size()) {
    throw DimensionError("combination: one weight per point required");
  }
  detail::common_dim<F>(points);
  if (!is_normalized<F>(lambdas)) {
    throw NormalizationError("combination: weights must join to the unit exactly");
  }
  return detail::raw_combination<F>(points, lambdas);
}

inline MaxPlusPoint mp_combination(std::span<const MaxPlusPoint> points,
                                   std::span<const ExtendedReal> lambdas) {
  return combination<MaxPlus>(points, lambdas);
}

inline MaxTimesPoint mt_combination(std::span<const MaxTimesPoint> points,
                                    std::span<const double> lambdas) {
  return combination<MaxTimes>(points, lambdas);
}

/// A pair (t, p) in J (max-times, t \/ p = 1) or J_0 (max-plus, t \/ p = 0).
template <Flavor F>
class ComboWeights {
 public:
  using scalar = typename F::scalar;

  ComboWeights(scalar t, scalar p) : t_(t), p_(p) {
    if (!F::is_weight(t) || !F::is_weight(p) || F::join(t, p) != F::unit()) {
      throw DomainError("ComboWeights: (t, p) must be admissible with t \\/ p equal to the unit");
    }
  }

  scalar t() const { return t_; }
  scalar p() const { return p_; }

 private:
  scalar t_;
  scalar p_;
};

/// (t (x) x) \/ (p (x) y), coordinatewise.
template <Flavor F>
Point<F> pair_combination(const Point<F>& x, const Point<F>& y, const ComboWeights<F>& w) {
  if (x.size() != y.size()) throw DimensionError("pair_combination: dimension mismatch");
  Point<F> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = F::join(F::act(w.t(), x[j]), F::act(w.p(), y[j]));
  }
  return out;
}

/// s(x, y, t, p) = t.x \/ p.y
inline MaxTimesPoint s_map(const MaxTimesPoint& x, const MaxTimesPoint& y,
                           const ComboWeights<MaxTimes>& w) {
  return pair_combination<MaxTimes>(x, y, w);
}

/// p(x, y, t, p) = (t + x) \/ (p + y)
inline MaxPlusPoint p_map(const MaxPlusPoint& x, const MaxPlusPoint& y,
                          const ComboWeights<MaxPlus>& w) {
  return pair_combination<MaxPlus>(x, y, w);
}

/// (t, p) -> (ln t, ln p), carrying J onto J_0.
inline ComboWeights<MaxPlus> weights_ln(const ComboWeights<MaxTimes>& w) {
  return ComboWeights<MaxPlus>(to_maxplus(UnitWeight(w.t())), to_maxplus(UnitWeight(w.p())));
}

// ---------------------------------------------------------------------------

template <Flavor F>
class Polytope {
 public:
  using flavor = F;

  explicit Polytope(std::vector<Point<F>> generators) : generators_(std::move(generators)) {
    if (generators_.empty()) throw DimensionError("Polytope: at least one generator required");
    dim_ = detail::common_dim<F>(generators_);
    for (const auto& g : generators_) validate_point<F>(g);
  }

  const std::vector<Point<F>>& generators() const noexcept { return generators_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return generators_.size(); }

 private:
  std::vector<Point<F>> generators_;
  std::size_t dim_ = 0;
};

/// I D for the two-point space: generators (0, -inf) and (-inf, 0).
inline Polytope<MaxPlus> interval_ID() {
  return Polytope<MaxPlus>({{ExtendedReal(0.0), ExtendedReal::bottom()},
                            {ExtendedReal::bottom(), ExtendedReal(0.0)}});
}

/// A.D for the two-point space: generators (1, 0) and (0, 1).
inline Polytope<MaxTimes> simplex_AD() { return Polytope<MaxTimes>({{1.0, 0.0}, {0.0, 1.0}}); }

/// The cube [lo, hi]^d: generated by the low corner and the d points that
/// raise one coordinate to hi.
template <Flavor F>
Polytope<F> box(typename F::scalar lo, typename F::scalar hi, std::size_t d) {
  if (d == 0 || hi < lo) throw DomainError("box: need d >= 1 and lo <= hi");
  std::vector<Point<F>> gens;
  gens.emplace_back(d, lo);
  for (std::size_t j = 0; j < d; ++j) {
    Point<F> g(d, lo);
    g[j] = hi;
    gens.push_back(std::move(g));
  }
  return Polytope<F>(std::move(gens));
}

/// Product polytope; generated by all concatenated generator pairs.
template <Flavor F>
Polytope<F> product(const Polytope<F>& a, const Polytope<F>& b) {
  std::vector<Point<F>> gens;
  for (const auto& u : a.generators()) {
    for (const auto& v : b.generators()) {
      Point<F> g(u);
      g.insert(g.end(), v.begin(), v.end());
      gens.push_back(std::move(g));
    }
  }
  return Polytope<F>(std::move(gens));
}

template <Flavor F>
struct Projection {
  Point<F> point;
  std::vector<typename F::scalar> lambdas;
  /// Whether the maximal weights join exactly to the unit.
  bool normalized = false;
};

namespace detail {

/// Largest admissible lambda with lambda (x) v <= p coordinatewise.
inline ExtendedReal residual_weight(const MaxPlusPoint& p, const MaxPlusPoint& v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (v[j].is_bottom()) continue;
    if (p[j].is_bottom()) return ExtendedReal::bottom();
    best = std::min(best, p[j].value() - v[j].value());
  }
  return ExtendedReal(std::min(best, 0.0));
}

inline double residual_weight(const MaxTimesPoint& p, const MaxTimesPoint& v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (v[j] == 0.0) continue;
    if (p[j] == 0.0) return 0.0;
    best = std::min(best, p[j] / v[j]);
  }
  return std::min(best, 1.0);
}

}  // namespace detail

/// Tropical projection: the combination with the largest admissible weights
/// that stays coordinatewise below p. Idempotent.
template <Flavor F>
Projection<F> hull_project(const Point<F>& p, const Polytope<F>& poly) {
  if (p.size() != poly.dim()) throw DimensionError("hull_project: dimension mismatch");
  Projection<F> out;
  out.lambdas.reserve(poly.size());
  for (const auto& v : poly.generators()) out.lambdas.push_back(detail::residual_weight(p, v));
  out.point = detail::raw_combination<F>(std::span<const Point<F>>(poly.generators()),
                                         std::span<const typename F::scalar>(out.lambdas));
  out.normalized = join_all<F>(out.lambdas) == F::unit();
  return out;
}

template <Flavor F>
struct Membership {
  bool member = false;
  /// Witness weights (the projection weights, with the maximal one snapped
  /// onto the unit when the point is a member).
  std::vector<typename F::scalar> lambdas;
  /// Distance from p to the projection in the flavor's metric.
  double distance = 0.0;
};

/// p lies in the hull iff its projection reproduces it and the projection
/// weights attain the unit. Both are checked to tol in the flavor's metric.
template <Flavor F>
Membership<F> hull_member(const Point<F>& p, const Polytope<F>& poly, double tol = kDefaultTol) {
  const auto proj = hull_project(p, poly);
  Membership<F> out;
  out.lambdas = proj.lambdas;
  out.distance = point_distance<F>(proj.point, p);
  const auto top = join_all<F>(std::span<const typename F::scalar>(proj.lambdas));
  const bool attains = F::distance(top, F::unit()) <= tol;
  out.member = attains && out.distance <= tol;
  if (out.member) {
    auto it = std::max_element(out.lambdas.begin(), out.lambdas.end());
    *it = F::unit();
  }
  return out;
}

// ---------------------------------------------------------------------------

/// The product of d copies of g(u) = (max(ln u, -1), ..., max(ln u, -N)),
/// a (.,+)-affine embedding of [0,1]^d into R^(N d). Coordinates of the
/// image are grouped per source coordinate.
class AffineEmbedding {
 public:
  AffineEmbedding(std::size_t dim, int depth) : dim_(dim), depth_(depth) {
    if (dim == 0) throw DimensionError("AffineEmbedding: dimension must be positive");
    if (depth < 1) throw DomainError("AffineEmbedding: depth must be positive");
  }

  std::size_t dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  std::size_t output_dim() const noexcept { return dim_ * static_cast<std::size_t>(depth_); }

  bool in_domain(const MaxTimesPoint& u) const {
    if (u.size() != dim_) return false;
    return std::all_of(u.begin(), u.end(), [](double c) { return c >= 0.0 && c <= 1.0; });
  }

  MaxPlusPoint operator()(const MaxTimesPoint& u) const {
    if (u.size() != dim_) throw DimensionError("AffineEmbedding: dimension mismatch");
    MaxPlusPoint out;
    out.reserve(output_dim());
    for (double c : u) {
      for (double v : embed_g(UnitWeight(c), depth_)) out.emplace_back(v);
    }
    return out;
  }

 private:
  std::size_t dim_;
  int depth_;
};

inline AffineEmbedding build_embedding(std::size_t dim, int depth) {
  return AffineEmbedding(dim, depth);
}

/// Componentwise ln, [0,1]^d -> [-inf, 0]^d. (.,+)-affine, and an
/// embedding into R^d on boxes [a, b]^d with a > 0.
class LogEmbedding {
 public:
  explicit LogEmbedding(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t output_dim() const noexcept { return dim_; }

  bool in_domain(const MaxTimesPoint& u) const {
    if (u.size() != dim_) return false;
    return std::all_of(u.begin(), u.end(), [](double c) { return c >= 0.0 && c <= 1.0; });
  }

  MaxPlusPoint operator()(const MaxTimesPoint& u) const {
    if (u.size() != dim_) throw DimensionError("LogEmbedding: dimension mismatch");
    MaxPlusPoint out;
    out.reserve(dim_);
    for (double c : u) out.push_back(to_maxplus(UnitWeight(c)));
    return out;
  }

 private:
  std::size_t dim_;
};

// ---------------------------------------------------------------------------

struct AffinityCounterexample {
  double lambda = 0.0;
  MaxTimesPoint s;
  MaxTimesPoint k;
  MaxPlusPoint lhs;
  MaxPlusPoint rhs;
};

struct AffinityReport {
  int trials = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  std::optional<AffinityCounterexample> counterexample;

  bool passed() const noexcept { return !counterexample.has_value(); }
};

namespace detail {

inline double extended_gap(const MaxPlusPoint& a, const MaxPlusPoint& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_bottom() && b[j].is_bottom()) continue;
    if (a[j].is_bottom() || b[j].is_bottom()) return std::numeric_limits<double>::infinity();
    d = std::max(d, std::abs(a[j].value() - b[j].value()));
  }
  return d;
}

}  // namespace detail

/// Evaluates both sides of h(lambda.s \/ k) = (ln lambda + h(s)) \/ h(k) on
/// random triples. `sample` draws points of the source compactum from an
/// std::mt19937_64.
template <class Map, class Sampler>
AffinityReport check_affine(const Map& h, Sampler&& sample, int trials, std::uint64_t seed,
                            double tol = 1e-12) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AffinityReport report;
  report.trials = trials;
  report.tolerance = tol;
  for (int i = 0; i < trials; ++i) {
    // Hit the endpoints of [0,1] regularly.
    double lambda = unit(rng);
    if (i % 16 == 0) lambda = 0.0;
    if (i % 16 == 1) lambda = 1.0;
    const MaxTimesPoint s = sample(rng);
    const MaxTimesPoint k = sample(rng);
    MaxTimesPoint mixed(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) mixed[j] = std::max(lambda * s[j], k[j]);
    const MaxPlusPoint lhs = h(mixed);
    const MaxPlusPoint hs = h(s);
    const MaxPlusPoint hk = h(k);
    const ExtendedReal shift = to_maxplus(UnitWeight(lambda));
    MaxPlusPoint rhs(hs.size());
    for (std::size_t j = 0; j < hs.size(); ++j) rhs[j] = mp_join(mp_mul(shift, hs[j]), hk[j]);
    const double gap = detail::extended_gap(lhs, rhs);
    if (gap > report.max_discrepancy) {
      report.max_discrepancy = gap;
      if (gap > tol) report.counterexample = AffinityCounterexample{lambda, s, k, lhs, rhs};
    }
  }
  return report;
}

}  // namespace idemconv
