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
 * Compact coordinate domains for the openness probe.
 *
 * All probe computations run in the exp chart: a max-plus coordinate a is
 * represented by exp(a) (exp(-inf) = 0), a max-times coordinate by itself.
 * In the chart the rho metric of R_max becomes |u - v|, so both flavors
 * share one sup metric and one numeric engine.
 *
 * A domain is a product of factors:
 *  - box:  [lo, hi]^k (chart bounds);
 *  - pair: the L-shaped set {(t, p) in [0,1]^2 : max(t, p) = 1}, which is
 *          J = A.D in the max-times model and J_0 = I D in the max-plus one.
 *
 * Each factor carries free parameters: one per box coordinate, and one
 * parameter s in [-1, 1] per pair factor with
 *   s <= 0 -> (1, 1 + s),   s >= 0 -> (1 - s, 1).
 * The chart distance between two pair points never exceeds |s - s'|.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv::probe {

enum class Model { MaxPlus, MaxTimes };

inline std::string_view model_name(Model m) {
  return m == Model::MaxPlus ? MaxPlus::name : MaxTimes::name;
}

inline Model parse_model(std::string_view s) {
  if (s == MaxPlus::name) return Model::MaxPlus;
  if (s == MaxTimes::name) return Model::MaxTimes;
  throw SchemaError("unknown flavor '" + std::string(s) + "'");
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  /// Distance from v to the interval (zero inside).
  double gap(double v) const noexcept { return v < lo ? lo - v : (v > hi ? v - hi : 0.0); }
};

using ChartPoint = std::vector<double>;

inline double chart_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("chart_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

struct Factor {
  enum class Kind { Box, Pair };

  Kind kind = Kind::Box;
  std::size_t dim = 2;
  double lo = 0.0;  // chart bounds, boxes only
  double hi = 1.0;

  static Factor box(std::size_t dim, double lo, double hi) {
    if (dim == 0 || !(lo <= hi) || lo < 0.0) throw DomainError("box factor: need dim >= 1 and 0 <= lo <= hi");
    return Factor{Kind::Box, dim, lo, hi};
  }
  static Factor pair() { return Factor{Kind::Pair, 2, 0.0, 1.0}; }

  std::size_t params() const noexcept { return kind == Kind::Box ? dim : 1; }

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Chart position of a pair parameter.
inline std::array<double, 2> pair_point(double s) {
  return s <= 0.0 ? std::array<double, 2>{1.0, 1.0 + s} : std::array<double, 2>{1.0 - s, 1.0};
}

inline double pair_param(double u, double v) {
  if (u >= v) return v - 1.0;
  return 1.0 - u;
}

/// Chart enclosure of the pair points with parameter in [a, b].
inline std::array<Interval, 2> pair_hull(double a, double b) {
  if (b <= 0.0) return {Interval{1.0, 1.0}, Interval{1.0 + a, 1.0 + b}};
  if (a >= 0.0) return {Interval{1.0 - b, 1.0 - a}, Interval{1.0, 1.0}};
  return {Interval{1.0 - b, 1.0}, Interval{1.0 + a, 1.0}};
}

class Domain {
 public:
  Domain(Model model, std::vector<Factor> factors) : model_(model), factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("Domain: at least one factor required");
    for (const auto& f : factors_) {
      dim_ += f.dim;
      params_ += f.params();
    }
  }

  static Domain box(Model model, std::size_t dim, double lo, double hi) {
    return Domain(model, {Factor::box(dim, lo, hi)});
  }
  static Domain pair(Model model) { return Domain(model, {Factor::pair()}); }
  /// [lo, hi]^dim given in native coordinates of the model.
  static Domain native_box(Model model, std::size_t dim, ExtendedReal lo, ExtendedReal hi) {
    return box(model, dim, to_chart_scalar(model, lo), to_chart_scalar(model, hi));
  }

  Domain times(const Domain& other) const {
    if (other.model_ != model_) throw DomainError("Domain product: flavors differ");
    auto f = factors_;
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return Domain(model_, std::move(f));
  }

  Model model() const noexcept { return model_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t params() const noexcept { return params_; }

  /// Parameter range of free parameter i.
  Interval param_range(std::size_t i) const {
    for (const auto& f : factors_) {
      if (i < f.params()) {
        return f.kind == Factor::Kind::Box ? Interval{f.lo, f.hi} : Interval{-1.0, 1.0};
      }
      i -= f.params();
    }
    throw DimensionError("param_range: index out of range");
  }

  bool is_pair_param(std::size_t i) const {
    for (const auto& f : factors_) {
      if (i < f.params()) return f.kind == Factor::Kind::Pair;
      i -= f.params();
    }
    return false;
  }

  void to_chart(std::span<const double> theta, std::span<double> out) const {
    std::size_t p = 0;
    std::size_t c = 0;
    for (const auto& f : factors_) {
      if (f.kind == Factor::Kind::Box) {
        for (std::size_t k = 0; k < f.dim; ++k) out[c++] = theta[p++];
      } else {
        const auto uv = pair_point(theta[p++]);
        out[c++] = uv[0];
        out[c++] = uv[1];
      }
    }
  }

  ChartPoint to_chart(std::span<const double> theta) const {
    ChartPoint out(dim_);
    to_chart(theta, out);
    return out;
  }

  /// Inverse of to_chart for points of the domain.
  std::vector<double> to_params(std::span<const double> chart) const {
    if (chart.size() != dim_) throw DimensionError("to_params: dimension mismatch");
    std::vector<double> theta;
    theta.reserve(params_);
    std::size_t c = 0;
    for (const auto& f : factors_) {
      if (f.kind == Factor::Kind::Box) {
        for (std::size_t k = 0; k < f.dim; ++k) theta.push_back(std::clamp(chart[c++], f.lo, f.hi));
      } else {
        theta.push_back(pair_param(chart[c], chart[c + 1]));
        c += 2;
      }
    }
    return theta;
  }

  /// Chart enclosure of a parameter cell.
  void hull(std::span<const Interval> cell, std::span<Interval> out) const {
    std::size_t p = 0;
    std::size_t c = 0;
    for (const auto& f : factors_) {
      if (f.kind == Factor::Kind::Box) {
        for (std::size_t k = 0; k < f.dim; ++k) out[c++] = cell[p++];
      } else {
        const auto uv = pair_hull(cell[p].lo, cell[p].hi);
        ++p;
        out[c++] = uv[0];
        out[c++] = uv[1];
      }
    }
  }

  /// Chart bounding box of the whole domain.
  std::vector<Interval> bounds() const {
    std::vector<Interval> cell(params_);
    for (std::size_t i = 0; i < params_; ++i) cell[i] = param_range(i);
    std::vector<Interval> out(dim_);
    hull(cell, out);
    return out;
  }

  bool contains(std::span<const double> chart, double tol = kDefaultTol) const {
    if (chart.size() != dim_) return false;
    std::size_t c = 0;
    for (const auto& f : factors_) {
      if (f.kind == Factor::Kind::Box) {
        for (std::size_t k = 0; k < f.dim; ++k, ++c) {
          if (chart[c] < f.lo - tol || chart[c] > f.hi + tol) return false;
        }
      } else {
        const double u = chart[c];
        const double v = chart[c + 1];
        c += 2;
        if (u < -tol || v < -tol || u > 1.0 + tol || v > 1.0 + tol) return false;
        if (std::abs(std::max(u, v) - 1.0) > tol) return false;
      }
    }
    return true;
  }

  /// Nearest domain point (used to clean up points read from text).
  ChartPoint snap(std::span<const double> chart) const { return to_chart(to_params(chart)); }

  /// The same domain as a tropical polytope in native coordinates.
  template <Flavor F>
  Polytope<F> to_polytope() const {
    std::optional<Polytope<F>> acc;
    for (const auto& f : factors_) {
      auto piece = [&]() -> Polytope<F> {
        if (f.kind == Factor::Kind::Box) {
          return idemconv::box<F>(from_chart_scalar<F>(f.lo), from_chart_scalar<F>(f.hi), f.dim);
        }
        if constexpr (std::same_as<F, MaxPlus>) {
          return interval_ID();
        } else {
          return simplex_AD();
        }
      }();
      acc = acc ? product(*acc, piece) : piece;
    }
    return *acc;
  }

  // -- native <-> chart -----------------------------------------------------

  static double to_chart_scalar(Model model, ExtendedReal a) {
    if (model == Model::MaxPlus) return MaxPlus::chart(a);
    const double v = a.to_double();
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("max-times coordinate outside [0,1]");
    return v;
  }

  template <Flavor F>
  static typename F::scalar from_chart_scalar(double c) {
    return F::from_chart(c);
  }

  ChartPoint chart_of(const MaxPlusPoint& p) const {
    ChartPoint out;
    for (const auto& a : p) out.push_back(to_chart_scalar(model_, a));
    return out;
  }

  ChartPoint chart_of(const MaxTimesPoint& p) const {
    ChartPoint out;
    for (double a : p) out.push_back(to_chart_scalar(model_, ExtendedReal(a)));
    return out;
  }

  /// Native coordinates as extended reals (max-times values are plain reals).
  std::vector<ExtendedReal> native_of(std::span<const double> chart) const {
    std::vector<ExtendedReal> out;
    out.reserve(chart.size());
    for (double c : chart) {
      out.push_back(model_ == Model::MaxPlus ? MaxPlus::from_chart(c) : ExtendedReal(c));
    }
    return out;
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Model model_;
  std::vector<Factor> factors_;
  std::size_t dim_ = 0;
  std::size_t params_ = 0;
};

// ---------------------------------------------------------------------------
// Sampling

/// Radical inverse of i in the given prime base.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline std::uint64_t nth_prime(std::size_t n) {
  static constexpr std::array<std::uint64_t, 24> primes = {
      2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  return primes[n % primes.size()];
}

/// Seeded low-discrepancy domain sampler: a Halton sequence with a random
/// shift per dimension. Pair factors are stratified by branch: across
/// consecutive indices every combination of branches gets the same share.
class DomainSampler {
 public:
  DomainSampler(const Domain& domain, std::uint64_t seed) : domain_(domain) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    shift_.resize(domain.params());
    for (auto& s : shift_) s = unit(rng);
  }

  ChartPoint operator()(std::uint64_t i) const {
    std::vector<double> theta(domain_.params());
    std::size_t pair_index = 0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      double u = radical_inverse(i + 1, nth_prime(k)) + shift_[k];
      u -= std::floor(u);
      const Interval r = domain_.param_range(k);
      if (domain_.is_pair_param(k)) {
        const bool second_branch = ((i >> pair_index++) & 1u) != 0;
        theta[k] = second_branch ? u : -u;
      } else {
        theta[k] = r.lo + u * r.width();
      }
    }
    return domain_.to_chart(theta);
  }

 private:
  const Domain& domain_;
  std::vector<double> shift_;
};

/// Uniform sample of the delta-ball around center intersected with the
/// domain (center must lie in the domain).
template <class Rng>
ChartPoint sample_near(const Domain& domain, std::span<const double> center, double delta, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto theta0 = domain.to_params(center);
  std::vector<double> theta(theta0);
  std::size_t p = 0;
  std::size_t c = 0;
  for (const auto& f : domain.factors()) {
    if (f.kind == Factor::Kind::Box) {
      for (std::size_t k = 0; k < f.dim; ++k, ++p, ++c) {
        const double lo = std::max(f.lo, center[c] - delta);
        const double hi = std::min(f.hi, center[c] + delta);
        theta[p] = lo + unit(rng) * (hi - lo);
      }
    } else {
      const double s0 = theta0[p];
      const auto uv0 = pair_point(s0);
      const double lo = std::max(-1.0, s0 - 2.0 * delta);
      const double hi = std::min(1.0, s0 + 2.0 * delta);
      double s = s0;
      for (int attempt = 0; attempt < 64; ++attempt) {
        const double cand = lo + unit(rng) * (hi - lo);
        const auto uv = pair_point(cand);
        if (std::max(std::abs(uv[0] - uv0[0]), std::abs(uv[1] - uv0[1])) <= delta) {
          s = cand;
          break;
        }
      }
      theta[p++] = s;
      c += 2;
    }
  }
  return domain.to_chart(theta);
}

}  // namespace idemconv::probe
