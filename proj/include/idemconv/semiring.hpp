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
 * Scalars of the two idempotent models.
 *
 * The max-plus model works over R_max = R u {-inf} with join = max and
 * multiplication = +. The max-times model works over [0,1] with join = max
 * and multiplication = ordinary product. The two are linked by ln / exp,
 * with ln(0) = -inf and exp(-inf) = 0.
 *
 * The bottom element -inf is a tagged value, never an IEEE infinity, so that
 * its absorbing behaviour is exact.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemconv/errors.hpp"

namespace idemconv {

/// Default absolute tolerance for floating comparisons.
inline constexpr double kDefaultTol = 1e-9;

/// Arguments of ln below this are mapped to -inf.
inline constexpr double kLnFloor = 1e-300;

/// Tolerance used when snapping a maximal weight onto the exact unit.
inline constexpr double kSnapTol = 1e-12;

class ExtendedReal {
 public:
  /// Default-constructed values are the bottom element.
  constexpr ExtendedReal() noexcept = default;

  /// Finite value. An IEEE -inf is accepted on input and stored as bottom;
  /// NaN and +inf are rejected.
  ExtendedReal(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw DomainError("ExtendedReal: value must be finite or -inf");
    }
    if (v == -std::numeric_limits<double>::infinity()) return;
    bottom_ = false;
    value_ = v;
  }

  static constexpr ExtendedReal bottom() noexcept { return ExtendedReal(); }

  constexpr bool is_bottom() const noexcept { return bottom_; }
  constexpr bool is_finite() const noexcept { return !bottom_; }

  /// The finite value; throws on bottom.
  double value() const {
    if (bottom_) throw DomainError("ExtendedReal: bottom has no finite value");
    return value_;
  }

  /// Finite value, or IEEE -inf for bottom. Only for presentation and for
  /// interop with code that needs a plain double.
  double to_double() const noexcept {
    return bottom_ ? -std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.value_ == b.value_;
  }

  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a,
                                                     const ExtendedReal& b) noexcept {
    if (a.bottom_ && b.bottom_) return std::partial_ordering::equivalent;
    if (a.bottom_) return std::partial_ordering::less;
    if (b.bottom_) return std::partial_ordering::greater;
    return a.value_ <=> b.value_;
  }

 private:
  bool bottom_ = true;
  double value_ = 0.0;
};

/// A max-times scalar in [0,1].
class UnitWeight {
 public:
  constexpr UnitWeight() noexcept = default;

  explicit UnitWeight(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("UnitWeight: value must lie in [0,1]");
    }
  }

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const UnitWeight&, const UnitWeight&) = default;

 private:
  double value_ = 0.0;
};

inline ExtendedReal mp_join(ExtendedReal a, ExtendedReal b) noexcept {
  return (a < b) ? b : a;
}

/// Max-plus multiplication: ordinary addition with -inf absorbing.
inline ExtendedReal mp_mul(ExtendedReal a, ExtendedReal b) noexcept {
  if (a.is_bottom() || b.is_bottom()) return ExtendedReal::bottom();
  return ExtendedReal(a.to_double() + b.to_double());
}

inline ExtendedReal to_maxplus(UnitWeight w, double ln_floor = kLnFloor) {
  if (w.value() < ln_floor) return ExtendedReal::bottom();
  return ExtendedReal(std::log(w.value()));
}

inline UnitWeight to_maxtimes(ExtendedReal a) {
  if (a.is_bottom()) return UnitWeight(0.0);
  if (a.value() > 0.0) throw DomainError("to_maxtimes: argument must be <= 0");
  return UnitWeight(std::exp(a.value()));
}

/// The truncation max(t, -n) of a non-positive extended real.
inline double truncate_n(ExtendedReal t, int n) {
  if (n < 1) throw DomainError("truncate_n: depth must be positive");
  if (t.is_bottom()) return -static_cast<double>(n);
  if (t.value() > 0.0) throw DomainError("truncate_n: argument must be <= 0");
  return std::max(t.value(), -static_cast<double>(n));
}

/// (truncate_n(t,1), ..., truncate_n(t,N)).
inline std::vector<double> embed_f(ExtendedReal t, int depth) {
  if (depth < 1) throw DomainError("embed_f: depth must be positive");
  if (t.is_finite() && t.value() > 0.0) throw DomainError("embed_f: argument must be <= 0");
  std::vector<double> out(static_cast<std::size_t>(depth));
  for (int n = 1; n <= depth; ++n) out[static_cast<std::size_t>(n - 1)] = truncate_n(t, n);
  return out;
}

inline std::vector<double> embed_g(UnitWeight u, int depth) {
  return embed_f(to_maxplus(u), depth);
}

/// rho(a, b) = |exp(a) - exp(b)| with exp(-inf) = 0.
inline double rho_metric(ExtendedReal a, ExtendedReal b) noexcept {
  const double ea = a.is_bottom() ? 0.0 : std::exp(a.to_double());
  const double eb = b.is_bottom() ? 0.0 : std::exp(b.to_double());
  return std::abs(ea - eb);
}

/// Truncation depth ceil(M) + 1 where M is the largest finite magnitude in
/// the data. With this depth the deepest truncation is the identity on the
/// finite data.
inline int default_depth(std::span<const ExtendedReal> data) {
  double m = 0.0;
  for (const auto& x : data) {
    if (x.is_finite()) m = std::max(m, std::abs(x.value()));
  }
  return static_cast<int>(std::ceil(m)) + 1;
}

inline bool approx_equal(ExtendedReal a, ExtendedReal b, double tol = kDefaultTol) noexcept {
  if (a.is_bottom() || b.is_bottom()) return a == b;
  return std::abs(a.to_double() - b.to_double()) <= tol;
}

// ---------------------------------------------------------------------------
// Flavor traits. Generic code in convexity/measures/barycenter is written
// against these two structs.

struct MaxPlus {
  using scalar = ExtendedReal;
  static constexpr std::string_view name = "max-plus";

  static scalar unit() { return ExtendedReal(0.0); }
  static scalar bottom() { return ExtendedReal::bottom(); }
  static scalar join(scalar a, scalar b) { return mp_join(a, b); }
  /// Scalar action lambda (x) x, i.e. lambda + x.
  static scalar act(scalar lambda, scalar x) { return mp_mul(lambda, x); }
  /// The residual of a by m (a - m); m must be finite.
  static scalar divide(scalar a, scalar m) {
    if (a.is_bottom()) return a;
    return ExtendedReal(a.value() - m.value());
  }
  static double distance(scalar a, scalar b) { return rho_metric(a, b); }
  /// Position in the exp chart: exp(a), exp(-inf) = 0.
  static double chart(scalar a) { return a.is_bottom() ? 0.0 : std::exp(a.value()); }
  static scalar from_chart(double c, double ln_floor = kLnFloor) {
    if (c < ln_floor) return ExtendedReal::bottom();
    return ExtendedReal(std::log(c));
  }
  /// Admissible combination weight: lambda in [-inf, 0].
  static bool is_weight(scalar a) { return a.is_bottom() || a.value() <= 0.0; }
  static bool is_bottom(scalar a) { return a.is_bottom(); }
};

struct MaxTimes {
  using scalar = double;
  static constexpr std::string_view name = "max-times";

  static scalar unit() { return 1.0; }
  static scalar bottom() { return 0.0; }
  static scalar join(scalar a, scalar b) { return std::max(a, b); }
  static scalar act(scalar lambda, scalar x) { return lambda * x; }
  static scalar divide(scalar a, scalar m) { return a / m; }
  static double distance(scalar a, scalar b) { return std::abs(a - b); }
  static double chart(scalar a) { return a; }
  static scalar from_chart(double c, double = kLnFloor) { return c; }
  static bool is_weight(scalar a) { return a >= 0.0 && a <= 1.0; }
  static bool is_bottom(scalar a) { return a == 0.0; }
};

template <class F>
concept Flavor = std::same_as<F, MaxPlus> || std::same_as<F, MaxTimes>;

/// Whether a scalar is within kSnapTol of the unit (exact on the tag for
/// bottom).
template <Flavor F>
bool near_unit(typename F::scalar a, double tol = kSnapTol) {
  if constexpr (std::same_as<F, MaxPlus>) {
    return a.is_finite() && std::abs(a.value()) <= tol;
  } else {
    return std::abs(a - 1.0) <= tol;
  }
}

}  // namespace idemconv
