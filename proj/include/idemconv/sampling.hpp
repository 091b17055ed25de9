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
 * Seeded random generators for scalars, weight vectors, points and
 * measures. Everything draws from std::mt19937_64 so runs are reproducible.
 */

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/measures.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv::sampling {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// A multiple of 1/denominator in [lo, hi]; exact in binary floating point
/// when the denominator is a power of two.
inline double dyadic(Rng& rng, double lo, double hi, int denominator = 8) {
  const auto a = static_cast<long>(lo * denominator);
  const auto b = static_cast<long>(hi * denominator);
  return static_cast<double>(std::uniform_int_distribution<long>(a, b)(rng)) / denominator;
}

/// A random scalar of the flavor's weight range, bottom with the given
/// probability. Max-plus values are drawn from [-range, 0].
template <Flavor F>
typename F::scalar weight(Rng& rng, double bottom_probability = 0.15, bool dyadic_values = false,
                          double range = 5.0) {
  if (uniform(rng) < bottom_probability) return F::bottom();
  if constexpr (std::same_as<F, MaxPlus>) {
    return ExtendedReal(dyadic_values ? dyadic(rng, -range, 0.0) : uniform(rng, -range, 0.0));
  } else {
    return dyadic_values ? dyadic(rng, 0.0, 1.0) : uniform(rng);
  }
}

/// n weights whose join is exactly the unit.
template <Flavor F>
std::vector<typename F::scalar> normalized_weights(Rng& rng, std::size_t n,
                                                   double bottom_probability = 0.15,
                                                   bool dyadic_values = false) {
  std::vector<typename F::scalar> w(n);
  for (auto& x : w) x = weight<F>(rng, bottom_probability, dyadic_values);
  w[index(rng, n)] = F::unit();
  return w;
}

template <Flavor F>
Measure<F> measure(Rng& rng, const FiniteSpace& space, double bottom_probability = 0.15,
                   bool dyadic_values = false) {
  return Measure<F>(space, normalized_weights<F>(rng, space.size(), bottom_probability, dyadic_values));
}

/// A random combination of the generators, hence a point of the polytope.
template <Flavor F>
Point<F> point_in(Rng& rng, const Polytope<F>& poly) {
  const auto lambdas = normalized_weights<F>(rng, poly.size(), 0.3);
  return combination<F>(std::span<const Point<F>>(poly.generators()),
                        std::span<const typename F::scalar>(lambdas));
}

inline MaxTimesPoint unit_cube_point(Rng& rng, std::size_t d) {
  MaxTimesPoint p(d);
  for (auto& c : p) {
    const double r = uniform(rng);
    c = r < 0.05 ? 0.0 : (r < 0.1 ? 1.0 : uniform(rng));
  }
  return p;
}

}  // namespace idemconv::sampling
