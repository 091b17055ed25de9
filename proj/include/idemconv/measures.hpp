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
 * Finitely supported idempotent measures.
 *
 * A max-plus measure on a finite space X is the functional
 *   mu(phi) = max_x (w(x) + phi(x)),  max_x w(x) = 0,
 * and a max-times measure is
 *   nu(phi) = max_x (w(x) * phi(x)),  max_x w(x) = 1,  phi : X -> [0,1].
 *
 * Measures are always stored normalized. Atoms carrying the bottom weight
 * are kept so that spaces line up across operations; prune() drops them.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/semiring.hpp"

namespace idemconv {

class FiniteSpace {
 public:
  explicit FiniteSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw SchemaError("FiniteSpace: at least one point required");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw SchemaError("FiniteSpace: duplicate label '" + labels_[i] + "'");
      }
    }
  }

  /// Points labelled "0", "1", ..., "n-1".
  static FiniteSpace of_size(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return FiniteSpace(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw SchemaError("FiniteSpace: unknown point '" + label + "'");
    return it->second;
  }

  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

/// Checks weights are admissible and snaps the maximum onto the unit when it
/// is within kSnapTol of it.
template <Flavor F>
void snap_normalized(std::vector<typename F::scalar>& w) {
  if (w.empty()) throw NormalizationError("measure: no weights");
  for (const auto& x : w) {
    if constexpr (std::same_as<F, MaxPlus>) {
      if (x.is_finite() && x.value() > kSnapTol) {
        throw NormalizationError("max-plus measure: weights must be <= 0");
      }
    } else {
      if (!(x >= 0.0 && x <= 1.0 + kSnapTol)) {
        throw NormalizationError("max-times measure: weights must lie in [0,1]");
      }
    }
  }
  auto top = std::max_element(w.begin(), w.end());
  if (!near_unit<F>(*top)) {
    throw NormalizationError(std::string(F::name) + " measure: maximal weight must equal the unit");
  }
  for (auto& x : w) {
    if (near_unit<F>(x)) x = F::unit();
  }
}

}  // namespace detail

template <Flavor F>
class Measure {
 public:
  using flavor = F;
  using scalar = typename F::scalar;

  Measure(FiniteSpace space, std::vector<scalar> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size()) {
      throw DimensionError("Measure: one weight per point required");
    }
    detail::snap_normalized<F>(weights_);
  }

  const FiniteSpace& space() const noexcept { return space_; }
  const std::vector<scalar>& weights() const noexcept { return weights_; }
  scalar weight(std::size_t i) const { return weights_.at(i); }
  scalar weight(const std::string& label) const { return weights_[space_.index_of(label)]; }

  /// The measure restricted to its support (points with non-bottom weight).
  Measure prune() const {
    std::vector<std::string> labels;
    std::vector<scalar> w;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!F::is_bottom(weights_[i])) {
        labels.push_back(space_.label(i));
        w.push_back(weights_[i]);
      }
    }
    return Measure(FiniteSpace(std::move(labels)), std::move(w));
  }

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.space_ == b.space_ && a.weights_ == b.weights_;
  }

 private:
  FiniteSpace space_;
  std::vector<scalar> weights_;
};

using MaxPlusMeasure = Measure<MaxPlus>;
using MaxTimesMeasure = Measure<MaxTimes>;

/// A function on a finite space. Max-plus functions take values in R_max
/// (so that ln of a [0,1]-valued function is representable); max-times
/// functions take values in [0,1].
template <Flavor F>
class Function {
 public:
  using scalar = typename F::scalar;

  Function(FiniteSpace space, std::vector<scalar> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
      throw DimensionError("Function: one value per point required");
    }
    if constexpr (std::same_as<F, MaxTimes>) {
      for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("max-times function: value outside [0,1]");
      }
    }
  }

  static Function constant(FiniteSpace space, scalar c) {
    const std::size_t n = space.size();
    return Function(std::move(space), std::vector<scalar>(n, c));
  }

  const FiniteSpace& space() const noexcept { return space_; }
  const std::vector<scalar>& values() const noexcept { return values_; }
  scalar operator()(std::size_t i) const { return values_.at(i); }

 private:
  FiniteSpace space_;
  std::vector<scalar> values_;
};

template <Flavor F>
typename F::scalar eval(const Measure<F>& mu, const Function<F>& phi) {
  if (!(mu.space() == phi.space())) throw SpaceMismatch("eval: measure and function spaces differ");
  auto acc = F::bottom();
  for (std::size_t i = 0; i < mu.weights().size(); ++i) {
    acc = F::join(acc, F::act(mu.weights()[i], phi.values()[i]));
  }
  return acc;
}

inline ExtendedReal eval_mp(const MaxPlusMeasure& mu, const Function<MaxPlus>& phi) {
  return eval(mu, phi);
}

inline double eval_mt(const MaxTimesMeasure& nu, const Function<MaxTimes>& phi) {
  return eval(nu, phi);
}

template <Flavor F>
Measure<F> dirac(const FiniteSpace& space, const std::string& label) {
  std::vector<typename F::scalar> w(space.size(), F::bottom());
  w[space.index_of(label)] = F::unit();
  return Measure<F>(space, std::move(w));
}

/// Rescales raw weights so that their maximum becomes the unit.
template <Flavor F>
Measure<F> normalize(const FiniteSpace& space, std::vector<typename F::scalar> raw) {
  if (raw.size() != space.size()) throw DimensionError("normalize: one weight per point required");
  if (raw.empty()) throw NormalizationError("normalize: no weights");
  const auto top = *std::max_element(raw.begin(), raw.end());
  if (F::is_bottom(top)) throw NormalizationError("normalize: all weights are bottom");
  if constexpr (std::same_as<F, MaxTimes>) {
    for (double x : raw) {
      if (!(x >= 0.0)) throw NormalizationError("normalize: max-times weights must be >= 0");
    }
  }
  for (auto& x : raw) x = F::divide(x, top);
  return Measure<F>(space, std::move(raw));
}

/// A map between finite spaces, given by the image index of each source
/// point.
class SpaceMap {
 public:
  SpaceMap(FiniteSpace source, FiniteSpace target, std::vector<std::size_t> image)
      : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
    if (image_.size() != source_.size()) throw DimensionError("SpaceMap: map must be total");
    for (auto j : image_) {
      if (j >= target_.size()) throw DimensionError("SpaceMap: image index out of range");
    }
  }

  static SpaceMap identity(const FiniteSpace& x) {
    std::vector<std::size_t> img(x.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = i;
    return SpaceMap(x, x, std::move(img));
  }

  const FiniteSpace& source() const noexcept { return source_; }
  const FiniteSpace& target() const noexcept { return target_; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }
  std::size_t operator()(std::size_t i) const { return image_.at(i); }

  /// (g o f) for f = *this.
  SpaceMap then(const SpaceMap& g) const {
    if (!(g.source() == target_)) throw SpaceMismatch("SpaceMap::then: spaces do not compose");
    std::vector<std::size_t> img(image_.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = g(image_[i]);
    return SpaceMap(source_, g.target(), std::move(img));
  }

 private:
  FiniteSpace source_;
  FiniteSpace target_;
  std::vector<std::size_t> image_;
};

/// Weight at y is the join of the weights over the fibre of y.
template <Flavor F>
Measure<F> pushforward(const SpaceMap& f, const Measure<F>& m) {
  if (!(f.source() == m.space())) throw SpaceMismatch("pushforward: measure is not on the source");
  std::vector<typename F::scalar> w(f.target().size(), F::bottom());
  for (std::size_t i = 0; i < m.weights().size(); ++i) {
    w[f(i)] = F::join(w[f(i)], m.weights()[i]);
  }
  return Measure<F>(f.target(), std::move(w));
}

/// Density of a max-plus measure at a point: the stored weight.
inline ExtendedReal density_mp(const MaxPlusMeasure& mu, const std::string& label) {
  return mu.weight(label);
}

/// Density through the infimum formula
///   inf { mu(phi) : phi(x) = unit }
/// restricted to the bump family phi_k = unit at x and floor_k elsewhere,
/// with floors -k (max-plus) or e^-k (max-times), k = 0..max_floor, and the
/// indicator bump (bottom elsewhere), which is continuous on a finite space.
/// The result is reported on the max-plus scale (ln for max-times). Used as
/// an independent check of the stored weights.
template <Flavor F>
ExtendedReal density_inf_formula(const Measure<F>& mu, const std::string& label,
                                 int max_floor = 40) {
  const std::size_t at = mu.space().index_of(label);
  ExtendedReal best = ExtendedReal(0.0);
  for (int k = 0; k <= max_floor + 1; ++k) {
    const bool indicator = k > max_floor;
    std::vector<typename F::scalar> bump(mu.space().size());
    for (std::size_t i = 0; i < bump.size(); ++i) {
      if (i == at) {
        bump[i] = F::unit();
      } else if (indicator) {
        bump[i] = F::bottom();
      } else if constexpr (std::same_as<F, MaxPlus>) {
        bump[i] = ExtendedReal(-static_cast<double>(k));
      } else {
        bump[i] = std::exp(-static_cast<double>(k));
      }
    }
    const auto value = eval(mu, Function<F>(mu.space(), std::move(bump)));
    ExtendedReal v;
    if constexpr (std::same_as<F, MaxPlus>) {
      v = value;
    } else {
      v = to_maxplus(UnitWeight(value));
    }
    best = std::min(best, v);
  }
  return best;
}

/// g_X : componentwise ln of the weights.
inline MaxPlusMeasure iso_gX(const MaxTimesMeasure& nu) {
  std::vector<ExtendedReal> w;
  w.reserve(nu.weights().size());
  for (double x : nu.weights()) w.push_back(to_maxplus(UnitWeight(x)));
  return MaxPlusMeasure(nu.space(), std::move(w));
}

/// Inverse of g_X: componentwise exp.
inline MaxTimesMeasure iso_gX_inv(const MaxPlusMeasure& mu) {
  std::vector<double> w;
  w.reserve(mu.weights().size());
  for (const auto& x : mu.weights()) w.push_back(to_maxtimes(x).value());
  return MaxTimesMeasure(mu.space(), std::move(w));
}

// ---------------------------------------------------------------------------

/// A finitely supported measure on a coordinate compactum: atoms are points
/// of the flavor, weights are normalized. Repeated atoms are allowed; they
/// represent the same point and act through the join of their weights.
template <Flavor F>
class EmbeddedMeasure {
 public:
  using flavor = F;
  using scalar = typename F::scalar;

  EmbeddedMeasure(std::vector<Point<F>> atoms, std::vector<scalar> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.size() != weights_.size()) {
      throw DimensionError("EmbeddedMeasure: one weight per atom required");
    }
    detail::common_dim<F>(atoms_);
    for (const auto& a : atoms_) validate_point<F>(a);
    detail::snap_normalized<F>(weights_);
  }

  static EmbeddedMeasure dirac(Point<F> x) {
    return EmbeddedMeasure({std::move(x)}, {F::unit()});
  }

  const std::vector<Point<F>>& atoms() const noexcept { return atoms_; }
  const std::vector<scalar>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return atoms_.front().size(); }

  /// Equal atoms merged by joining weights, sorted by atom for a canonical
  /// form. Comparison is exact on the tagged representation.
  EmbeddedMeasure merged() const {
    std::map<Point<F>, scalar> acc;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      auto [it, fresh] = acc.emplace(atoms_[i], weights_[i]);
      if (!fresh) it->second = F::join(it->second, weights_[i]);
    }
    std::vector<Point<F>> atoms;
    std::vector<scalar> weights;
    for (auto& [a, w] : acc) {
      atoms.push_back(a);
      weights.push_back(w);
    }
    return EmbeddedMeasure(std::move(atoms), std::move(weights));
  }

  /// Pushforward along a map of the ambient space into itself (same
  /// flavor); equal images are merged.
  template <class Map>
  EmbeddedMeasure pushforward(const Map& h) const {
    std::vector<Point<F>> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& a : atoms_) atoms.push_back(h(a));
    return EmbeddedMeasure(std::move(atoms), weights_).merged();
  }

 private:
  std::vector<Point<F>> atoms_;
  std::vector<scalar> weights_;
};

/// The finite-space view of an embedded measure: one label per atom
/// ("0", "1", ...).
template <Flavor F>
Measure<F> as_space_measure(const EmbeddedMeasure<F>& m) {
  return Measure<F>(FiniteSpace::of_size(m.size()), m.weights());
}

/// Places the points of a finite-space measure in coordinate space:
/// label i goes to position(i). Equal positions are merged.
template <Flavor F, class Position>
EmbeddedMeasure<F> place_atoms(const Measure<F>& m, const Position& position) {
  std::vector<Point<F>> atoms;
  atoms.reserve(m.space().size());
  for (std::size_t i = 0; i < m.space().size(); ++i) atoms.push_back(position(i));
  return EmbeddedMeasure<F>(std::move(atoms), m.weights()).merged();
}

/// l_h(\/ lambda_i . delta_{x_i}) = \/ (ln lambda_i + delta_{h(x_i)}).
///
/// h is any (.,+)-affine embedding exposing in_domain() and operator(),
/// e.g. AffineEmbedding.
template <class Embedding>
EmbeddedMeasure<MaxPlus> transport_lh(const EmbeddedMeasure<MaxTimes>& nu, const Embedding& h) {
  std::vector<MaxPlusPoint> atoms;
  std::vector<ExtendedReal> weights;
  atoms.reserve(nu.size());
  weights.reserve(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (!h.in_domain(nu.atoms()[i])) throw DomainError("transport_lh: atom outside the embedding domain");
    atoms.push_back(h(nu.atoms()[i]));
    weights.push_back(to_maxplus(UnitWeight(nu.weights()[i])));
  }
  return EmbeddedMeasure<MaxPlus>(std::move(atoms), std::move(weights)).merged();
}

}  // namespace idemconv
