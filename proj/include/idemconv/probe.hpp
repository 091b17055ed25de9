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
 * Numerical epsilon-delta openness probe.
 *
 * At a source point x the probe samples targets y in the delta-ball around
 * F(x) (inside the target domain) and searches the epsilon-ball around x for
 * a preimage. Target sets are cumulative over the delta ladder: the set at
 * delta contains every target sampled at the smaller radii. A covered level
 * therefore implies every smaller level is covered.
 *
 * OPEN-EVIDENCE is evidence. A WITNESS is a certificate produced by
 * verify_witness: a branch and bound over the epsilon-ball that proves, with
 * interval enclosures and the Lipschitz bound of F, that no source point in
 * the ball maps within tolerance of y.
 *
 * All distances are chart distances (see domain.hpp); in the max-plus model
 * that is the sup of rho over coordinates.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idemconv/domain.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/expr.hpp"

namespace idemconv::probe {

inline constexpr std::string_view kVerdictSemantics =
    "OPEN-EVIDENCE records are numerical evidence of openness (every sampled target near F(x) "
    "had a preimage near x); they are not proofs. WITNESS records are certificates: no point of "
    "the epsilon-ball around x maps within tolerance of y, proved by interval enclosures and a "
    "Lipschitz bound, while y lies in the target domain within delta of F(x).";

struct ProbeConfig {
  double epsilon = 0.05;
  std::vector<double> deltas{0.04, 0.02, 0.01, 0.005};
  std::size_t target_samples = 64;
  double grid = 1e-3;
  double tolerance = 1e-6;
  std::size_t point_samples = 100;
  std::uint64_t seed = 1;
  double certification_resolution = 1e-3;
  std::size_t cell_budget = 2'000'000;
  std::size_t max_certifications = 4;
  std::size_t search_top_k = 8;

  void validate() const {
    if (!(epsilon > 0.0)) throw SchemaError("config: epsilon must be positive");
    if (deltas.empty()) throw SchemaError("config: delta ladder is empty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] > 0.0)) throw SchemaError("config: deltas must be positive");
      if (i > 0 && !(deltas[i] < deltas[i - 1])) throw SchemaError("config: delta ladder must strictly decrease");
    }
    if (target_samples == 0) throw SchemaError("config: target samples must be positive");
    if (!(grid > 0.0) || !(tolerance > 0.0) || !(certification_resolution > 0.0)) {
      throw SchemaError("config: grid, tolerance and resolution must be positive");
    }
    if (cell_budget == 0) throw SchemaError("config: cell budget must be positive");
  }
};

enum class PointKind { OpenEvidence, Witness, Inconclusive };

inline std::string_view kind_name(PointKind k) {
  switch (k) {
    case PointKind::OpenEvidence: return "OPEN-EVIDENCE";
    case PointKind::Witness: return "WITNESS";
    case PointKind::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

enum class CertStatus { Certified, Refuted, Inconclusive };

inline std::string_view cert_name(CertStatus s) {
  switch (s) {
    case CertStatus::Certified: return "certified";
    case CertStatus::Refuted: return "refuted";
    case CertStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct Certification {
  CertStatus status = CertStatus::Inconclusive;
  double epsilon = 0.0;
  double resolution = 0.0;
  double tolerance = 0.0;
  double lipschitz = 0.0;
  std::size_t cells = 0;
  std::size_t unresolved = 0;
  bool budget_exhausted = false;
  /// Lower bound on dist(F(z), y) over the ball (valid when certified).
  double gap_lower_bound = 0.0;
  /// Source point mapping within tolerance of y (refuted only).
  ChartPoint preimage;
};

struct CoverageLevel {
  double delta = 0.0;
  std::size_t targets = 0;  // cumulative
  std::size_t covered = 0;
  double max_gap = 0.0;
};

struct PointRecord {
  PointKind kind = PointKind::OpenEvidence;
  ChartPoint x;
  ChartPoint fx;
  double epsilon = 0.0;
  /// Largest fully covered delta (open evidence only).
  std::optional<double> delta_star;
  std::vector<CoverageLevel> levels;
  // witness / inconclusive
  ChartPoint target;
  double delta = 0.0;
  double target_distance = 0.0;
  std::optional<Certification> certification;
};

struct Verdict {
  std::string map;
  std::vector<PointRecord> records;
  std::size_t open_count = 0;
  std::size_t witness_count = 0;
  std::size_t inconclusive_count = 0;

  bool has_witness() const noexcept { return witness_count > 0; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t point_seed(std::uint64_t seed, std::span<const double> x, double delta) {
  std::uint64_t h = splitmix64(seed);
  for (double v : x) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
  return splitmix64(h ^ std::bit_cast<std::uint64_t>(delta));
}

/// Parameter box of the epsilon-ball around theta0. Pair parameters may
/// cross the corner when the ball reaches it.
inline std::vector<Interval> ball_box(const Domain& d, std::span<const double> theta0, double eps) {
  std::vector<Interval> box(d.params());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double s = theta0[i];
    const Interval r = d.param_range(i);
    if (!d.is_pair_param(i)) {
      box[i] = Interval{std::max(r.lo, s - eps), std::min(r.hi, s + eps)};
    } else if (s <= 0.0) {
      box[i] = Interval{std::max(-1.0, s - eps), s + eps <= 0.0 ? s + eps : std::min(1.0, eps)};
    } else {
      box[i] = Interval{s - eps >= 0.0 ? s - eps : std::max(-1.0, -eps), std::min(1.0, s + eps)};
    }
  }
  return box;
}

inline double interval_gap(std::span<const Interval> e, std::span<const double> y) {
  double g = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) g = std::max(g, e[j].gap(y[j]));
  return g;
}

/// Evaluation workspace for one map.
class Evaluator {
 public:
  explicit Evaluator(const ChartMap& f)
      : f_(f), chart_(f.source().dim()), out_(f.target().dim()), chart_iv_(f.source().dim()),
        out_iv_(f.target().dim()) {}

  const ChartMap& map() const noexcept { return f_; }

  double gap(std::span<const double> theta, std::span<const double> y) {
    f_.source().to_chart(theta, chart_);
    f_.eval(chart_, out_);
    return chart_distance(out_, y);
  }

  double interval_gap(std::span<const Interval> cell, std::span<const double> y) {
    f_.source().hull(cell, chart_iv_);
    f_.eval_interval(chart_iv_, out_iv_);
    return detail::interval_gap(out_iv_, y);
  }

 private:
  const ChartMap& f_;
  ChartPoint chart_;
  ChartPoint out_;
  std::vector<Interval> chart_iv_;
  std::vector<Interval> out_iv_;
};

struct SearchResult {
  std::vector<double> theta;
  double gap = std::numeric_limits<double>::infinity();
};

/// Pattern search on the full 3^n stencil around the current best point,
/// restricted to `box`. The step halves when no stencil point improves.
inline SearchResult zoom_search(Evaluator& ev, std::span<const Interval> box, std::span<const double> start,
                                std::span<const double> y, double h0, double h_min, double stop_gap,
                                int max_iterations = 80) {
  const std::size_t n = box.size();
  SearchResult best{std::vector<double>(start.begin(), start.end()), 0.0};
  for (std::size_t i = 0; i < n; ++i) best.theta[i] = std::clamp(best.theta[i], box[i].lo, box[i].hi);
  best.gap = ev.gap(best.theta, y);
  if (best.gap <= stop_gap || n == 0) return best;

  std::size_t stencil = 1;
  for (std::size_t i = 0; i < n; ++i) stencil *= 3;
  std::vector<double> trial(n);
  double h = h0;
  for (int it = 0; it < max_iterations && h >= h_min; ++it) {
    SearchResult round = best;
    for (std::size_t code = 0; code < stencil; ++code) {
      std::size_t c = code;
      bool centre = true;
      for (std::size_t i = 0; i < n; ++i) {
        const int digit = static_cast<int>(c % 3) - 1;
        c /= 3;
        centre = centre && digit == 0;
        trial[i] = std::clamp(best.theta[i] + digit * h, box[i].lo, box[i].hi);
      }
      if (centre) continue;
      const double g = ev.gap(trial, y);
      if (g < round.gap) {
        round.gap = g;
        round.theta = trial;
      }
    }
    if (round.gap < best.gap) {
      best = std::move(round);
      if (best.gap <= stop_gap) break;
    } else {
      h *= 0.5;
    }
  }
  return best;
}

/// Solves the m x m system a z = r in place (partial pivoting). Returns
/// false when singular.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& r, std::size_t m) {
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < m; ++i) {
      if (std::abs(a[i * m + c]) > std::abs(a[piv * m + c])) piv = i;
    }
    if (std::abs(a[piv * m + c]) < 1e-300) return false;
    if (piv != c) {
      for (std::size_t k = 0; k < m; ++k) std::swap(a[c * m + k], a[piv * m + k]);
      std::swap(r[c], r[piv]);
    }
    for (std::size_t i = c + 1; i < m; ++i) {
      const double f = a[i * m + c] / a[c * m + c];
      for (std::size_t k = c; k < m; ++k) a[i * m + k] -= f * a[c * m + k];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t c = m; c-- > 0;) {
    for (std::size_t k = c + 1; k < m; ++k) r[c] -= a[c * m + k] * r[k];
    r[c] /= a[c * m + c];
  }
  return true;
}

/// Damped minimum-norm Gauss-Newton for F(theta) = y inside `box`, with a
/// one-sided finite-difference Jacobian. Improves `best` in place.
inline void newton_refine(Evaluator& ev, std::span<const Interval> box, std::span<const double> y,
                          SearchResult& best, double stop_gap, int max_iterations = 40) {
  const ChartMap& f = ev.map();
  const std::size_t n = box.size();
  const std::size_t m = y.size();
  if (n == 0 || best.gap <= stop_gap) return;
  ChartPoint chart(f.source().dim());
  ChartPoint out(m);
  auto image = [&](std::span<const double> theta, ChartPoint& dst) {
    f.source().to_chart(theta, chart);
    f.eval(chart, dst);
  };
  std::vector<double> jac(m * n);
  std::vector<double> normal(m * m);
  std::vector<double> rhs(m);
  std::vector<double> trial(n);
  ChartPoint fx(m);
  ChartPoint fh(m);
  double mu = 1e-9;
  for (int it = 0; it < max_iterations && best.gap > stop_gap; ++it) {
    image(best.theta, fx);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-7;
      trial = best.theta;
      const bool forward = trial[i] + h <= box[i].hi;
      trial[i] += forward ? h : -h;
      image(trial, fh);
      for (std::size_t j = 0; j < m; ++j) jac[j * n + i] = (fh[j] - fx[j]) / (forward ? h : -h);
    }
    bool moved = false;
    for (int damp = 0; damp < 8 && !moved; ++damp) {
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          double acc = a == b ? mu : 0.0;
          for (std::size_t i = 0; i < n; ++i) acc += jac[a * n + i] * jac[b * n + i];
          normal[a * m + b] = acc;
        }
        rhs[a] = y[a] - fx[a];
      }
      if (!solve_dense(normal, rhs, m)) {
        mu = std::max(mu * 10.0, 1e-12);
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double step = 0.0;
        for (std::size_t a = 0; a < m; ++a) step += jac[a * n + i] * rhs[a];
        trial[i] = std::clamp(best.theta[i] + step, box[i].lo, box[i].hi);
      }
      const double g = ev.gap(trial, y);
      if (g < best.gap) {
        best.gap = g;
        best.theta = trial;
        mu = std::max(mu / 10.0, 1e-15);
        moved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!moved) return;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certification

/// Branch and bound over the epsilon-ball around x. Certified when every
/// cell is excluded, either by its interval enclosure or by the centre value
/// minus the Lipschitz slack. Refuted when a point of the ball maps within
/// tolerance of y. Inconclusive when cells of width <= resolution can be
/// neither excluded nor refuted, or the cell budget runs out.
inline Certification verify_witness(const ChartMap& f, std::span<const double> x, std::span<const double> y,
                                    double epsilon, double resolution, double tolerance,
                                    std::size_t cell_budget = 2'000'000) {
  const Domain& src = f.source();
  if (!src.contains(x, 1e-9)) throw DomainError("verify_witness: x outside the source domain");
  if (y.size() != f.target().dim()) throw DimensionError("verify_witness: target dimension mismatch");

  Certification cert;
  cert.epsilon = epsilon;
  cert.resolution = resolution;
  cert.tolerance = tolerance;
  cert.lipschitz = f.lipschitz();
  const double lip = cert.lipschitz;

  detail::Evaluator ev(f);
  const auto theta0 = src.to_params(x);
  const auto root = detail::ball_box(src, theta0, epsilon);
  const std::size_t n = root.size();

  double bound = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Interval>> stack{root};
  std::vector<double> centre(n);
  std::size_t refinements = 0;

  while (!stack.empty()) {
    if (cert.cells >= cell_budget) {
      cert.budget_exhausted = true;
      break;
    }
    auto cell = std::move(stack.back());
    stack.pop_back();
    ++cert.cells;

    const double ig = ev.interval_gap(cell, y);
    if (ig > tolerance) {
      bound = std::min(bound, ig);
      continue;
    }
    double radius = 0.0;
    double widest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      centre[i] = 0.5 * (cell[i].lo + cell[i].hi);
      radius = std::max(radius, 0.5 * cell[i].width());
      widest = std::max(widest, cell[i].width());
    }
    const double cg = ev.gap(centre, y);
    if (cg <= tolerance) {
      cert.status = CertStatus::Refuted;
      cert.preimage = src.to_chart(centre);
      return cert;
    }
    if (cg - lip * radius > tolerance) {
      bound = std::min(bound, std::max(ig, cg - lip * radius));
      continue;
    }
    if (widest <= resolution) {
      // Grid too coarse here; try to settle it with a local search.
      if (refinements < 64) {
        ++refinements;
        auto local = detail::zoom_search(ev, root, centre, y, radius, 1e-9, tolerance, 60);
        detail::newton_refine(ev, root, y, local, tolerance);
        if (local.gap <= tolerance) {
          cert.status = CertStatus::Refuted;
          cert.preimage = src.to_chart(local.theta);
          return cert;
        }
      }
      ++cert.unresolved;
      continue;
    }

    // Split the dimension whose halves are best separated from y.
    std::size_t best_dim = n;
    double best_score = -1.0;
    std::vector<Interval> lo_half;
    std::vector<Interval> hi_half;
    for (std::size_t i = 0; i < n; ++i) {
      if (cell[i].width() <= 0.0) continue;
      double mid = 0.5 * (cell[i].lo + cell[i].hi);
      if (src.is_pair_param(i) && cell[i].lo < 0.0 && cell[i].hi > 0.0) mid = 0.0;
      auto a = cell;
      auto b = cell;
      a[i].hi = mid;
      b[i].lo = mid;
      const double score = std::min(ev.interval_gap(a, y), ev.interval_gap(b, y));
      const bool better = score > best_score ||
                          (score == best_score && best_dim < n && cell[i].width() > cell[best_dim].width());
      if (better) {
        best_score = score;
        best_dim = i;
        lo_half = std::move(a);
        hi_half = std::move(b);
      }
    }
    if (best_dim == n) {
      ++cert.unresolved;
      continue;
    }
    // Smaller gap explored first.
    if (ev.interval_gap(lo_half, y) < ev.interval_gap(hi_half, y)) {
      stack.push_back(std::move(hi_half));
      stack.push_back(std::move(lo_half));
    } else {
      stack.push_back(std::move(lo_half));
      stack.push_back(std::move(hi_half));
    }
  }

  if (cert.budget_exhausted || cert.unresolved > 0) {
    cert.status = CertStatus::Inconclusive;
  } else {
    cert.status = CertStatus::Certified;
    cert.gap_lower_bound = bound;
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Probe

/// Threshold under which a searched preimage counts as a hit.
inline double cover_threshold(const ChartMap& f, const ProbeConfig& cfg) {
  return cfg.tolerance + f.lipschitz() * cfg.grid * 0.5;
}

/// Closest image to y found in the epsilon-ball around theta0.
inline detail::SearchResult preimage_search(detail::Evaluator& ev, std::span<const Interval> ball,
                                            std::span<const double> theta0, std::span<const double> y,
                                            const ProbeConfig& cfg, double threshold) {
  double h0 = 0.0;
  for (const auto& b : ball) h0 = std::max(h0, 0.5 * b.width());
  auto r = detail::zoom_search(ev, ball, theta0, y, h0, cfg.grid / 8.0, threshold);
  if (r.gap <= threshold) return r;
  detail::newton_refine(ev, ball, y, r, threshold);
  if (r.gap <= threshold) return r;
  std::vector<double> mid(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) mid[i] = 0.5 * (ball[i].lo + ball[i].hi);
  auto r2 = detail::zoom_search(ev, ball, mid, y, h0, cfg.grid / 8.0, threshold);
  detail::newton_refine(ev, ball, y, r2, threshold);
  return r2.gap < r.gap ? r2 : r;
}

inline PointRecord probe_open_at(const ChartMap& f, std::span<const double> x, const ProbeConfig& cfg) {
  cfg.validate();
  const Domain& src = f.source();
  const Domain& tgt = f.target();
  if (x.size() != src.dim()) throw DimensionError("probe: source point has the wrong dimension");
  if (!src.contains(x, 1e-9)) throw DomainError("probe: source point outside the source domain");

  PointRecord rec;
  rec.x = src.snap(x);
  rec.fx = f(rec.x);
  rec.epsilon = cfg.epsilon;

  detail::Evaluator ev(f);
  const auto theta0 = src.to_params(rec.x);
  const auto ball = detail::ball_box(src, theta0, cfg.epsilon);
  const double threshold = cover_threshold(f, cfg);

  std::vector<double> ladder = cfg.deltas;
  std::sort(ladder.begin(), ladder.end());

  struct Miss {
    ChartPoint y;
    double gap;
  };
  std::size_t targets = 0;
  std::size_t covered = 0;
  double max_gap = 0.0;

  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double delta = ladder[k];
    std::mt19937_64 rng(detail::point_seed(cfg.seed, rec.x, delta));
    std::vector<Miss> misses;
    for (std::size_t s = 0; s < cfg.target_samples; ++s) {
      auto y = sample_near(tgt, rec.fx, delta, rng);
      const auto hit = preimage_search(ev, ball, theta0, y, cfg, threshold);
      ++targets;
      max_gap = std::max(max_gap, hit.gap);
      if (hit.gap <= threshold) {
        ++covered;
      } else {
        misses.push_back({std::move(y), hit.gap});
      }
    }

    if (!misses.empty() && k == 0) {
      // Smallest radius: certify the worst misses.
      std::stable_sort(misses.begin(), misses.end(), [](const Miss& a, const Miss& b) {
        if (a.gap != b.gap) return a.gap > b.gap;
        return a.y < b.y;
      });
      std::optional<Certification> inconclusive;
      std::size_t refuted = 0;
      std::size_t open_attempts = 0;
      for (std::size_t m = 0; m < misses.size(); ++m) {
        if (open_attempts >= cfg.max_certifications) break;
        auto cert = verify_witness(f, rec.x, misses[m].y, cfg.epsilon, cfg.certification_resolution,
                                   cfg.tolerance, cfg.cell_budget);
        if (cert.status == CertStatus::Certified) {
          rec.kind = PointKind::Witness;
          rec.target = misses[m].y;
          rec.delta = delta;
          rec.target_distance = chart_distance(rec.target, rec.fx);
          rec.certification = std::move(cert);
          rec.levels.push_back({delta, targets, covered, max_gap});
          return rec;
        }
        if (cert.status == CertStatus::Refuted) {
          ++refuted;
          continue;
        }
        ++open_attempts;
        if (!inconclusive) {
          inconclusive = std::move(cert);
          rec.target = misses[m].y;
        }
      }
      if (refuted == misses.size()) {
        covered += refuted;
      } else {
        rec.kind = PointKind::Inconclusive;
        rec.delta = delta;
        if (inconclusive) {
          rec.target_distance = chart_distance(rec.target, rec.fx);
          rec.certification = std::move(inconclusive);
        } else {
          rec.target = misses.front().y;
          rec.target_distance = chart_distance(rec.target, rec.fx);
        }
        rec.levels.push_back({delta, targets, covered, max_gap});
        return rec;
      }
    }

    rec.levels.push_back({delta, targets, covered, max_gap});
    if (covered < targets) break;
    rec.delta_star = delta;
  }
  rec.kind = PointKind::OpenEvidence;
  return rec;
}

inline void tally(Verdict& v, const PointRecord& r) {
  switch (r.kind) {
    case PointKind::OpenEvidence: ++v.open_count; break;
    case PointKind::Witness: ++v.witness_count; break;
    case PointKind::Inconclusive: ++v.inconclusive_count; break;
  }
  v.records.push_back(r);
}

/// probe_open_at at cfg.point_samples low-discrepancy points, then at the
/// pinned points.
inline Verdict probe_map(const ChartMap& f, const ProbeConfig& cfg, const std::vector<ChartPoint>& pins = {}) {
  cfg.validate();
  Verdict v;
  v.map = f.description();
  DomainSampler sampler(f.source(), cfg.seed);
  for (std::size_t i = 0; i < cfg.point_samples; ++i) tally(v, probe_open_at(f, sampler(i), cfg));
  for (const auto& p : pins) tally(v, probe_open_at(f, p, cfg));
  return v;
}

// ---------------------------------------------------------------------------
// Witness search

struct Candidate {
  ChartPoint x;
  double score = 0.0;
  PointRecord record;
};

struct SearchReport {
  std::size_t lattice_points = 0;
  /// Top-scoring lattice points, probed at full resolution.
  std::vector<Candidate> probed;
  /// Probed points that did not give open evidence.
  std::vector<Candidate> candidates;

  std::vector<PointRecord> witnesses() const {
    std::vector<PointRecord> out;
    for (const auto& c : candidates) {
      if (c.record.kind == PointKind::Witness) out.push_back(c.record);
    }
    return out;
  }
};

/// Coarse lattice of source parameters: box coordinates at lo, mid, hi and
/// pair parameters at -1, -1/2, 0, 1/2, 1.
inline std::vector<std::vector<double>> coarse_lattice(const Domain& d) {
  std::vector<std::vector<double>> axes(d.params());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Interval r = d.param_range(i);
    if (d.is_pair_param(i)) {
      axes[i] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    } else if (r.width() > 0.0) {
      axes[i] = {r.lo, 0.5 * (r.lo + r.hi), r.hi};
    } else {
      axes[i] = {r.lo};
    }
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> digit(axes.size(), 0);
  while (true) {
    std::vector<double> theta(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) theta[i] = axes[i][digit[i]];
    out.push_back(std::move(theta));
    std::size_t k = 0;
    while (k < digit.size() && ++digit[k] == axes[k].size()) digit[k++] = 0;
    if (k == digit.size()) break;
  }
  return out;
}

/// Coarse non-coverage score at x: the largest preimage gap over a few
/// targets at the largest radius, with a short search.
inline double coverage_score(detail::Evaluator& ev, std::span<const double> x, const ProbeConfig& cfg,
                             std::size_t targets = 8) {
  const ChartMap& f = ev.map();
  const auto theta0 = f.source().to_params(x);
  const auto ball = detail::ball_box(f.source(), theta0, cfg.epsilon);
  const auto fx = f(x);
  const double delta = cfg.deltas.front();
  std::mt19937_64 rng(detail::point_seed(cfg.seed ^ 0x5eedULL, x, delta));
  double h0 = 0.0;
  for (const auto& b : ball) h0 = std::max(h0, 0.5 * b.width());
  double score = 0.0;
  for (std::size_t s = 0; s < targets; ++s) {
    const auto y = sample_near(f.target(), fx, delta, rng);
    const auto r = detail::zoom_search(ev, ball, theta0, y, h0, h0 / 16.0, 0.0, 12);
    score = std::max(score, r.gap);
  }
  return score;
}

inline SearchReport witness_search(const ChartMap& f, const ProbeConfig& cfg) {
  cfg.validate();
  detail::Evaluator ev(f);
  const Domain& src = f.source();
  const auto lattice = coarse_lattice(src);
  std::vector<Candidate> scored;
  scored.reserve(lattice.size());
  for (const auto& theta : lattice) {
    Candidate c;
    c.x = src.to_chart(theta);
    c.score = coverage_score(ev, c.x, cfg);
    scored.push_back(std::move(c));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.x < b.x;
  });

  SearchReport rep;
  rep.lattice_points = lattice.size();
  const std::size_t k = std::min(cfg.search_top_k, scored.size());
  for (std::size_t i = 0; i < k; ++i) {
    Candidate c = std::move(scored[i]);
    c.record = probe_open_at(f, c.x, cfg);
    if (c.record.kind != PointKind::OpenEvidence) rep.candidates.push_back(c);
    rep.probed.push_back(std::move(c));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Equivalence of s_X and the two-atom barycenter parameterization

struct EquivalenceRow {
  ChartPoint x;
  PointKind combination = PointKind::OpenEvidence;
  PointKind barycenter = PointKind::OpenEvidence;
  bool agree() const noexcept { return combination == barycenter; }
};

struct EquivalenceReport {
  std::string domain;
  std::vector<EquivalenceRow> rows;
  std::size_t agreements = 0;
  std::size_t combination_witnesses = 0;
  std::size_t barycenter_witnesses = 0;

  bool all_agree() const noexcept { return agreements == rows.size(); }
};

/// Probes the combination map on X and the barycenter of t.delta_x \/ p.delta_y
/// at the same source points: cfg.point_samples sampled points plus the
/// witness-search candidates of the combination map.
inline EquivalenceReport equivalence_check_main(const Domain& x, const ProbeConfig& cfg,
                                                const std::vector<ChartPoint>& extra = {}) {
  cfg.validate();
  const auto s = make_combination_map(x);
  const BaryPairMap b(x);

  std::vector<ChartPoint> points;
  DomainSampler sampler(s.source(), cfg.seed);
  for (std::size_t i = 0; i < cfg.point_samples; ++i) points.push_back(sampler(i));
  for (const auto& c : witness_search(s, cfg).candidates) points.push_back(c.x);
  points.insert(points.end(), extra.begin(), extra.end());

  EquivalenceReport rep;
  rep.domain = std::string(model_name(x.model()));
  for (const auto& p : points) {
    EquivalenceRow row;
    row.x = p;
    row.combination = probe_open_at(s, p, cfg).kind;
    row.barycenter = probe_open_at(b, p, cfg).kind;
    if (row.agree()) ++rep.agreements;
    if (row.combination == PointKind::Witness) ++rep.combination_witnesses;
    if (row.barycenter == PointKind::Witness) ++rep.barycenter_witnesses;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// No affine embedding of [0,1] into R

struct AffineViolation {
  double a = 0.0;  // s(0)
  double b = 0.0;  // s(1)
  double lambda = 0.0;
  double lhs = 0.0;  // s(lambda * 1 \/ 1 * 0)
  double rhs = 0.0;  // (ln lambda + b) \/ a
  double margin = 0.0;
  bool violated() const noexcept { return margin > 0.0; }
};

/// Tests the (.,+)-affinity identity for a candidate s : [0,1] -> R at the
/// combination lambda.1 \/ 1.0 with ln(lambda) < a - b. Candidates that are not
/// injective on the sample grid are rejected with DomainError.
inline AffineViolation no_affine_embedding_check(const std::function<double(double)>& s, std::size_t grid = 1025) {
  if (grid < 2) throw DomainError("no_affine_embedding_check: grid needs at least two points");
  std::vector<double> values(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    values[i] = s(static_cast<double>(i) / static_cast<double>(grid - 1));
    if (!std::isfinite(values[i])) throw DomainError("no_affine_embedding_check: candidate is not finite");
  }
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("no_affine_embedding_check: candidate is not injective on the grid");
  }

  AffineViolation v;
  v.a = s(0.0);
  v.b = s(1.0);
  v.lambda = std::min(1.0, std::exp(v.a - v.b - 1.0));
  v.lhs = s(std::max(v.lambda * 1.0, 1.0 * 0.0));
  v.rhs = std::max(std::log(v.lambda) + v.b, v.a);
  v.margin = std::abs(v.lhs - v.rhs);
  return v;
}

}  // namespace idemconv::probe
