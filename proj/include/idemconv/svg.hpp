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
 * Plain SVG rendering of planar hulls and probe witnesses. Presentation
 * only: nothing here feeds back into a computation.
 */

#pragma once

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/probe.hpp"

namespace idemconv::svg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Maps a data rectangle onto a square canvas (y up).
class Canvas {
 public:
  Canvas(double x0, double y0, double x1, double y1, int size = 480, int margin = 32)
      : x0_(x0), y0_(y0), size_(size), margin_(margin) {
    const double span = std::max({x1 - x0, y1 - y0, 1e-9});
    scale_ = (size - 2.0 * margin) / span;
  }

  Vec2 map(Vec2 p) const {
    return {margin_ + (p.x - x0_) * scale_, size_ - margin_ - (p.y - y0_) * scale_};
  }
  double scale() const noexcept { return scale_; }

  void line(Vec2 a, Vec2 b, const char* stroke, double width = 1.0) {
    a = map(a);
    b = map(b);
    emit("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"%.2f\"/>", a.x, a.y, b.x,
         b.y, stroke, width);
  }
  void polyline(const std::vector<Vec2>& pts, const char* stroke, double width = 1.0) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\" points=\"";
    char buf[48];
    for (auto p : pts) {
      p = map(p);
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", p.x, p.y);
      body_ << buf;
    }
    body_ << "\"/>\n";
  }
  void dot(Vec2 p, double r, const char* fill) {
    p = map(p);
    emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>", p.x, p.y, r, fill);
  }
  void rect(Vec2 lo, Vec2 hi, const char* stroke, const char* fill = "none") {
    const Vec2 a = map({lo.x, hi.y});
    const Vec2 b = map({hi.x, lo.y});
    emit("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" stroke=\"%s\" fill=\"%s\"/>", a.x, a.y, b.x - a.x,
         b.y - a.y, stroke, fill);
  }
  void text(Vec2 p, const std::string& s, int size = 11) {
    p = map(p);
    emit("<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"%d\">", p.x + 4, p.y - 4, size);
    body_ << escape(s) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_
        << "\" viewBox=\"0 0 " << size_ << ' ' << size_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  template <class... A>
  void emit(const char* fmt, A... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    body_ << buf << '\n';
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') {
        out += "&lt;";
      } else if (c == '>') {
        out += "&gt;";
      } else if (c == '&') {
        out += "&amp;";
      } else {
        out += c;
      }
    }
    return out;
  }

  double x0_;
  double y0_;
  int size_;
  int margin_;
  double scale_ = 1.0;
  std::ostringstream body_;
};

namespace detail {

inline double plot_coord(const ExtendedReal& a, double floor) { return a.is_bottom() ? floor : a.value(); }
inline double plot_coord(double a, double) { return a; }

}  // namespace detail

/// Generators, tropical segments between every pair of generators, and the
/// queries (filled when member).
template <Flavor F>
std::string hull_svg(const Polytope<F>& poly, const std::vector<Point<F>>& queries,
                     const std::vector<bool>& member) {
  if (poly.dim() != 2) throw DimensionError("hull_svg: only planar polytopes are drawn");
  double lo = 0.0;
  bool any = false;
  auto scan = [&](const Point<F>& p) {
    for (const auto& c : p) {
      if constexpr (std::same_as<F, MaxPlus>) {
        if (c.is_bottom()) continue;
        lo = any ? std::min(lo, c.value()) : c.value();
      } else {
        lo = any ? std::min(lo, c) : c;
      }
      any = true;
    }
  };
  for (const auto& g : poly.generators()) scan(g);
  for (const auto& q : queries) scan(q);
  const double floor = std::same_as<F, MaxPlus> ? lo - 1.0 : 0.0;

  auto to2 = [&](const Point<F>& p) { return Vec2{detail::plot_coord(p[0], floor), detail::plot_coord(p[1], floor)}; };
  std::vector<Vec2> all;
  for (const auto& g : poly.generators()) all.push_back(to2(g));
  for (const auto& q : queries) all.push_back(to2(q));
  double x0 = all[0].x, x1 = all[0].x, y0 = all[0].y, y1 = all[0].y;
  for (const auto& v : all) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  const double pad = 0.1 * std::max({x1 - x0, y1 - y0, 1.0});
  Canvas c(x0 - pad, y0 - pad, x1 + pad, y1 + pad);

  const auto& gens = poly.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      std::vector<Vec2> seg;
      for (int k = 0; k <= 200; ++k) {
        const double t = k / 100.0;
        typename F::scalar a;
        typename F::scalar b;
        if constexpr (std::same_as<F, MaxPlus>) {
          a = ExtendedReal(t <= 1.0 ? 0.0 : -8.0 * (t - 1.0));
          b = ExtendedReal(t <= 1.0 ? -8.0 * (1.0 - t) : 0.0);
        } else {
          a = t <= 1.0 ? 1.0 : 2.0 - t;
          b = t <= 1.0 ? t : 1.0;
        }
        seg.push_back(to2(pair_combination<F>(gens[i], gens[j], ComboWeights<F>(a, b))));
      }
      c.polyline(seg, "#4477aa", 1.5);
    }
  }
  for (const auto& g : gens) c.dot(to2(g), 4.0, "#222222");
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const bool in = q < member.size() && member[q];
    c.dot(to2(queries[q]), 3.5, in ? "#228833" : "#ee6677");
    c.text(to2(queries[q]), "q" + std::to_string(q));
  }
  return c.str();
}

/// Chart picture of a planar-target witness, zoomed on F(x): target domain,
/// delta-box around F(x), sampled image of the epsilon-ball, and the
/// uncovered target.
inline std::string witness_svg(const probe::ChartMap& f, const probe::PointRecord& r, std::size_t samples = 2000) {
  if (f.target().dim() != 2) throw DimensionError("witness_svg: only planar targets are drawn");
  const double w = 3.0 * std::max(r.delta, r.target_distance) + 1e-6;
  Canvas c(r.fx[0] - w, r.fx[1] - w, r.fx[0] + w, r.fx[1] + w);

  for (const auto& fac : f.target().factors()) {
    if (fac.kind == probe::Factor::Kind::Pair) {
      c.polyline({{0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}}, "#bbbbbb", 3.0);
    } else {
      c.rect({fac.lo, fac.lo}, {fac.hi, fac.hi}, "#bbbbbb");
    }
  }
  const auto theta0 = f.source().to_params(r.x);
  const auto ball = probe::detail::ball_box(f.source(), theta0, r.epsilon);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> theta(ball.size());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < ball.size(); ++i) theta[i] = ball[i].lo + u(rng) * ball[i].width();
    const auto y = f(f.source().to_chart(theta));
    c.dot({y[0], y[1]}, 1.2, "#88ccee");
  }
  const double d = r.delta;
  c.rect({r.fx[0] - d, r.fx[1] - d}, {r.fx[0] + d, r.fx[1] + d}, "#999933");
  c.dot({r.fx[0], r.fx[1]}, 3.0, "#222222");
  c.text({r.fx[0], r.fx[1]}, "F(x)");
  if (!r.target.empty()) {
    c.dot({r.target[0], r.target[1]}, 3.5, "#cc3311");
    c.text({r.target[0], r.target[1] - 0.02}, "y");
  }
  return c.str();
}

}  // namespace idemconv::svg
