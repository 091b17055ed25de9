#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"

using namespace idemconv;
using Catch::Approx;

namespace {

const ExtendedReal kBot = ExtendedReal::bottom();

MaxPlusPoint mp(std::initializer_list<double> xs) {
  MaxPlusPoint p;
  for (double x : xs) p.emplace_back(x);
  return p;
}

// Exhaustive search over a finite lambda grid: is p exactly a normalized
// combination of the generators? Plain double arithmetic with -inf.
bool grid_member_mp(const std::vector<std::vector<double>>& gens, const std::vector<double>& p,
                    const std::vector<double>& grid) {
  const std::size_t n = gens.size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double top = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, grid[idx[i]]);
    if (top == 0.0) {
      bool same = true;
      for (std::size_t j = 0; j < p.size() && same; ++j) {
        double c = -INFINITY;
        for (std::size_t i = 0; i < n; ++i) c = std::max(c, grid[idx[i]] + gens[i][j]);
        same = c == p[j];
      }
      if (same) return true;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid.size()) idx[k++] = 0;
    if (k == n) return false;
  }
}

bool grid_member_mt(const std::vector<std::vector<double>>& gens, const std::vector<double>& p,
                    const std::vector<double>& grid) {
  const std::size_t n = gens.size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, grid[idx[i]]);
    if (top == 1.0) {
      bool same = true;
      for (std::size_t j = 0; j < p.size() && same; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c = std::max(c, grid[idx[i]] * gens[i][j]);
        same = c == p[j];
      }
      if (same) return true;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid.size()) idx[k++] = 0;
    if (k == n) return false;
  }
}

MaxPlusPoint to_mp(const std::vector<double>& v) { return MaxPlusPoint(v.begin(), v.end()); }

}  // namespace

TEST_CASE("max-plus combinations") {
  const std::vector<MaxPlusPoint> one = {mp({-1.0, -2.5})};
  const std::vector<ExtendedReal> zero = {ExtendedReal(0.0)};
  CHECK(mp_combination(one, zero) == one[0]);

  const std::vector<MaxPlusPoint> xy = {mp({0.0, -3.0}), mp({-2.0, 0.0})};
  CHECK(mp_combination(xy, std::vector<ExtendedReal>{ExtendedReal(0.0), ExtendedReal(-1.0)}) == mp({0.0, -1.0}));
  CHECK(mp_combination(xy, std::vector<ExtendedReal>{ExtendedReal(0.0), kBot}) == xy[0]);
  CHECK_THROWS_AS(mp_combination(xy, std::vector<ExtendedReal>{ExtendedReal(-0.5), ExtendedReal(-1.0)}),
                  NormalizationError);
  CHECK_THROWS_AS(mp_combination(xy, std::vector<ExtendedReal>{ExtendedReal(0.0)}), DimensionError);
}

TEST_CASE("max-times combinations") {
  const std::vector<MaxTimesPoint> xy = {{1.0, 0.2}, {0.4, 1.0}};
  CHECK(mt_combination(xy, std::vector<double>{1.0, 0.0}) == xy[0]);
  CHECK(mt_combination(xy, std::vector<double>{1.0, 0.5}) == MaxTimesPoint{1.0, 0.5});
  const std::vector<MaxTimesPoint> xx = {{0.3, 0.7}, {0.3, 0.7}};
  CHECK(mt_combination(xx, std::vector<double>{0.25, 1.0}) == xx[0]);
  CHECK_THROWS_AS(mt_combination(xy, std::vector<double>{0.9, 0.5}), NormalizationError);
}

TEST_CASE("s_map, p_map, weights_ln") {
  const MaxTimesPoint x{1.0, 0.5};
  const MaxTimesPoint y{0.5, 1.0};
  CHECK(s_map(x, y, ComboWeights<MaxTimes>(1.0, 0.0)) == x);
  CHECK(s_map(x, x, ComboWeights<MaxTimes>(0.3, 1.0)) == x);
  CHECK(s_map(x, y, ComboWeights<MaxTimes>(1.0, 0.6)) == MaxTimesPoint{1.0, 0.6});
  CHECK_THROWS_AS(ComboWeights<MaxTimes>(0.9, 0.9), DomainError);

  const auto a = mp({0.0, -1.0});
  const auto b = mp({-1.0, 0.0});
  CHECK(p_map(a, b, ComboWeights<MaxPlus>(ExtendedReal(0.0), kBot)) == a);
  CHECK(p_map(a, b, ComboWeights<MaxPlus>(ExtendedReal(0.0), ExtendedReal(-3.0))) == mp({0.0, -1.0}));
  CHECK(p_map(a, a, ComboWeights<MaxPlus>(ExtendedReal(-2.0), ExtendedReal(0.0))) == a);
  CHECK_THROWS_AS(ComboWeights<MaxPlus>(ExtendedReal(-1.0), ExtendedReal(-1.0)), DomainError);

  const auto w1 = weights_ln(ComboWeights<MaxTimes>(1.0, 1.0));
  CHECK(w1.t() == ExtendedReal(0.0));
  CHECK(w1.p() == ExtendedReal(0.0));
  CHECK(weights_ln(ComboWeights<MaxTimes>(1.0, 0.0)).p().is_bottom());
  CHECK(weights_ln(ComboWeights<MaxTimes>(1.0, 0.5)).p().value() == Approx(std::log(0.5)).margin(1e-15));
}

TEST_CASE("hull projection and membership on ID") {
  const auto id = interval_ID();
  for (const auto& g : id.generators()) {
    CHECK(hull_project(g, id).point == g);
    CHECK(hull_member(g, id).member);
  }
  const auto m = hull_member(mp({-1.0, 0.0}), id);
  CHECK(m.member);
  CHECK(m.lambdas == std::vector<ExtendedReal>{ExtendedReal(-1.0), ExtendedReal(0.0)});
  CHECK(hull_member(mp({-0.3, 0.0}), id).member);

  const auto proj = hull_project(mp({-1.0, -1.0}), id);
  CHECK(proj.point == mp({-1.0, -1.0}));
  CHECK_FALSE(proj.normalized);
  CHECK_FALSE(hull_member(mp({-1.0, -1.0}), id).member);

  const std::vector<double> grid = [] {
    std::vector<double> g{-INFINITY};
    for (int k = -16; k <= 0; ++k) g.push_back(k / 8.0);
    return g;
  }();
  CHECK_FALSE(grid_member_mp({{0.0, -INFINITY}, {-INFINITY, 0.0}}, {-1.0, -1.0}, grid));
  CHECK(grid_member_mp({{0.0, -INFINITY}, {-INFINITY, 0.0}}, {-1.0, 0.0}, grid));

  CHECK_THROWS_AS(hull_project(mp({0.0, 0.0, 0.0}), id), DimensionError);
}

TEST_CASE("max-plus membership agrees with an exhaustive lambda grid") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> q(-8, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> grid{-INFINITY};
  for (int k = -16; k <= 0; ++k) grid.push_back(k / 4.0);
  auto coord = [&] { return u(rng) < 0.15 ? -INFINITY : q(rng) / 4.0; };
  int members = 0;
  int non_members = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t d = 2 + t % 2;
    const std::size_t n = 2 + (t / 2) % 2;
    std::vector<std::vector<double>> gens(n, std::vector<double>(d));
    for (auto& g : gens) {
      for (auto& c : g) c = coord();
      g[t % d] = 0.0;
    }
    std::vector<double> p(d);
    for (auto& c : p) c = coord();
    if (t % 3 == 0) {
      // A combination with grid weights: a member by construction.
      std::vector<double> lam(n);
      for (auto& l : lam) l = grid[static_cast<std::size_t>(u(rng) * grid.size()) % grid.size()];
      lam[t % n] = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        p[j] = -INFINITY;
        for (std::size_t i = 0; i < n; ++i) p[j] = std::max(p[j], lam[i] + gens[i][j]);
      }
    }
    std::vector<MaxPlusPoint> g2;
    for (const auto& g : gens) g2.push_back(to_mp(g));
    const Polytope<MaxPlus> poly(g2);
    const bool oracle = grid_member_mp(gens, p, grid);
    const auto lib = hull_member(to_mp(p), poly);
    CHECK(lib.member == oracle);
    (oracle ? members : non_members)++;
    if (lib.member) {
      CHECK(mp_combination(g2, lib.lambdas) == to_mp(p));
    }
    const auto once = hull_project(to_mp(p), poly).point;
    CHECK(hull_project(once, poly).point == once);
    for (std::size_t j = 0; j < d; ++j) CHECK(once[j] <= ExtendedReal(p[j]));
  }
  CHECK(members > 50);
  CHECK(non_members > 50);
}

TEST_CASE("max-times membership agrees with an exhaustive lambda grid") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> e(0, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> grid{0.0};
  for (int k = 0; k <= 8; ++k) grid.push_back(std::ldexp(1.0, -k));
  auto coord = [&] { return u(rng) < 0.15 ? 0.0 : std::ldexp(1.0, -e(rng)); };
  int members = 0;
  int non_members = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t d = 2 + t % 2;
    const std::size_t n = 2 + (t / 2) % 2;
    std::vector<std::vector<double>> gens(n, std::vector<double>(d));
    for (auto& g : gens) {
      for (auto& c : g) c = coord();
    }
    std::vector<double> p(d);
    for (auto& c : p) c = coord();
    if (t % 3 == 0) {
      std::vector<double> lam(n);
      for (auto& l : lam) l = grid[static_cast<std::size_t>(u(rng) * grid.size()) % grid.size()];
      lam[t % n] = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        p[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) p[j] = std::max(p[j], lam[i] * gens[i][j]);
      }
    }
    const Polytope<MaxTimes> poly(gens);
    const bool oracle = grid_member_mt(gens, p, grid);
    const auto lib = hull_member(p, poly);
    CHECK(lib.member == oracle);
    (oracle ? members : non_members)++;
    if (lib.member) CHECK(mt_combination(gens, lib.lambdas) == p);
    const auto once = hull_project(p, poly).point;
    CHECK(hull_project(once, poly).point == once);
  }
  CHECK(members > 50);
  CHECK(non_members > 50);
}

TEST_CASE("closure: combinations are members") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + t % 4;
    const std::size_t n = 1 + t % 5;
    std::vector<MaxTimesPoint> gens(n, MaxTimesPoint(d));
    for (auto& g : gens) {
      for (auto& c : g) c = u(rng) < 0.1 ? 0.0 : u(rng);
    }
    std::vector<double> lam(n);
    for (auto& l : lam) l = u(rng) < 0.2 ? 0.0 : u(rng);
    lam[t % n] = 1.0;
    const Polytope<MaxTimes> k(gens);
    CHECK(hull_member(mt_combination(gens, lam), k).member);

    std::vector<MaxPlusPoint> mgens;
    for (const auto& g : gens) mgens.push_back(LogEmbedding(d)(g));
    std::vector<ExtendedReal> mlam;
    for (double l : lam) mlam.push_back(to_maxplus(UnitWeight(l)));
    const Polytope<MaxPlus> a(mgens);
    CHECK(hull_member(mp_combination(mgens, mlam), a).member);
  }
}

TEST_CASE("named polytopes") {
  CHECK(simplex_AD().generators() == std::vector<MaxTimesPoint>{{1.0, 0.0}, {0.0, 1.0}});
  const auto b = box<MaxTimes>(0.25, 1.0, 2);
  CHECK(hull_member(MaxTimesPoint{0.25, 0.6}, b).member);
  CHECK(hull_member(MaxTimesPoint{1.0, 1.0}, b).member);
  CHECK_FALSE(hull_member(MaxTimesPoint{0.1, 0.6}, b).member);
  const auto p = product(simplex_AD(), simplex_AD());
  CHECK(p.dim() == 4);
  CHECK(hull_member(MaxTimesPoint{1.0, 0.3, 0.2, 1.0}, p).member);
  CHECK_FALSE(hull_member(MaxTimesPoint{0.5, 0.3, 0.2, 1.0}, p).member);
}

TEST_CASE("truncated log embedding") {
  const auto h1 = build_embedding(1, 1);
  CHECK(h1(MaxTimesPoint{0.5})[0].value() == Approx(std::log(0.5)).margin(1e-15));
  CHECK(h1(MaxTimesPoint{0.1})[0] == ExtendedReal(-1.0));
  const auto h = build_embedding(2, 2);
  CHECK(h(MaxTimesPoint{1.0, 1.0}) == mp({0.0, 0.0, 0.0, 0.0}));
  CHECK(h(MaxTimesPoint{1.0, 0.0}) == mp({0.0, 0.0, -1.0, -2.0}));
  CHECK(h.output_dim() == 4);

  for (std::size_t d = 1; d <= 3; ++d) {
    for (int n = 1; n <= 8; ++n) {
      const auto rep = check_affine(
          build_embedding(d, n),
          [d](std::mt19937_64& g) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            MaxTimesPoint p(d);
            for (auto& c : p) c = u(g);
            return p;
          },
          500, 100 + n);
      CHECK(rep.passed());
      CHECK(rep.max_discrepancy <= 1e-12);
    }
  }
}

TEST_CASE("check_affine flags a non-affine map") {
  struct Identity {
    MaxPlusPoint operator()(const MaxTimesPoint& u) const {
      MaxPlusPoint out;
      for (double c : u) out.emplace_back(c);
      return out;
    }
  };
  const auto rep = check_affine(
      Identity{}, [](std::mt19937_64& g) { return MaxTimesPoint{std::uniform_real_distribution<double>(0.0, 1.0)(g)}; },
      200, 1);
  CHECK_FALSE(rep.passed());
  // The hand example lambda = e^-2, s = 1, k = 0: e^-2 against 0 \/ (-2 + 1).
  const double lhs = std::max(std::exp(-2.0) * 1.0, 0.0);
  const double rhs = std::max(-2.0 + 1.0, 0.0);
  CHECK(lhs - rhs == Approx(std::exp(-2.0)));
}

TEST_CASE("flavor transport of membership through the embedding") {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> e(0, 4);
  int agree = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 2;
    const std::size_t n = 2 + t % 3;
    std::vector<MaxTimesPoint> gens(n, MaxTimesPoint(d));
    for (auto& g : gens) {
      for (auto& c : g) c = std::ldexp(1.0, -e(rng));
    }
    MaxTimesPoint p(d);
    for (auto& c : p) c = std::ldexp(1.0, -e(rng));
    const auto h = build_embedding(d, 4);
    std::vector<MaxPlusPoint> hg;
    for (const auto& g : gens) hg.push_back(h(g));
    const bool a = hull_member(p, Polytope<MaxTimes>(gens)).member;
    const bool b = hull_member(h(p), Polytope<MaxPlus>(hg)).member;
    CHECK(a == b);
    agree += a ? 1 : 0;
  }
  CHECK(agree > 20);
}

TEST_CASE("s_map and p_map intertwine through the embedding") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t d = 1 + t % 4;
    const int n = 1 + t % 8;
    MaxTimesPoint x(d), y(d);
    for (auto& c : x) c = u(rng);
    for (auto& c : y) c = u(rng);
    const double r = u(rng);
    const ComboWeights<MaxTimes> w = t % 2 == 0 ? ComboWeights<MaxTimes>(1.0, r) : ComboWeights<MaxTimes>(r, 1.0);
    const auto h = build_embedding(d, n);
    const auto lhs = h(s_map(x, y, w));
    const auto rhs = p_map(h(x), h(y), weights_ln(w));
    for (std::size_t j = 0; j < lhs.size(); ++j) CHECK(std::abs(lhs[j].value() - rhs[j].value()) <= 1e-9);
  }
}

TEST_CASE("binary combinations generate n-ary ones") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t d = 1 + t % 3;
    const std::size_t n = 2 + t % 5;
    std::vector<MaxTimesPoint> pts(n, MaxTimesPoint(d));
    for (auto& p : pts) {
      for (auto& c : p) c = u(rng);
    }
    std::vector<double> lam(n);
    for (auto& l : lam) l = 0.01 + 0.99 * u(rng);
    lam[t % n] = 1.0;
    // acc holds (1/m) \/_{i<=k} lam_i pts_i with m the running max weight.
    MaxTimesPoint acc = pts[0];
    double m = lam[0];
    for (std::size_t k = 1; k < n; ++k) {
      const double next = std::max(m, lam[k]);
      acc = s_map(acc, pts[k], ComboWeights<MaxTimes>(m == next ? 1.0 : m / next, lam[k] == next ? 1.0 : lam[k] / next));
      m = next;
    }
    const auto direct = mt_combination(pts, lam);
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(acc[j] - direct[j]) <= 1e-12);
  }
}
