#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "idemconv/convexity.hpp"
#include "idemconv/errors.hpp"
#include "idemconv/measures.hpp"

using namespace idemconv;
using Catch::Approx;

namespace {

const ExtendedReal kBot = ExtendedReal::bottom();

FiniteSpace ab() { return FiniteSpace({"a", "b"}); }
FiniteSpace abc() { return FiniteSpace({"a", "b", "c"}); }

std::vector<ExtendedReal> ev(std::initializer_list<double> xs) {
  std::vector<ExtendedReal> out;
  for (double x : xs) out.emplace_back(x);
  return out;
}

// Reference evaluation straight from the definition, on plain doubles.
double ref_eval_mp(const std::vector<double>& w, const std::vector<double>& phi) {
  double best = -INFINITY;
  for (std::size_t i = 0; i < w.size(); ++i) best = std::max(best, w[i] + phi[i]);
  return best;
}

}  // namespace

TEST_CASE("finite spaces") {
  CHECK_THROWS(FiniteSpace({"a", "a"}));
  CHECK_THROWS(FiniteSpace(std::vector<std::string>{}));
  const auto s = FiniteSpace::of_size(3);
  CHECK(s.label(2) == "2");
  CHECK(s.index_of("1") == 1);
}

TEST_CASE("eval_mp examples") {
  const auto x = ab();
  const auto delta_b = dirac<MaxPlus>(x, "b");
  const Function<MaxPlus> phi(x, ev({1.0, 5.0}));
  CHECK(eval_mp(delta_b, phi) == ExtendedReal(5.0));

  const MaxPlusMeasure mu(x, ev({0.0, -2.0}));
  CHECK(eval_mp(mu, phi) == ExtendedReal(3.0));
  CHECK(eval_mp(mu, Function<MaxPlus>::constant(x, ExtendedReal(-1.75))) == ExtendedReal(-1.75));

  CHECK_THROWS_AS(eval_mp(mu, Function<MaxPlus>(abc(), ev({0, 0, 0}))), SpaceMismatch);
}

TEST_CASE("eval_mt examples") {
  const auto x = ab();
  const MaxTimesMeasure nu(x, {1.0, 0.5});
  CHECK(eval_mt(nu, Function<MaxTimes>(x, {0.2, 0.8})) == Approx(0.4).margin(1e-15));
  CHECK(eval_mt(dirac<MaxTimes>(x, "a"), Function<MaxTimes>(x, {0.3, 0.9})) == 0.3);
  CHECK(eval_mt(nu, Function<MaxTimes>::constant(x, 1.0)) == 1.0);
  CHECK_THROWS_AS(Function<MaxTimes>(x, {0.2, 1.2}), DomainError);
}

TEST_CASE("dirac") {
  const auto mu = dirac<MaxPlus>(ab(), "a");
  CHECK(mu.weights() == std::vector<ExtendedReal>{ExtendedReal(0.0), kBot});
  const auto nu = dirac<MaxTimes>(ab(), "b");
  CHECK(nu.weights() == std::vector<double>{0.0, 1.0});
  CHECK_THROWS(dirac<MaxPlus>(ab(), "z"));
}

TEST_CASE("normalization") {
  CHECK(normalize<MaxPlus>(ab(), ev({-1.0, -3.0})).weights() == ev({0.0, -2.0}));
  CHECK(normalize<MaxTimes>(ab(), {0.5, 0.25}).weights() == std::vector<double>{1.0, 0.5});
  const MaxPlusMeasure mu(ab(), ev({0.0, -2.0}));
  CHECK(normalize<MaxPlus>(ab(), mu.weights()) == mu);
  CHECK_THROWS_AS(normalize<MaxPlus>(ab(), {kBot, kBot}), NormalizationError);
  CHECK_THROWS_AS(normalize<MaxTimes>(ab(), {0.0, 0.0}), NormalizationError);
  CHECK_THROWS_AS(MaxPlusMeasure(ab(), ev({-0.5, -1.0})), NormalizationError);
  CHECK_THROWS_AS(MaxTimesMeasure(ab(), {0.5, 0.9}), NormalizationError);
  CHECK_THROWS_AS(MaxPlusMeasure(ab(), ev({0.5, 0.0})), NormalizationError);
  // Within 1e-12 of the unit snaps onto it.
  CHECK(MaxTimesMeasure(ab(), {1.0 - 1e-14, 0.5}).weight(0) == 1.0);
  // Bottom atoms are kept; prune drops them.
  const MaxTimesMeasure nu(abc(), {1.0, 0.0, 0.5});
  CHECK(nu.weights().size() == 3);
  CHECK(nu.prune().space().labels() == std::vector<std::string>{"a", "c"});
}

TEST_CASE("pushforward") {
  const FiniteSpace uv({"u", "v"});
  const SpaceMap f(abc(), uv, {0, 0, 1});
  const MaxPlusMeasure mu(abc(), ev({0.0, -1.0, -2.0}));
  CHECK(pushforward(f, mu).weights() == ev({0.0, -2.0}));

  const SpaceMap constant(abc(), uv, {1, 1, 1});
  CHECK(pushforward(constant, mu) == dirac<MaxPlus>(uv, "v"));

  const SpaceMap swap(ab(), ab(), {1, 0});
  const MaxTimesMeasure nu(ab(), {1.0, 0.25});
  CHECK(pushforward(swap, nu).weights() == std::vector<double>{0.25, 1.0});
  CHECK(pushforward(SpaceMap::identity(ab()), nu) == nu);
  CHECK_THROWS_AS(pushforward(f, nu), SpaceMismatch);
}

TEST_CASE("pushforward respects composition") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto x = FiniteSpace::of_size(4);
  for (int t = 0; t < 2000; ++t) {
    std::vector<std::size_t> fi(4), gi(4);
    for (auto& i : fi) i = pick(rng);
    for (auto& i : gi) i = pick(rng);
    const SpaceMap f(x, x, fi);
    const SpaceMap g(x, x, gi);
    std::vector<double> w(4);
    for (auto& v : w) v = u(rng) < 0.2 ? 0.0 : u(rng);
    w[pick(rng)] = 1.0;
    const MaxTimesMeasure nu(x, w);
    CHECK(pushforward(f.then(g), nu) == pushforward(g, pushforward(f, nu)));
    const auto mu = iso_gX(nu);
    CHECK(pushforward(f.then(g), mu) == pushforward(g, pushforward(f, mu)));
  }
}

TEST_CASE("measure axioms against a reference evaluation") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dy(-64, 0);
  std::uniform_int_distribution<int> fv(-64, 64);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 1 + t % 5;
    const auto x = FiniteSpace::of_size(n);
    std::vector<double> w(n), phi(n), psi(n);
    for (auto& v : w) v = dy(rng) / 8.0;
    w[t % n] = 0.0;
    for (auto& v : phi) v = fv(rng) / 8.0;
    for (auto& v : psi) v = fv(rng) / 8.0;
    const double c = fv(rng) / 8.0;
    std::vector<ExtendedReal> we(w.begin(), w.end());
    const MaxPlusMeasure mu(x, we);
    auto fn = [&](const std::vector<double>& v) { return Function<MaxPlus>(x, std::vector<ExtendedReal>(v.begin(), v.end())); };

    CHECK(eval_mp(mu, fn(phi)).value() == ref_eval_mp(w, phi));
    std::vector<double> shifted(n), joined(n);
    for (std::size_t i = 0; i < n; ++i) {
      shifted[i] = c + phi[i];
      joined[i] = std::max(phi[i], psi[i]);
    }
    CHECK(eval_mp(mu, fn(shifted)).value() == c + ref_eval_mp(w, phi));
    CHECK(eval_mp(mu, fn(joined)).value() == std::max(ref_eval_mp(w, phi), ref_eval_mp(w, psi)));
    CHECK(eval_mp(mu, Function<MaxPlus>::constant(x, ExtendedReal(0.0))) == ExtendedReal(0.0));
  }
}

TEST_CASE("density") {
  const auto x = ab();
  const auto d = dirac<MaxPlus>(x, "a");
  CHECK(density_mp(d, "a") == ExtendedReal(0.0));
  CHECK(density_mp(d, "b").is_bottom());
  const MaxPlusMeasure mu(x, ev({0.0, -2.0}));
  CHECK(density_mp(mu, "b") == ExtendedReal(-2.0));
  CHECK(density_inf_formula(mu, "b") == ExtendedReal(-2.0));
  CHECK(density_inf_formula(d, "b").is_bottom());
  CHECK_THROWS(density_mp(mu, "q"));

  // Max-times: the formula recovers ln of the weights.
  const MaxTimesMeasure nu(abc(), {1.0, 0.5, 0.0});
  CHECK(density_inf_formula(nu, "b").value() == Approx(std::log(0.5)).margin(1e-12));
  CHECK(density_inf_formula(nu, "c").is_bottom());

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-30.0, 0.0);
  for (int t = 0; t < 500; ++t) {
    const auto s = FiniteSpace::of_size(4);
    std::vector<ExtendedReal> w(4);
    for (auto& v : w) v = u(rng) < -27.0 ? kBot : ExtendedReal(u(rng));
    w[t % 4] = ExtendedReal(0.0);
    const MaxPlusMeasure m(s, w);
    for (const auto& label : s.labels()) {
      const auto a = density_mp(m, label);
      const auto b = density_inf_formula(m, label);
      CHECK(approx_equal(a, b, 1e-9));
    }
  }
}

TEST_CASE("g_X and its inverse") {
  CHECK(iso_gX(dirac<MaxTimes>(ab(), "a")) == dirac<MaxPlus>(ab(), "a"));
  const auto mu = iso_gX(MaxTimesMeasure(ab(), {1.0, 0.5}));
  CHECK(mu.weight(0) == ExtendedReal(0.0));
  CHECK(mu.weight(1).value() == Approx(std::log(0.5)).margin(1e-15));
  CHECK(iso_gX(MaxTimesMeasure(ab(), {1.0, 0.0})).weight(1).is_bottom());

  CHECK(iso_gX_inv(dirac<MaxPlus>(ab(), "b")) == dirac<MaxTimes>(ab(), "b"));
  CHECK(iso_gX_inv(MaxPlusMeasure(ab(), {ExtendedReal(0.0), kBot})).weights() == std::vector<double>{1.0, 0.0});
  CHECK(iso_gX_inv(MaxPlusMeasure(ab(), ev({0.0, -1.0}))).weight(1) == Approx(std::exp(-1.0)).margin(1e-15));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto x = FiniteSpace::of_size(5);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> w(5), phi(5);
    for (auto& v : w) v = u(rng) < 0.2 ? 0.0 : u(rng);
    w[t % 5] = 1.0;
    for (auto& v : phi) v = u(rng) < 0.1 ? 0.0 : u(rng);
    const MaxTimesMeasure nu(x, w);
    const auto back = iso_gX_inv(iso_gX(nu));
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(back.weight(i) - w[i]) <= 1e-12);

    // ln nu(phi) = g_X(nu)(ln phi).
    std::vector<ExtendedReal> lnphi;
    for (double v : phi) lnphi.push_back(to_maxplus(UnitWeight(v)));
    const double lhs = eval_mt(nu, Function<MaxTimes>(x, phi));
    const auto rhs = eval_mp(iso_gX(nu), Function<MaxPlus>(x, lnphi));
    CHECK(approx_equal(to_maxplus(UnitWeight(lhs)), rhs, 1e-9));
  }
}

TEST_CASE("l_h transport") {
  const auto h = build_embedding(2, 3);
  const MaxTimesPoint x{1.0, 0.5};
  const MaxTimesPoint y{0.25, 1.0};

  const auto d = transport_lh(EmbeddedMeasure<MaxTimes>::dirac(x), h);
  REQUIRE(d.size() == 1);
  CHECK(d.atoms()[0] == h(x));
  CHECK(d.weights()[0] == ExtendedReal(0.0));

  const auto two = transport_lh(EmbeddedMeasure<MaxTimes>({x, y}, {1.0, 0.5}), h);
  REQUIRE(two.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    if (two.atoms()[i] == h(x)) CHECK(two.weights()[i] == ExtendedReal(0.0));
    if (two.atoms()[i] == h(y)) CHECK(two.weights()[i].value() == Approx(std::log(0.5)).margin(1e-15));
  }

  const auto zero = transport_lh(EmbeddedMeasure<MaxTimes>({x, y}, {1.0, 0.0}), h);
  for (std::size_t i = 0; i < 2; ++i) {
    if (zero.atoms()[i] == h(y)) CHECK(zero.weights()[i].is_bottom());
  }

  const auto h1 = build_embedding(1, 3);
  CHECK_THROWS_AS(transport_lh(EmbeddedMeasure<MaxTimes>::dirac(x), h1), DomainError);
}
