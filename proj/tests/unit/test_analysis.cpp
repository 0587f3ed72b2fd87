#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rankone/error.hpp"
#include "rankone/analysis.hpp"
#include "rankone/families.hpp"
#include "rankone/nnls.hpp"

using namespace rankone;

namespace {

TowerChain chain_of(const nlohmann::json& j) {
  FamilySpec spec;
  from_json(j, spec);
  return TowerChain(make_schedule(spec));
}

}  // namespace

TEST_CASE("statistical D examples") {
  CHECK(statistical_D({0, 1, 0, 1}, 1) == 0);
  CHECK(statistical_D({0, 1, 0, 1}, 2) == 8);
  CHECK(statistical_D({0, 0, 0, 0, 0}, 3) == 5);
  CHECK_THROWS_AS(statistical_D({0, 1, 0, 1}, 4), Error);
}

TEST_CASE("statistical D is bounded and rotation invariant") {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 200; ++t) {
    std::int64_t r = std::uniform_int_distribution<std::int64_t>(3, 40)(gen);
    std::vector<std::uint8_t> f(static_cast<std::size_t>(r));
    for (auto& x : f) x = static_cast<std::uint8_t>(gen() >> 63);
    std::int64_t m = std::uniform_int_distribution<std::int64_t>(1, r - 1)(gen);
    std::uint64_t d = statistical_D(f, m);
    CHECK(d <= static_cast<std::uint64_t>(2 * r));
    auto g = f;
    std::rotate(g.begin(), g.begin() + (t % r), g.end());
    CHECK(statistical_D(g, m) == d);
  }
}

TEST_CASE("stat lemma Monte Carlo is reproducible and thread independent") {
  StatLemmaSample a = stat_lemma_mc_serial(500, 10, 0.5, 12, 33);
  StatLemmaSample b = stat_lemma_mc_parallel(500, 10, 0.5, 12, 33);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_json() == stat_lemma_mc_serial(500, 10, 0.5, 12, 33).to_json());
  CHECK(a.fraction >= 0);
  CHECK(a.fraction <= 1);
  CHECK(stat_lemma_vector(500, 33, 3) == stat_lemma_vector(500, 33, 3));
  CHECK(stat_lemma_vector(500, 33, 3) != stat_lemma_vector(500, 33, 4));
}

TEST_CASE("asymmetry witness is exact") {
  TowerChain c = chain_of({{"family", "self_similar"}, {"v", {0, 1, 2}}});
  LevelSet a = LevelSet::base(3, c);
  for (std::int64_t j = 4; j <= 6; ++j) {
    AsymmetryReport r = asymmetry_test(c, a, j);
    CHECK(r.one_three == Enclosure(Rational(a.measure() / 3)));
    CHECK(r.two_three == Enclosure(Rational(0)));
  }
  CHECK_THROWS_AS(asymmetry_test(c, a, 3), Error);
}

TEST_CASE("weak limits of simple families") {
  SUBCASE("odometer: T^{h_j} tends to the identity") {
    TowerChain c(make_schedule("odometer"));
    std::vector<BigInt> powers;
    for (std::int64_t j = 8; j <= 10; ++j) powers.push_back(c.height(j));
    LimitFit f = weak_limit_fit(c, powers, 0, 3, 3);
    CHECK(f.headline().coefficients[0] == doctest::Approx(1.0).epsilon(0.01));
    CHECK(f.headline().residual < 0.01);
  }
  SUBCASE("self-similar (0, 1): T^{h_j} tends to half the identity") {
    TowerChain c = chain_of({{"family", "self_similar"}, {"v", {0, 1}}});
    std::vector<BigInt> powers = {c.height(9), c.height(10)};
    LimitFit f = weak_limit_fit(c, powers, 0, 3, 3);
    CHECK_FALSE(f.normalized);
    CHECK(f.headline().coefficients[0] == doctest::Approx(0.5).epsilon(0.02));
    for (std::size_t k = 1; k < f.headline().coefficients.size(); ++k) CHECK(f.headline().coefficients[k] < 0.02);
  }
  SUBCASE("coefficients stay in the capped simplex") {
    TowerChain c(make_schedule("chacon_classical"));
    LimitFit f = weak_limit_fit(c, {-c.height(12)}, 0, 6, 3);
    double sum = f.headline().theta;
    for (double a : f.headline().coefficients) {
      CHECK(a >= 0);
      sum += a;
    }
    CHECK(sum <= 1 + 1e-12);
    CHECK(f.headline().residual >= 0);
  }
}

TEST_CASE("least-squares residual does not grow with the window") {
  TowerChain c(make_schedule("chacon_classical"));
  std::vector<BigInt> powers = {-c.height(12)};
  double prev = 1e9;
  for (std::int64_t k_max = 0; k_max <= 5; ++k_max) {
    double r = weak_limit_fit(c, powers, 0, k_max, 3).headline().ls_residual;
    CHECK(r <= prev + 1e-9);
    prev = r;
  }
}

TEST_CASE("fit needs a non-degenerate test family") {
  TowerChain c(make_schedule("chacon_classical"));
  CHECK_THROWS_AS(weak_limit_fit(c, {BigInt(3)}, 0, 2, 1), Error);
  CHECK_THROWS_AS(weak_limit_fit(c, {}, 0, 2, 3), Error);
}

TEST_CASE("averaging over equal spacers is one unitary power") {
  TowerChain c = chain_of({{"family", "odometer"}, {"r", 5}});
  LevelSet f(2, {0, 2}, c);
  DeviationReport r = averaging_deviation(c, 2, 2, f);
  Rational nu = f.measure() / space_measure(c).lo();
  CHECK(r.value.contains(nu - nu * nu));
  CHECK(r.value.width() < Rational(1, 1000000));
  CHECK(r.distinct_differences == 1);
}

TEST_CASE("tensor closeness: algebraic identities and shift invariance") {
  TowerChain c = chain_of({{"family", "slow_growth"}, {"N", {{"kind", "affine"}, {"a", 4}, {"b", 0}}}});
  LevelSet f = LevelSet::base(2, c);
  SUBCASE("r = 1, M = 1: lhs = 2 gamma(0)^2 - 2 gamma(p)^2") {
    BigInt p = c.height(4);
    TensorCloseness t = tensor_closeness(c, f, 1, {p});
    Enclosure mx = space_measure(c);
    Enclosure g0 = Enclosure(f.measure()) / mx;
    Enclosure gp = shifted_intersection(c, f, p, f) / mx;
    Enclosure expect = Enclosure(Rational(2)) * g0.square() - Enclosure(Rational(2)) * gp.square();
    CHECK(t.lhs.overlaps(expect));
    CHECK(t.lhs.lo() >= 0);
  }
  SUBCASE("f and T f give the same numbers") {
    auto powers = slow_growth_powers(c, 2, 4);
    LevelSet g(2, {1}, c);  // T maps level 0 onto level 1 inside the tower
    TensorCloseness a = tensor_closeness(c, f, 2, powers), b = tensor_closeness(c, g, 2, powers);
    CHECK(a.lhs.overlaps(b.lhs));
    CHECK(std::abs(a.lhs.mid_double() - b.lhs.mid_double()) < 1e-9);
    CHECK(a.norm_sq == b.norm_sq);
  }
}

TEST_CASE("anomaly edge cases") {
  TowerChain o(make_schedule("odometer"));
  AnomalyReport full = anomaly_for(o, LevelSet::full(5, o));
  CHECK(full.value.contains(Rational(0)));
  CHECK(full.value.width() < Rational(1, 1000000));
  AnomalyReport odd = staircase_anomaly(o, 6);
  CHECK(std::abs(odd.value.mid_double() - 0.25) < 1e-6);
  TowerChain s(make_schedule("staircase"));
  CHECK(largest_feasible_anomaly_stage(s, 1000) >= 1);
  CHECK(largest_feasible_anomaly_stage(s, 1000) < largest_feasible_anomaly_stage(s, 1000000));
}

TEST_CASE("class alpha trivial cases") {
  TowerChain c(make_schedule("chacon_classical"));
  WindowRule zero;  // F_j = {0}
  ClassAlpha a = class_alpha(c, LevelSet::base(3, c), zero, 6);
  CHECK(a.alpha == doctest::Approx(1.0));
  TowerChain o(make_schedule("odometer"));
  WindowRule wide = WindowRule::from_json({{"lo", {0, 0, 0}}, {"hi", {1, 0, 0}}});
  ClassAlpha b = class_alpha(o, LevelSet::full(3, o), wide, 5);
  CHECK(b.alpha == doctest::Approx(1.0));
}

TEST_CASE("wiener average and Fejér density of a delta") {
  CorrelationSeries s;
  s.mode = Normalization::Centered;
  for (long n = 0; n < 16; ++n) s.points.push_back({BigInt(n), Enclosure(Rational(n == 0 ? 1 : 0)), false, ""});
  CHECK(wiener_average(s, 16) == Enclosure(Rational(1, 16)));
  for (const auto& p : spectral_density(s, 16, 32)) CHECK(p.value == doctest::Approx(1.0));
  CHECK_THROWS_AS(wiener_average(s, 17), Error);
  CHECK_THROWS_AS(spectral_density(s, 20, 8), Error);
}

TEST_CASE("scans") {
  TowerChain c(make_schedule("chacon_classical"));
  LevelSet a = LevelSet::base(4, c);
  auto pts = rigidity_scan(c, a, {BigInt(0), BigInt(15), BigInt(31)});
  CHECK(pts[0].value == Enclosure(Rational(0)));
  CHECK(pts[1].value.lo() > 0);
  EngineOptions par;
  par.parallel = true;
  auto pp = rigidity_scan(c, a, {BigInt(0), BigInt(15), BigInt(31)}, par);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].value == pp[i].value);
  MixingScan m = mixing_scan(c, a, a, {BigInt(1), BigInt(15), BigInt(16)});
  CHECK(m.sup.lo() >= 0);
  bool found = false;
  for (const auto& p : m.points) found = found || p.lag == m.argmax;
  CHECK(found);
}

TEST_CASE("nnls and simplex projection") {
  NnlsResult r = nnls({{1, 0}, {0, 1}, {1, 1}}, {1, -1, 0});
  CHECK(r.converged);
  CHECK(r.x[1] == doctest::Approx(0.0));
  CHECK(r.x[0] == doctest::Approx(0.5));
  auto p = project_capped_simplex({0.7, 0.6, -0.2});
  CHECK(p[2] == doctest::Approx(0.0));
  CHECK(p[0] + p[1] == doctest::Approx(1.0));
  CHECK(p[0] - p[1] == doctest::Approx(0.1));
  auto q = project_capped_simplex({0.2, 0.3});
  CHECK(q[0] == doctest::Approx(0.2));
  CHECK(q[1] == doctest::Approx(0.3));
}
