#include <random>

#include "doctest.h"
#include "rankone/error.hpp"
#include "oracle/interval_exchange.hpp"
#include "oracle/random_instances.hpp"
#include "rankone/engine.hpp"

using namespace rankone;

namespace {

// Engine enclosure with refinement stopped at `depth`: a partial enclosure if
// the budget runs out, else the value it resolved earlier.
struct Capped {
  Enclosure value;
  bool partial;
};

Capped capped(const TowerChain& c, const LevelSet& a, std::int64_t n, const LevelSet& b, Method m, std::int64_t depth) {
  EngineOptions o;
  o.method = m;
  o.max_stage = depth;
  o.tol = 0;
  try {
    return {shifted_intersection(c, a, BigInt(static_cast<long>(n)), b, o), false};
  } catch (const BudgetExceeded& e) {
    REQUIRE(e.partial().has_value());
    return {*e.partial(), true};
  }
}

}  // namespace

TEST_CASE("engine methods agree with the interval-exchange model at fixed depth") {
  std::mt19937_64 gen(424242);
  int compared = 0;
  for (int s = 0; s < 40; ++s) {
    auto sched = oracle::random_schedule(gen, 7, 4, 5);
    TowerChain chain(make_schedule(sched.spec));
    oracle::IntervalExchange ix(1, 1, sched.stages, 200000);
    const std::int64_t D = ix.deepest_stage();
    if (D < 3) continue;
    for (int q = 0; q < 15; ++q) {
      auto qu = oracle::random_query(gen, ix, D - 1);
      LevelSet a = oracle::to_set(chain, qu.stage_a, qu.a), b = oracle::to_set(chain, qu.stage_b, qu.b);
      auto [lo, hi] = ix.intersection(qu.stage_a, qu.a, qu.n, qu.stage_b, qu.b);
      auto [mlo, mhi] = ix.intersection(qu.stage_b, qu.b, -qu.n, qu.stage_a, qu.a);
      CAPTURE(s);
      CAPTURE(q);
      CAPTURE(qu.n);
      for (Method m : {Method::RefineDecode, Method::DifferenceRecursion, Method::MeetInTheMiddle}) {
        CAPTURE(method_name(m));
        Capped e = capped(chain, a, qu.n, b, m, D);
        // For n < 0 the meet-in-the-middle kernel runs on (B, -n, A), so B's copies are the unresolved ones.
        bool swapped = m == Method::MeetInTheMiddle && qu.n < 0;
        Rational olo = swapped ? mlo : lo, ohi = swapped ? mhi : hi;
        if (e.partial) {
          CHECK(e.value.lo() == olo);
          CHECK(e.value.hi() == ohi);
        } else {
          CHECK(e.value.is_exact());
          CHECK(olo <= e.value.lo());
          CHECK(e.value.hi() <= ohi);
        }
        ++compared;
      }
      // Unlimited depth: the enclosure must contain the resolved part of the model.
      Enclosure full = shifted_intersection(chain, a, BigInt(static_cast<long>(qu.n)), b);
      CHECK(full.lo() <= hi);
      CHECK(lo <= full.hi());
      if (lo == hi) CHECK(full.contains(lo));
    }
  }
  CHECK(compared > 300);
}

TEST_CASE("triple intersections agree with the model") {
  std::mt19937_64 gen(777);
  for (int s = 0; s < 25; ++s) {
    auto sched = oracle::random_schedule(gen, 6, 3, 4);
    TowerChain chain(make_schedule(sched.spec));
    oracle::IntervalExchange ix(1, 1, sched.stages, 100000);
    const std::int64_t D = ix.deepest_stage();
    if (D < 3) continue;
    for (int q = 0; q < 10; ++q) {
      std::int64_t J = std::uniform_int_distribution<std::int64_t>(1, D - 2)(gen);
      auto a = oracle::random_levels(gen, ix.height(J)), b = oracle::random_levels(gen, ix.height(J)),
           c = oracle::random_levels(gen, ix.height(J));
      std::int64_t reach = ix.height(J + 1);
      std::uniform_int_distribution<std::int64_t> lag(-reach, reach);
      std::int64_t n1 = lag(gen), n2 = lag(gen);
      auto [lo, hi] = ix.triple(J, a, n1, b, n2, c);
      Enclosure e = triple_intersection(chain, oracle::to_set(chain, J, a), BigInt(static_cast<long>(n1)), oracle::to_set(chain, J, b),
                                        BigInt(static_cast<long>(n2)), oracle::to_set(chain, J, c));
      CAPTURE(s);
      CAPTURE(n1);
      CAPTURE(n2);
      CHECK(e.lo() <= hi);
      CHECK(lo <= e.hi());
      if (lo == hi) CHECK(e.contains(lo));
    }
  }
}

TEST_CASE("deep and fast correlation series contain the model values") {
  std::mt19937_64 gen(99);
  for (int s = 0; s < 20; ++s) {
    auto sched = oracle::random_schedule(gen, 7, 4, 3);
    TowerChain chain(make_schedule(sched.spec));
    oracle::IntervalExchange ix(1, 1, sched.stages, 200000);
    const std::int64_t D = ix.deepest_stage();
    if (D < 3) continue;
    std::int64_t J = 2;
    auto a = oracle::random_levels(gen, ix.height(J)), b = oracle::random_levels(gen, ix.height(J));
    std::vector<BigInt> lags;
    std::vector<std::int64_t> raw;
    for (int k = 0; k < 12; ++k) {
      std::int64_t n = std::uniform_int_distribution<std::int64_t>(-ix.height(D) / 4, ix.height(D) / 4)(gen);
      raw.push_back(n);
      lags.push_back(BigInt(static_cast<long>(n)));
    }
    LevelSet sa = oracle::to_set(chain, J, a), sb = oracle::to_set(chain, J, b);
    // The fast path never resolves its escapes, so a width target it can reach.
    EngineOptions o;
    o.tol = Rational(1, 1000000);
    auto deep = deep_correlation(chain, sa, sb, lags);
    auto fast = base_correlation_fast(chain, sa, sb, lags, o);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      auto [lo, hi] = ix.intersection(J, a, raw[k], b);
      for (const auto* series : {&deep, &fast}) {
        const Enclosure& e = series->points[k].value;
        CHECK(e.lo() <= hi);
        CHECK(lo <= e.hi());
        if (lo == hi) CHECK(e.contains(lo));
      }
    }
  }
}
