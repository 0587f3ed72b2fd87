#include "doctest.h"
#include "rankone/error.hpp"
#include "rankone/families.hpp"
#include "rankone/tower.hpp"

using namespace rankone;

TEST_CASE("chacon heights follow h_{j+1} = 2 h_j + 1") {
  TowerChain c(make_schedule("chacon_classical"));
  for (std::int64_t j = 1; j <= 30; ++j) CHECK(c.height(j) == ipow(BigInt(2), static_cast<unsigned long>(j)) - 1);
  CHECK(c.level_measure(5) == Rational(1, 16));
}

TEST_CASE("column offsets stack copies and spacers") {
  TowerChain c(make_schedule("chacon_231"));
  const Tower& t = c.tower(1);
  REQUIRE(t.offsets.size() == 3);
  // h = 1, spacers (2, 3, 1): copies at 0, 1 + 2, 3 + 1 + 3.
  CHECK(t.offsets[0] == BigInt(0));
  CHECK(t.offsets[1] == BigInt(3));
  CHECK(t.offsets[2] == BigInt(7));
  CHECK(t.next_height == BigInt(9));
  CHECK(c.height(2) == BigInt(9));
}

TEST_CASE("total measure encloses the limit") {
  TowerChain c(make_schedule("chacon_classical"));
  TotalMeasure m = c.total_measure(40);
  REQUIRE(m.bounded());
  CHECK(m.lower <= Rational(2));
  CHECK(*m.upper >= Rational(2));
  CHECK((*m.upper - m.lower) < Rational(1, 1000000));

  TowerChain s(make_schedule("factorial"));
  CHECK_FALSE(s.total_measure(10).bounded());
  CHECK_THROWS_AS(s.total_measure(10).enclosure(), Error);
}

TEST_CASE("first_stage_above") {
  TowerChain c(make_schedule("chacon_classical"));
  CHECK(c.first_stage_above(BigInt(0), 1) == 1);
  CHECK(c.first_stage_above(BigInt(7), 1) == 4);   // h_3 = 7, h_4 = 15
  CHECK(c.first_stage_above(BigInt(6), 1) == 3);
  CHECK(c.first_stage_above(BigInt(6), 5) == 5);
}

TEST_CASE("refine_set and decode_level are inverse views") {
  TowerChain c(make_schedule("chacon_classical"));
  LevelSet a(2, {0, 2}, c);
  LevelSet r = refine_set(c, a, 4);
  CHECK(r.size() == 8);
  CHECK(r.measure() == a.measure());
  for (auto l : r.levels()) {
    LevelProvenance p = decode_level(c, 4, to_big(l), 2);
    CHECK(p.kind == LevelProvenance::Kind::Level);
    CHECK(a.contains(to_level(p.level)));
  }
  // Stage 2: copies of level 0 at 0 and 1, the spacer at 2.
  LevelProvenance sp = decode_level(c, 2, BigInt(2), 1);
  CHECK(sp.kind == LevelProvenance::Kind::Spacer);
  CHECK(sp.stage == 1);
  CHECK(sp.column == 2);
  CHECK(sp.depth == BigInt(0));
  CHECK_THROWS_AS(refine_set(c, LevelSet::full(10, c), 30, 1000), Error);
  CHECK_THROWS_AS(decode_level(c, 3, BigInt(7), 1), Error);
}

TEST_CASE("level sets from JSON") {
  TowerChain c(make_schedule("chacon_classical"));
  CHECK(LevelSet::from_json({{"stage", 3}, {"kind", "base"}}, c) == LevelSet(3, {0}, c));
  CHECK(LevelSet::from_json({{"stage", 3}, {"kind", "odd"}}, c) == LevelSet(3, {1, 3, 5}, c));
  CHECK(LevelSet::from_json({{"stage", 3}, {"kind", "full"}}, c).size() == 7);
  CHECK(LevelSet::from_json({{"stage", 3}, {"range", {2, 4}}}, c) == LevelSet(3, {2, 3, 4}, c));
  LevelSet s(3, {5, 1, 5}, c);
  CHECK(s.levels() == std::vector<Level>{1, 5});
  CHECK(LevelSet::from_json(s.to_json(), c) == s);
  CHECK_THROWS_AS(LevelSet(3, {7}, c), Error);
}

TEST_CASE("tower chain is safe for concurrent readers") {
  TowerChain c(make_schedule("katok"));
  std::vector<BigInt> seen(64);
#pragma omp parallel for
  for (int i = 0; i < 64; ++i) seen[static_cast<std::size_t>(i)] = c.height(1 + i % 12);
  for (int i = 0; i < 64; ++i) CHECK(seen[static_cast<std::size_t>(i)] == c.height(1 + i % 12));
}
