#include <numeric>

#include "doctest.h"
#include "rankone/error.hpp"
#include "rankone/families.hpp"
#include "rankone/finite_field.hpp"
#include "rankone/tower.hpp"

using namespace rankone;

namespace {

// h_{j+1} = h_j r_j + sum s_j(i), recomputed from the stage vectors alone.
void check_recurrence(const std::string& name, std::int64_t stages) {
  TowerChain c(make_schedule(name));
  BigInt h = c.schedule().start_height();
  for (std::int64_t j = c.start_stage(); j < c.start_stage() + stages; ++j) {
    CHECK_MESSAGE(c.height(j) == h, name << " stage " << j);
    StageVector v = c.schedule().stage(j, h);
    h = h * v.r + v.spacer_total();
  }
}

}  // namespace

TEST_CASE("height recurrence for a sample of families") {
  for (const char* name : {"odometer", "chacon_modified", "del_junco_rudolph", "katok", "staircase", "self_similar"})
    check_recurrence(name, 12);
}

TEST_CASE("fixed families produce their stage vectors") {
  auto vec = [](const std::string& name, std::int64_t j) {
    TowerChain c(make_schedule(name));
    return c.tower(j).vector;
  };
  CHECK(vec("chacon_classical", 3).spacers == std::vector<BigInt>{0, 1});
  CHECK(vec("chacon_modified", 2).spacers == std::vector<BigInt>{0, 1, 0});
  CHECK(vec("chacon_231", 4).spacers == std::vector<BigInt>{2, 3, 1});
  CHECK(vec("odometer", 5).spacers == std::vector<BigInt>{0, 0});
}

TEST_CASE("del junco rudolph and katok spacer positions") {
  TowerChain d(make_schedule("del_junco_rudolph"));
  CHECK(d.tower(1).vector.spacers == std::vector<BigInt>{0, 1, 0});
  TowerChain k(make_schedule("katok"));
  CHECK(k.tower(1).vector.spacers == std::vector<BigInt>{0, 0, 1, 1});
}

TEST_CASE("staircase uses s_j(i) = i") {
  TowerChain c(make_schedule("staircase"));
  const StageVector& v = c.tower(1).vector;
  CHECK(v.r == 3);
  for (std::int64_t i = 1; i <= v.r; ++i) CHECK(v.s(i) == BigInt(i));
}

TEST_CASE("factorial heights are factorials") {
  TowerChain c(make_schedule("factorial"));
  for (std::int64_t j = 2; j <= 15; ++j) CHECK(c.height(j) == factorial(static_cast<unsigned long>(j)));
}

TEST_CASE("galois primitive spacers use a primitive root") {
  TowerChain c(make_schedule("galois_primitive"));
  const StageVector& v = c.tower(2).vector;
  REQUIRE(is_prime(static_cast<std::uint64_t>(v.r)));
  std::uint64_t p = static_cast<std::uint64_t>(v.r), q = primitive_root(p);
  for (std::int64_t i = 1; i <= v.r; ++i) {
    std::int64_t a = static_cast<std::int64_t>(powmod(q, static_cast<std::uint64_t>(i), p));
    std::int64_t b = static_cast<std::int64_t>(powmod(q, static_cast<std::uint64_t>(i + 1), p));
    CHECK(v.s(i) == BigInt(v.r + a - b));
  }
}

TEST_CASE("sidon spacers grow geometrically from c h_j") {
  TowerChain c(make_schedule("sidon"));
  const Tower& t = c.tower(2);
  BigInt s = ceil(Rational(4 * t.height));
  for (std::int64_t i = 1; i <= t.vector.r; ++i) {
    CHECK(t.vector.s(i) == s);
    s = ceil(Rational(4 * s));
  }
}

TEST_CASE("prime spacers and binomial columns") {
  TowerChain p(make_schedule("prime_spacers"));
  CHECK(p.tower(3).vector.spacers == std::vector<BigInt>{0, 5, 0});
  TowerChain b(make_schedule("binomial"));
  const StageVector& v = b.tower(3).vector;
  CHECK(v.r == 4);
  CHECK(v.spacers == std::vector<BigInt>{1, 3, 3, 1});
}

TEST_CASE("custom fixed vectors cycle") {
  FamilySpec spec;
  from_json(nlohmann::json{{"family", "custom_fixed"}, {"vectors", {{0, 1}, {2, 0, 1}}}}, spec);
  TowerChain c(make_schedule(spec));
  CHECK(c.tower(1).vector.spacers == std::vector<BigInt>{0, 1});
  CHECK(c.tower(2).vector.spacers == std::vector<BigInt>{2, 0, 1});
  CHECK(c.tower(3).vector.spacers == std::vector<BigInt>{0, 1});
}
