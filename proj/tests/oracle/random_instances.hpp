#pragma once

// Random small schedules and queries for comparing the engine with the
// interval-exchange model.

#include <cstdint>
#include <random>
#include <vector>

#include "oracle/interval_exchange.hpp"
#include "rankone/families.hpp"
#include "rankone/tower.hpp"

namespace oracle {

struct RandomSchedule {
  rankone::FamilySpec spec;
  std::vector<rankone::StageVector> stages;  // stage 1, 2, ...
};

// Up to `max_stages` stage vectors with r <= max_r and spacers <= max_s.
inline RandomSchedule random_schedule(std::mt19937_64& gen, int max_stages = 8, int max_r = 4, int max_s = 5) {
  std::uniform_int_distribution<int> nst(2, max_stages), rr(2, max_r), ss(0, max_s);
  rankone::family::CustomFixed cf;
  cf.vectors.clear();
  RandomSchedule out;
  int n = nst(gen);
  for (int k = 0; k < n; ++k) {
    rankone::StageVector v;
    v.r = rr(gen);
    for (int i = 0; i < v.r; ++i) v.spacers.push_back(rankone::BigInt(ss(gen)));
    cf.vectors.push_back(v.spacers);
    out.stages.push_back(v);
  }
  out.spec = cf;
  return out;
}

struct Query {
  std::int64_t stage_a, stage_b;
  std::vector<std::int64_t> a, b;
  std::int64_t n;
};

inline std::vector<std::int64_t> random_levels(std::mt19937_64& gen, std::int64_t height) {
  std::vector<std::int64_t> out;
  std::bernoulli_distribution keep(0.4);
  for (std::int64_t l = 0; l < height; ++l)
    if (keep(gen)) out.push_back(l);
  if (out.empty()) out.push_back(std::uniform_int_distribution<std::int64_t>(0, height - 1)(gen));
  return out;
}

// A and B on stages at most `max_set_stage`, lag within a quarter of the deepest height.
inline Query random_query(std::mt19937_64& gen, const IntervalExchange& ix, std::int64_t max_set_stage) {
  std::int64_t top = std::min(max_set_stage, ix.deepest_stage());
  std::uniform_int_distribution<std::int64_t> st(1, top);
  Query q;
  q.stage_a = st(gen);
  q.stage_b = st(gen);
  q.a = random_levels(gen, ix.height(q.stage_a));
  q.b = random_levels(gen, ix.height(q.stage_b));
  std::int64_t reach = std::max<std::int64_t>(1, ix.height(ix.deepest_stage()) / 4);
  q.n = std::uniform_int_distribution<std::int64_t>(-reach, reach)(gen);
  return q;
}

inline rankone::LevelSet to_set(const rankone::TowerChain& chain, std::int64_t stage, const std::vector<std::int64_t>& levels) {
  std::vector<rankone::Level> v(levels.begin(), levels.end());
  return rankone::LevelSet(stage, std::move(v), chain);
}

}  // namespace oracle
