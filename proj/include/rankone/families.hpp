#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rankone/family_spec.hpp"
#include "rankone/schedule.hpp"

namespace rankone {

SpacerSchedule make_schedule(const FamilySpec& spec);
SpacerSchedule make_schedule(const std::string& family_name);

// Deterministic generator for one (seed, stage) pair; stages draw independently.
std::mt19937_64 stage_rng(std::uint64_t seed, std::int64_t stage);
// Uniform integer in [0, bound) without modulo bias; portable across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound);

// The r_j + 1 uniform draws a_j(1..r_j+1) on {0..H_j-1} behind an Ornstein stage.
std::vector<std::uint64_t> ornstein_draws(const family::Ornstein& spec, std::int64_t stage);

// First stage at which the slow-growth schedule uses cutting parameter r.
std::int64_t slow_growth_block_start(const family::SlowGrowth& spec, std::int64_t r);
std::int64_t slow_growth_r(const family::SlowGrowth& spec, std::int64_t stage);

}  // namespace rankone
