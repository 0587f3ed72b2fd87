#pragma once

#include <utility>

#include "rankone/engine.hpp"

namespace rankone::internal {

// Brings two level sets to their common (larger) stage.
std::pair<LevelSet, LevelSet> align(const TowerChain& chain, const LevelSet& a, const LevelSet& b, std::size_t cap);

// Predicted size of the refine/decode footprint for lag n.
BigInt refine_footprint(const TowerChain& chain, const LevelSet& a, const BigInt& n);

}  // namespace rankone::internal
