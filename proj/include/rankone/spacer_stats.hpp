#pragma once

#include <cstdint>
#include <map>

#include "json.hpp"
#include "rankone/arith.hpp"
#include "rankone/tower.hpp"

namespace rankone {

// S_j(i, p) = s_j(i) + ... + s_j(i+p-1), columns 1-indexed. Throws WindowOutOfRange.
BigInt spacer_sum(const TowerChain& chain, std::int64_t j, std::int64_t i, std::int64_t p);

/// Value counts of S_j(i, p) over the r_j - p windows i = 1 .. r_j - p.
struct SumHistogram {
  std::int64_t stage = 0;
  std::int64_t window = 0;
  std::map<BigInt, std::uint64_t> counts;
  std::uint64_t total = 0;

  SumHistogram shifted(const BigInt& by) const;  // keys - by
  nlohmann::json to_json() const;
};

// Requires 0 < p < r_j.
SumHistogram spacer_sum_distribution(const TowerChain& chain, std::int64_t j, std::int64_t p);

// Counts of S_j(i, p) - S_j(i', p) over ordered pairs of windows, (r_j - p)^2 in total.
std::map<BigInt, std::uint64_t> difference_histogram(const SumHistogram& h);

// Total-variation distance between the empirical law of `centred` and the
// triangular law w(s) = (H - |s|) / H^2 on |s| < H.
double triangular_tv(const SumHistogram& centred, std::int64_t H);

struct TriangularReport {
  std::int64_t stage = 0;
  std::int64_t window = 0;
  std::int64_t H = 0;
  std::uint64_t samples = 0;
  double tv = 0;
  bool telescoping_holds = false;  // S - pH = a(i) - a(i+p) for every window
  nlohmann::json to_json() const;
};

// Ornstein schedules only: histogram of S_j(i, p) - p H_j against the triangular law.
TriangularReport ornstein_triangular(const TowerChain& chain, std::int64_t j, std::int64_t p);

}  // namespace rankone
