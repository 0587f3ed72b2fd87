#include "rankone/spacer_stats.hpp"

#include <cmath>
#include <variant>

#include "rankone/error.hpp"
#include "rankone/families.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

BigInt spacer_sum(const TowerChain& chain, std::int64_t j, std::int64_t i, std::int64_t p) {
  const StageVector& v = chain.tower(j).vector;
  require(p >= 1, ErrorCode::WindowOutOfRange, "window length must be positive");
  require(i >= 1 && i + p - 1 <= v.r, ErrorCode::WindowOutOfRange,
          "window [" + std::to_string(i) + ", " + std::to_string(i + p - 1) + "] outside 1.." + std::to_string(v.r));
  BigInt s = 0;
  for (std::int64_t u = i; u < i + p; ++u) s += v.s(u);
  return s;
}

SumHistogram SumHistogram::shifted(const BigInt& by) const {
  SumHistogram out = *this;
  out.counts.clear();
  for (const auto& [k, c] : counts) out.counts[k - by] += c;
  return out;
}

nlohmann::json SumHistogram::to_json() const {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& [k, c] : counts) bins.push_back({{"value", big_to_json(k)}, {"count", c}});
  return {{"stage", stage}, {"window", window}, {"total", total}, {"bins", bins}};
}

SumHistogram spacer_sum_distribution(const TowerChain& chain, std::int64_t j, std::int64_t p) {
  const StageVector& v = chain.tower(j).vector;
  require(p >= 1 && p < v.r, ErrorCode::WindowOutOfRange,
          "window length " + std::to_string(p) + " needs 0 < p < r = " + std::to_string(v.r));
  SumHistogram h;
  h.stage = j;
  h.window = p;
  // Sliding window sum.
  BigInt s = 0;
  for (std::int64_t u = 1; u <= p; ++u) s += v.s(u);
  for (std::int64_t i = 1; i <= v.r - p; ++i) {
    h.counts[s] += 1;
    ++h.total;
    if (i < v.r - p) s += v.s(i + p) - v.s(i);
  }
  return h;
}

std::map<BigInt, std::uint64_t> difference_histogram(const SumHistogram& h) {
  std::map<BigInt, std::uint64_t> d;
  for (const auto& [x, cx] : h.counts)
    for (const auto& [y, cy] : h.counts) d[BigInt(x - y)] += cx * cy;
  return d;
}

double triangular_tv(const SumHistogram& centred, std::int64_t H) {
  require(H >= 1, ErrorCode::InvalidParam, "H must be positive");
  require(centred.total > 0, ErrorCode::InvalidParam, "empty histogram");
  const double n = static_cast<double>(centred.total);
  const double h2 = static_cast<double>(H) * static_cast<double>(H);
  double tv = 0;
  double outside = 0;
  for (std::int64_t s = -(H - 1); s <= H - 1; ++s) {
    auto it = centred.counts.find(BigInt(static_cast<long>(s)));
    double emp = it == centred.counts.end() ? 0 : static_cast<double>(it->second) / n;
    tv += std::abs(emp - static_cast<double>(H - std::abs(s)) / h2);
  }
  for (const auto& [k, c] : centred.counts)
    if (abs(k) >= H) outside += static_cast<double>(c) / n;
  return 0.5 * (tv + outside);
}

nlohmann::json TriangularReport::to_json() const {
  return {{"stage", stage}, {"window", window}, {"H", H}, {"samples", samples}, {"tv", tv}, {"telescoping_holds", telescoping_holds}};
}

TriangularReport ornstein_triangular(const TowerChain& chain, std::int64_t j, std::int64_t p) {
  const auto* spec = std::get_if<family::Ornstein>(&chain.schedule().spec());
  require(spec != nullptr, ErrorCode::InvalidParam, "triangular law check needs an Ornstein schedule");
  SumHistogram h = spacer_sum_distribution(chain, j, p);
  BigInt H = spec->H.at(j);
  require(fits_level(H) && H < BigInt(1L << 30), ErrorCode::InvalidParam, "H_j too large for the histogram check");
  TriangularReport rep;
  rep.stage = j;
  rep.window = p;
  rep.H = H.get_si();
  rep.samples = h.total;
  rep.tv = triangular_tv(h.shifted(BigInt(H * p)), rep.H);

  auto a = ornstein_draws(*spec, j);
  const StageVector& v = chain.tower(j).vector;
  bool ok = true;
  BigInt s = 0;
  for (std::int64_t u = 1; u <= p; ++u) s += v.s(u);
  for (std::int64_t i = 1; i <= v.r - p && ok; ++i) {
    BigInt expect = BigInt(H * p) + BigInt(static_cast<unsigned long>(a[static_cast<std::size_t>(i - 1)])) -
                    BigInt(static_cast<unsigned long>(a[static_cast<std::size_t>(i - 1 + p)]));
    ok = s == expect;
    if (i < v.r - p) s += v.s(i + p) - v.s(i);
  }
  rep.telescoping_holds = ok;
  return rep;
}

}  // namespace rankone
