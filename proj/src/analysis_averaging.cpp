#include <algorithm>

#include "rankone/analysis.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

nlohmann::json DeviationReport::to_json(int digits) const {
  return {{"stage", stage},
          {"window", window},
          {"normalized", normalized},
          {"lo", to_decimal(value.lo(), digits)},
          {"hi", to_decimal(value.hi(), digits)},
          {"lo_exact", to_string(value.lo())},
          {"hi_exact", to_string(value.hi())},
          {"distinct_differences", distinct_differences},
          {"max_multiplicity", max_multiplicity}};
}

DeviationReport averaging_deviation(const TowerChain& chain, std::int64_t j, std::int64_t p, const LevelSet& f,
                                    const EngineOptions& opts) {
  SumHistogram sums = spacer_sum_distribution(chain, j, p);
  auto diffs = difference_histogram(sums);

  DeviationReport rep;
  rep.stage = j;
  rep.window = p;
  rep.normalized = chain.schedule().measure_class() == MeasureClass::Finite;
  rep.distinct_differences = diffs.size();

  // gamma is even in d for an autocorrelation, so fold d and -d together.
  std::map<BigInt, std::uint64_t> folded;
  for (const auto& [d, c] : diffs) {
    folded[BigInt(abs(d))] += c;
    if (d != 0) rep.max_multiplicity = std::max(rep.max_multiplicity, c);
  }
  Enclosure acc(Rational(0));
  for (const auto& [d, c] : folded) {
    Enclosure g = d == 0 ? Enclosure(f.measure()) : shifted_intersection(chain, f, d, f, opts);
    acc += g * Rational(BigInt(std::to_string(c)));
  }
  Rational pairs = Rational(BigInt(std::to_string(sums.total))) * Rational(BigInt(std::to_string(sums.total)));
  acc = acc / pairs;
  if (rep.normalized) {
    Enclosure mx = space_measure(chain);
    Enclosure nu = Enclosure(f.measure()) / mx;
    acc = acc / mx - nu.square();
  }
  // The quantity is a squared norm; clip the enclosure at zero.
  rep.value = Enclosure(std::max(acc.lo(), Rational(0)), std::max(acc.hi(), Rational(0)));
  return rep;
}

}  // namespace rankone
