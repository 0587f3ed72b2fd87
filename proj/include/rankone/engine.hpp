#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rankone/arith.hpp"
#include "rankone/enclosure.hpp"
#include "rankone/tower.hpp"

namespace rankone {

enum class Method {
  Auto,
  RefineDecode,          // refine to the first stage above the lag, decode, recurse on escapes
  MeetInTheMiddle,       // split the footprint into low and high offset sums
  DifferenceRecursion,   // memoised recursion on pair-difference counts across stages
};

std::string method_name(Method m);
Method method_from_string(const std::string& s);

struct EngineOptions {
  Rational tol{1, 1000000000000L};  // absolute width target, in units of mu(E_start)
  std::size_t size_cap = kDefaultSizeCap;
  std::int64_t max_stage = 0;     // 0: no absolute cap, only `extra_stages`
  std::int64_t extra_stages = 80;  // stages allowed beyond the first refinement stage
  std::size_t state_cap = 20'000'000;  // memo entries for the difference recursion
  Method method = Method::Auto;
  bool parallel = false;
};

// All measures below are in units of mu(E_start) = 1 and follow the image
// convention: lag n compares T^n A with B, where T moves every level up by one.

Enclosure shifted_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                               const EngineOptions& opts = {});

// mu(T^{n1} A  ∩  T^{n2} B  ∩  C).
Enclosure triple_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n1, const LevelSet& b,
                              const BigInt& n2, const LevelSet& c, const EngineOptions& opts = {});

// mu(T^n A  △  A).
Enclosure symmetric_difference(const TowerChain& chain, const LevelSet& a, const BigInt& n, const EngineOptions& opts = {});

// Koopman form <T̂^k χ_A, χ_B> = mu(T^{-k} A ∩ B).
Enclosure koopman_form(const TowerChain& chain, const LevelSet& a, const BigInt& k, const LevelSet& b,
                       const EngineOptions& opts = {});

// Row of mu(T^n A ∩ L) over the given stage-J levels L (each a single level).
// Entries share one escape allowance, reported in every enclosure.
std::vector<Enclosure> intersection_row(const TowerChain& chain, const LevelSet& a, const BigInt& n,
                                        const std::vector<Level>& targets, std::int64_t target_stage,
                                        const EngineOptions& opts = {});

// Serial and OpenMP variants of the refine/decode kernel, exposed for testing and benchmarking.
Enclosure shifted_intersection_serial(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                      const EngineOptions& opts);
Enclosure shifted_intersection_parallel(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                        const EngineOptions& opts);

enum class Normalization { Raw, Normalized, Centered };
std::string normalization_name(Normalization n);
Normalization normalization_from_string(const std::string& s);

struct CorrelationPoint {
  BigInt lag;
  Enclosure value;
  bool exhausted = false;  // budget ran out; `value` is the best enclosure reached
  std::string note;
};

struct CorrelationSeries {
  std::string family;
  Normalization mode = Normalization::Raw;
  Method method = Method::Auto;
  std::int64_t stage_a = 0;
  std::int64_t stage_b = 0;
  std::vector<CorrelationPoint> points;

  const CorrelationPoint* find(const BigInt& lag) const;
  bool any_exhausted() const;
  Rational max_width() const;
  nlohmann::json to_json(int digits = 12) const;
};

// Enclosure of mu(X), taken `depth` stages past the start. Throws UnboundedMeasure.
Enclosure space_measure(const TowerChain& chain, std::int64_t depth = 32);

// Value at lag n: mu(T^n A ∩ B) (raw), divided by mu(X) (normalized), or minus
// nu(A) nu(B) after normalising (centered). Budget exhaustion on a lag is
// recorded on that point instead of aborting the series.
CorrelationSeries correlation_series(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                     const std::vector<BigInt>& lags, Normalization mode, const EngineOptions& opts = {});

// Meet-in-the-middle evaluation of raw correlations of stage-J level sets at very deep lags.
CorrelationSeries base_correlation_fast(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                        const std::vector<BigInt>& lags, const EngineOptions& opts = {});

// Memoised difference recursion; shares its memo across all lags of one call.
CorrelationSeries deep_correlation(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                   const std::vector<BigInt>& lags, const EngineOptions& opts = {});

// Single-lag entry points of the three methods (raw, image convention).
Enclosure refine_decode_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                     const EngineOptions& opts);
Enclosure mitm_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                            const EngineOptions& opts);
Enclosure recursion_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                 const EngineOptions& opts);

}  // namespace rankone
