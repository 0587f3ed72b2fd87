#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rankone/engine.hpp"
#include "rankone/spacer_stats.hpp"

namespace rankone {

// ---------------------------------------------------------------- weak limits

/// Fit of one power T̂^{k} against sum_k a_k T̂^k + theta·Θ on the test family.
struct PowerFit {
  BigInt power;
  std::vector<double> coefficients;  // a_k for k = k_min .. k_max
  double theta = 0;                  // weight on the projection onto constants
  double unassigned = 0;             // 1 - sum a_k - theta
  double residual = 0;               // worst |target - model| over the test pairs
  double ls_residual = 0;            // ||target - model||_2 of the unprojected NNLS solution
  double max_width = 0;              // widest input enclosure
};

struct LimitFit {
  std::string family;
  std::int64_t test_stage = 0;
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
  bool normalized = true;  // false on infinite-measure spaces (raw forms, no Θ column)
  std::vector<PowerFit> fits;  // one per supplied power, in input order

  // Fit at the power of largest magnitude.
  const PowerFit& headline() const;
  nlohmann::json to_json() const;
};

// Bilinear forms <T̂^k χ_a, χ_b> = mu(T^{-k} L_a ∩ L_b) over all pairs of test-stage levels.
LimitFit weak_limit_fit(const TowerChain& chain, const std::vector<BigInt>& powers, std::int64_t k_min, std::int64_t k_max,
                        std::int64_t test_stage = 4, const EngineOptions& opts = {});

// ------------------------------------------------------------ averaging operators

struct DeviationReport {
  std::int64_t stage = 0;
  std::int64_t window = 0;
  Enclosure value;          // ||Q_{j,p} f - Θ f||^2 (normalized), or ||Q_{j,p} f||^2 (raw)
  bool normalized = true;
  std::uint64_t distinct_differences = 0;
  std::uint64_t max_multiplicity = 0;  // largest count over nonzero differences
  nlohmann::json to_json(int digits = 12) const;
};

DeviationReport averaging_deviation(const TowerChain& chain, std::int64_t j, std::int64_t p, const LevelSet& f,
                                    const EngineOptions& opts = {});

// ------------------------------------------------------------ statistical lemma

// D(f, m) = sum_{s=1..m} |P(f,m,s) - P(f,m,s-1)|, P(f,m,s) = #{x in Z_r : f(x) + ... + f(x+m-1) = s}.
std::uint64_t statistical_D(const std::vector<std::uint8_t>& f, std::int64_t m);

struct StatLemmaSample {
  std::int64_t r = 0;
  std::int64_t L = 0;
  double eps = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t successes = 0;
  double fraction = 0;
  // Per trial: first m violating D(f,m) < eps r (0 if none) and D/r there.
  std::vector<std::int64_t> first_violation;
  std::vector<double> violation_ratio;
  nlohmann::json to_json() const;
};

// Random f for trial t, drawn from stage_rng(seed, t).
std::vector<std::uint8_t> stat_lemma_vector(std::int64_t r, std::uint64_t seed, std::int64_t trial);
StatLemmaSample stat_lemma_mc_serial(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed);
StatLemmaSample stat_lemma_mc_parallel(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed);
StatLemmaSample stat_lemma_mc(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed,
                              bool parallel = true);

// ------------------------------------------------------------ tensor closeness

struct TensorCloseness {
  std::int64_t r = 0;
  std::int64_t M = 0;
  std::vector<BigInt> powers;  // p(m, r), m = 1..M
  Enclosure lhs;               // ||P F - Q_r F||^2
  Enclosure norm_sq;           // ||F||^2 = gamma(0)^2
  Enclosure qq;                // <Q_r F, Q_r F>
  Enclosure eps_hat;           // max deviation of the cross terms from <Q_r F, Q_r F>
  Enclosure rhs;               // ||F||^2 / M + eps_hat
  bool holds = false;          // certified: lhs.hi <= rhs.lo
  bool exhausted = false;
  nlohmann::json to_json(int digits = 12) const;
};

// F = f ⊗ f; all tensor inner products reduce to gamma_f(a - b)^2 with gamma_f the
// normalized scalar correlation. Q_r = (1/r) sum_{i<r} T̂^i, P = (1/M) sum_m T̂^{p(m)}.
TensorCloseness tensor_closeness(const TowerChain& chain, const LevelSet& f, std::int64_t r, const std::vector<BigInt>& powers,
                                 const EngineOptions& opts = {});

// Desk rule p(m, r) = h_{j_r + m}, m = 1..M, with j_r the first stage at which r_j = r.
std::vector<BigInt> slow_growth_powers(const TowerChain& chain, std::int64_t r, std::int64_t M);

// ------------------------------------------------------------ staircase anomaly

struct AnomalyReport {
  std::int64_t stage = 0;
  BigInt lag;
  Enclosure value;  // nu(T^{2h_j} A ∩ A) - nu(A)^2, A = odd levels of stage j
  Enclosure nu_a;
  bool exhausted = false;  // budget ran out; `value` is the enclosure reached
  nlohmann::json to_json(int digits = 12) const;
};

AnomalyReport staircase_anomaly(const TowerChain& chain, std::int64_t j, const EngineOptions& opts = {});
// Same quantity for an arbitrary stage-j set.
AnomalyReport anomaly_for(const TowerChain& chain, const LevelSet& a, const EngineOptions& opts = {});
// Largest j whose odd-level set has at most `size_cap` levels.
std::int64_t largest_feasible_anomaly_stage(const TowerChain& chain, std::size_t size_cap, std::int64_t max_stage = 64);

// ------------------------------------------------------------ asymmetry

struct AsymmetryReport {
  std::int64_t stage = 0;
  BigInt h;
  Enclosure one_three;  // mu(A ∩ T^{-h}A ∩ T^{-3h}A)
  Enclosure two_three;  // mu(A ∩ T^{-2h}A ∩ T^{-3h}A)
  Rational mu_a;
  nlohmann::json to_json(int digits = 12) const;
};

// Requires A.stage() < j.
AsymmetryReport asymmetry_test(const TowerChain& chain, const LevelSet& a, std::int64_t j, const EngineOptions& opts = {});

// ------------------------------------------------------------ class alpha

// F_j = {n : lo(j) <= n <= hi(j)}, bound(j) = c0 h_j + c1 h_{j+1} + c2.
struct WindowRule {
  std::array<BigInt, 3> lo{BigInt(0), BigInt(0), BigInt(0)};
  std::array<BigInt, 3> hi{BigInt(0), BigInt(0), BigInt(0)};
  std::pair<BigInt, BigInt> at(const TowerChain& chain, std::int64_t j) const;
  static WindowRule from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct AlphaStage {
  std::int64_t stage = 0;
  BigInt lo, hi;
  Enclosure conditional;  // mu(∪_{n in F_j} T^n A ∩ A) / mu(A)
  std::int64_t resolved_at = 0;
};

struct ClassAlpha {
  std::vector<AlphaStage> stages;
  double alpha = 0;   // running max of the midpoints
  double width = 0;   // width of the enclosure achieving it
  nlohmann::json to_json(int digits = 12) const;
};

ClassAlpha class_alpha(const TowerChain& chain, const LevelSet& a, const WindowRule& rule, std::int64_t j_max,
                       const EngineOptions& opts = {});

// ------------------------------------------------------------ spectral diagnostics

// (1/N) sum_{n<N} |gamma(n)|^2. Throws MissingLags.
Enclosure wiener_average(const CorrelationSeries& series, std::int64_t N);

struct DensityPoint {
  double angle = 0;
  double value = 0;
  double radius = 0;  // bound on the effect of enclosure widths
};

// Fejér sum gamma(0) + 2 sum_{0<n<N} (1 - n/N) gamma(n) cos(n θ) at θ_k = 2πk/grid.
// Uses gamma(-n) = gamma(n), valid for autocorrelations. Throws MissingLags.
std::vector<DensityPoint> spectral_density(const CorrelationSeries& series, std::int64_t N, std::int64_t grid);

// ------------------------------------------------------------ scans

struct ScanPoint {
  BigInt lag;
  Enclosure value;
  bool exhausted = false;
};

std::vector<ScanPoint> rigidity_scan(const TowerChain& chain, const LevelSet& a, const std::vector<BigInt>& lags,
                                     const EngineOptions& opts = {});

struct MixingScan {
  std::vector<ScanPoint> points;  // |mu(T^n A ∩ B) - mu(A) mu(B) / mu(X)| per lag
  BigInt argmax;
  Enclosure sup;
  bool any_exhausted = false;
  nlohmann::json to_json(int digits = 12) const;
};

MixingScan mixing_scan(const TowerChain& chain, const LevelSet& a, const LevelSet& b, const std::vector<BigInt>& lags,
                       const EngineOptions& opts = {});

nlohmann::json scan_to_json(const std::vector<ScanPoint>& pts, int digits = 12);

}  // namespace rankone
