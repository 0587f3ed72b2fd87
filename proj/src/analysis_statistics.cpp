#include <omp.h>

#include <cmath>

#include "rankone/analysis.hpp"
#include "rankone/families.hpp"

namespace rankone {

namespace {

std::uint64_t d_from_counts(const std::vector<std::uint64_t>& P) {
  std::uint64_t d = 0;
  for (std::size_t s = 1; s < P.size(); ++s) d += P[s] > P[s - 1] ? P[s] - P[s - 1] : P[s - 1] - P[s];
  return d;
}

struct TrialOutcome {
  bool success = true;
  std::int64_t first_violation = 0;
  double ratio = 0;
};

// Window sums are grown one position at a time, so each m costs O(r).
TrialOutcome run_trial(const std::vector<std::uint8_t>& f, std::int64_t L, double eps) {
  const std::int64_t r = static_cast<std::int64_t>(f.size());
  const double limit = eps * static_cast<double>(r);
  std::vector<std::uint32_t> w(static_cast<std::size_t>(r), 0);
  std::vector<std::uint64_t> P;
  TrialOutcome out;
  for (std::int64_t m = 1; m < r - L; ++m) {
    for (std::int64_t x = 0; x < r; ++x) w[static_cast<std::size_t>(x)] += f[static_cast<std::size_t>((x + m - 1) % r)];
    if (m <= L) continue;
    P.assign(static_cast<std::size_t>(m + 1), 0);
    for (auto v : w) ++P[v];
    std::uint64_t d = d_from_counts(P);
    if (!(static_cast<double>(d) < limit)) {
      out.success = false;
      out.first_violation = m;
      out.ratio = static_cast<double>(d) / static_cast<double>(r);
      return out;
    }
  }
  return out;
}

StatLemmaSample collect(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed,
                        const std::vector<TrialOutcome>& res) {
  StatLemmaSample s;
  s.r = r;
  s.L = L;
  s.eps = eps;
  s.trials = trials;
  s.seed = seed;
  for (const auto& t : res) {
    if (t.success) ++s.successes;
    s.first_violation.push_back(t.first_violation);
    s.violation_ratio.push_back(t.ratio);
  }
  s.fraction = trials > 0 ? static_cast<double>(s.successes) / static_cast<double>(trials) : 0.0;
  return s;
}

void check(std::int64_t r, std::int64_t L, std::int64_t trials) {
  require(r >= 2, ErrorCode::InvalidParam, "stat lemma needs r >= 2");
  require(L >= 0 && 2 * L < r, ErrorCode::InvalidParam, "stat lemma needs 0 <= L < r/2");
  require(trials >= 1, ErrorCode::InvalidParam, "stat lemma needs at least one trial");
}

}  // namespace

std::uint64_t statistical_D(const std::vector<std::uint8_t>& f, std::int64_t m) {
  const std::int64_t r = static_cast<std::int64_t>(f.size());
  require(m > 0 && m < r, ErrorCode::InvalidParam, "statistical_D needs 0 < m < r");
  std::vector<std::uint64_t> P(static_cast<std::size_t>(m + 1), 0);
  std::uint64_t w = 0;
  for (std::int64_t t = 0; t < m; ++t) w += f[static_cast<std::size_t>(t)];
  for (std::int64_t x = 0; x < r; ++x) {
    ++P[w];
    w += f[static_cast<std::size_t>((x + m) % r)];
    w -= f[static_cast<std::size_t>(x)];
  }
  return d_from_counts(P);
}

std::vector<std::uint8_t> stat_lemma_vector(std::int64_t r, std::uint64_t seed, std::int64_t trial) {
  auto gen = stage_rng(seed, trial);
  std::vector<std::uint8_t> f(static_cast<std::size_t>(r));
  for (auto& v : f) v = static_cast<std::uint8_t>(gen() >> 63);
  return f;
}

StatLemmaSample stat_lemma_mc_serial(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed) {
  check(r, L, trials);
  std::vector<TrialOutcome> res(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) res[static_cast<std::size_t>(t)] = run_trial(stat_lemma_vector(r, seed, t), L, eps);
  return collect(r, L, eps, trials, seed, res);
}

StatLemmaSample stat_lemma_mc_parallel(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed) {
  check(r, L, trials);
  std::vector<TrialOutcome> res(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < trials; ++t) res[static_cast<std::size_t>(t)] = run_trial(stat_lemma_vector(r, seed, t), L, eps);
  return collect(r, L, eps, trials, seed, res);
}

StatLemmaSample stat_lemma_mc(std::int64_t r, std::int64_t L, double eps, std::int64_t trials, std::uint64_t seed, bool parallel) {
  return parallel ? stat_lemma_mc_parallel(r, L, eps, trials, seed) : stat_lemma_mc_serial(r, L, eps, trials, seed);
}

nlohmann::json StatLemmaSample::to_json() const {
  return {{"r", r}, {"L", L}, {"eps", eps}, {"trials", trials}, {"seed", seed}, {"successes", successes},
          {"fraction", fraction}, {"first_violation", first_violation}, {"violation_ratio", violation_ratio}};
}

}  // namespace rankone
