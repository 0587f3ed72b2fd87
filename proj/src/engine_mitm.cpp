#include <algorithm>
#include <unordered_map>

#include "engine_internal.hpp"
#include "rankone/engine.hpp"
#include "rankone/position.hpp"

namespace rankone {

namespace {

using Count = unsigned __int128;

Rational count_to_rational(Count c) {
  std::string s;
  if (c == 0) s = "0";
  while (c > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  std::reverse(s.begin(), s.end());
  return Rational(BigInt(s));
}

template <class Pos>
std::vector<Pos> lift(TowerView<Pos>& view, std::vector<Pos> cur, std::int64_t from, std::int64_t to) {
  for (std::int64_t k = from; k < to; ++k) {
    const auto& o = view.offsets(k);
    std::vector<Pos> next;
    next.reserve(cur.size() * o.size());
    for (const auto& off : o)
      for (const auto& x : cur) next.push_back(off + x);
    cur.swap(next);
  }
  return cur;
}

struct StageCounts {
  Count hits = 0;
  Count escapes = 0;
};

// #{(x, y) in la x lb : y - x = d}, both sorted.
template <class Pos>
Count pairs_at(const std::vector<Pos>& la, const std::vector<Pos>& lb, const Pos& d) {
  Count c = 0;
  auto j = lb.begin();
  for (const auto& x : la) {
    Pos want = x + d;
    j = std::lower_bound(j, lb.end(), want);
    if (j == lb.end()) break;
    if (*j == want) ++c;
  }
  return c;
}

// Counts pairs at stage K with footprints split at stage M. A stage-K copy is
// low + high with low < h_M, so y - x = n pairs a high difference delta with a low
// difference n - delta, |n - delta| < h_M.
template <class Pos>
StageCounts count_at(TowerView<Pos>& view, const std::vector<Pos>& a, const std::vector<Pos>& b, std::int64_t J,
                     std::int64_t M, std::int64_t K, const Pos& n) {
  std::vector<Pos> la = lift(view, a, J, M);
  std::vector<Pos> lb = lift(view, b, J, M);
  std::vector<Pos> hs = lift(view, std::vector<Pos>{Pos(0)}, M, K);
  const Pos& hM = view.height(M);
  const Pos& hK = view.height(K);

  // Multiplicities of the high differences inside the window.
  std::vector<Pos> deltas;
  std::size_t lo = 0;
  for (const auto& hx : hs) {
    Pos lower = hx + n - hM;
    Pos upper = hx + n + hM;
    while (lo < hs.size() && hs[lo] <= lower) ++lo;
    for (std::size_t t = lo; t < hs.size() && hs[t] < upper; ++t) deltas.push_back(hs[t] - hx);
  }
  std::sort(deltas.begin(), deltas.end());

  StageCounts out;
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (i == 0 || deltas[i] != deltas[i - 1]) ++distinct;
  const double merge_cost = static_cast<double>(distinct) * static_cast<double>(la.size() + lb.size());
  const double table_cost = static_cast<double>(la.size()) * static_cast<double>(lb.size());
  std::vector<Pos> table;
  if (table_cost < merge_cost) {
    table.reserve(la.size() * lb.size());
    for (const auto& y : lb)
      for (const auto& x : la) table.push_back(y - x);
    std::sort(table.begin(), table.end());
  }
  for (std::size_t i = 0; i < deltas.size();) {
    std::size_t k = i;
    while (k < deltas.size() && deltas[k] == deltas[i]) ++k;
    Pos d = n - deltas[i];
    Count low;
    if (table.empty()) {
      low = pairs_at(la, lb, d);
    } else {
      auto [f, l] = std::equal_range(table.begin(), table.end(), d);
      low = static_cast<Count>(l - f);
    }
    out.hits += low * static_cast<Count>(k - i);
    i = k;
  }

  for (const auto& hx : hs) {
    Pos threshold = hK - n - hx;
    auto it = std::lower_bound(la.begin(), la.end(), threshold);
    out.escapes += static_cast<Count>(la.end() - it);
  }
  return out;
}

template <class Pos>
Enclosure run_mitm(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b, const EngineOptions& opts) {
  const std::int64_t J = a.stage();
  TowerView<Pos> view(chain, J);
  const std::int64_t K0 = chain.first_stage_above(n, J);
  const std::int64_t stage_limit = opts.max_stage > 0 ? opts.max_stage : K0 + opts.extra_stages;
  std::vector<Pos> va, vb;
  for (auto l : a.levels()) va.push_back(pos_from_big<Pos>(to_big(l)));
  for (auto l : b.levels()) vb.push_back(pos_from_big<Pos>(to_big(l)));
  const double cap = static_cast<double>(opts.size_cap);

  std::optional<Enclosure> best;
  for (std::int64_t K = K0;; ++K) {
    if (K > stage_limit) {
      throw BudgetExceeded(ErrorCode::StageBudgetExceeded, "base_correlation_fast: tolerance not reached within the stage budget", best);
    }
    view.ensure(K);
    Pos pn = pos_from_big<Pos>(n);
    // Cost of a split: the high sums plus the cheaper of a difference table and
    // one merge per high difference (at most twice the high sums).
    std::int64_t bestM = -1;
    double bestCost = 0;
    double low_a = static_cast<double>(va.size()), low_b = static_cast<double>(vb.size());
    for (std::int64_t M = J; M <= K; ++M) {
      double high = 1;
      for (std::int64_t k = M; k < K; ++k) high *= static_cast<double>(view.r(k));
      double table = low_a * low_b;
      double merges = 2 * high * (low_a + low_b);
      double cost = high + std::min(table, merges);
      bool fits = std::max(low_a, low_b) <= cap && high <= cap && (table <= cap || merges <= 64 * cap);
      if (fits && (bestM < 0 || cost < bestCost)) {
        bestM = M;
        bestCost = cost;
      }
      if (M < K) {
        low_a *= static_cast<double>(view.r(M));
        low_b *= static_cast<double>(view.r(M));
      }
    }
    if (bestM < 0) {
      throw BudgetExceeded(ErrorCode::SizeBudgetExceeded, "base_correlation_fast: both halves exceed the size cap at stage " + std::to_string(K), best);
    }
    StageCounts c = count_at(view, va, vb, J, bestM, K, pn);
    const Rational& m = view.level_measure(K);
    Rational lo = count_to_rational(c.hits) * m;
    Enclosure e(lo, lo + count_to_rational(c.escapes) * m);
    best = best ? best->intersect(e) : e;
    if (best->width() <= opts.tol) return *best;
  }
}

}  // namespace

Enclosure mitm_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                            const EngineOptions& opts) {
  auto [aa, bb] = internal::align(chain, a, b, opts.size_cap);
  if (aa.empty() || bb.empty()) return Enclosure(Rational(0));
  if (n < 0) {
    BigInt m = -n;
    return dispatch_positions([&](auto tag) { return run_mitm<decltype(tag)>(chain, bb, m, aa, opts); });
  }
  return dispatch_positions([&](auto tag) { return run_mitm<decltype(tag)>(chain, aa, n, bb, opts); });
}

}  // namespace rankone
