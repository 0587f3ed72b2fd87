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

// c_k(d) = #{(x, y) in A_k x B_k : y - x = d}, with A_k, B_k the stage-k
// footprints. Since A_{k+1} is the union of o_k(i) + A_k,
//   c_{k+1}(d) = sum_{i, i'} c_k(d - (o_k(i') - o_k(i))),
// and only pairs with |d - (o_k(i') - o_k(i))| < h_k contribute.
template <class Pos>
class Recursion {
 public:
  Recursion(const TowerChain& chain, const LevelSet& a, const LevelSet& b, const EngineOptions& opts)
      : chain_(chain), view_(chain, a.stage()), opts_(opts) {
    for (auto l : a.levels()) a_.push_back(pos_from_big<Pos>(to_big(l)));
    for (auto l : b.levels()) b_.push_back(pos_from_big<Pos>(to_big(l)));
  }

  Enclosure evaluate(const BigInt& n) {
    const std::int64_t J = view_.base();
    const std::int64_t K0 = chain_.first_stage_above(BigInt(abs(n)), J);
    const std::int64_t limit = opts_.max_stage > 0 ? opts_.max_stage : K0 + opts_.extra_stages;
    std::optional<Enclosure> best;
    for (std::int64_t K = K0;; ++K) {
      if (K > limit) throw BudgetExceeded(ErrorCode::StageBudgetExceeded, "deep_correlation: tolerance not reached within the stage budget", best);
      ensure(K);
      Pos pn = pos_from_big<Pos>(n);
      Count hits;
      Count escapes;
      try {
        hits = pairs(K, pn);
        escapes = n >= 0 ? above(K, view_.height(K) - pn) : Count(size(K) - above(K, -pn));
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(e.code(), e.what(), best);
      }
      const Rational& m = view_.level_measure(K);
      Rational lo = count_to_rational(hits) * m;
      Enclosure e(lo, lo + count_to_rational(escapes) * m);
      best = best ? best->intersect(e) : e;
      if (best->width() <= opts_.tol) return *best;
    }
  }

 private:
  void ensure(std::int64_t K) {
    view_.ensure(K);
    while (static_cast<std::int64_t>(sizes_.size()) <= K - view_.base()) {
      std::int64_t k = view_.base() + static_cast<std::int64_t>(sizes_.size());
      if (sizes_.empty()) {
        sizes_.push_back(static_cast<Count>(a_.size()));
      } else {
        Count prev = sizes_.back();
        Count r = static_cast<Count>(view_.r(k - 1));
        if (prev > (~Count(0) >> 2) / r) throw BudgetExceeded(ErrorCode::ScaleExceeded, "footprint count exceeds 126 bits");
        sizes_.push_back(prev * r);
      }
      memo_.emplace_back();
    }
  }

  Count size(std::int64_t k) const { return sizes_[static_cast<std::size_t>(k - view_.base())]; }

  Count base_pairs(const Pos& d) const {
    Count c = 0;
    std::size_t j = 0;
    for (const auto& x : a_) {
      Pos want = x + d;
      while (j < b_.size() && b_[j] < want) ++j;
      if (j == b_.size()) break;
      if (b_[j] == want) ++c;
    }
    return c;
  }

  Count pairs(std::int64_t k, const Pos& d) {
    const Pos& h = view_.height_at(k);
    if (d >= h || d <= -h) return 0;
    if (k == view_.base()) {
      auto& m0 = memo_[0];
      auto it = m0.find(d);
      if (it != m0.end()) return it->second;
      Count c = base_pairs(d);
      remember(m0, d, c);
      return c;
    }
    auto& memo = memo_[static_cast<std::size_t>(k - view_.base())];
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    const std::int64_t s = k - 1;
    const auto& o = view_.offsets_at(s);
    const Pos& hs = view_.height_at(s);
    Count total = 0;
    for (const auto& oi : o) {
      Pos lo = d + oi - hs;
      Pos hi = d + oi + hs;
      auto jt = std::upper_bound(o.begin(), o.end(), lo);
      for (; jt != o.end() && *jt < hi; ++jt) total += pairs(s, static_cast<Pos>(d - (*jt - oi)));
    }
    remember(memo, d, total);
    return total;
  }

  // #{x in A_k : x >= t}
  Count above(std::int64_t k, const Pos& t) const {
    if (t <= 0) return size(k);
    if (t >= view_.height_at(k)) return 0;
    if (k == view_.base()) return static_cast<Count>(a_.end() - std::lower_bound(a_.begin(), a_.end(), t));
    const std::int64_t s = k - 1;
    const auto& o = view_.offsets_at(s);
    auto idx = static_cast<std::size_t>(std::lower_bound(o.begin(), o.end(), t) - o.begin());
    Count total = static_cast<Count>(o.size() - idx) * size(s);
    if (idx > 0) total += above(s, static_cast<Pos>(t - o[idx - 1]));
    return total;
  }

  void remember(std::unordered_map<Pos, Count, PosHash<Pos>>& memo, const Pos& d, Count c) {
    if (++states_ > opts_.state_cap) throw BudgetExceeded(ErrorCode::SizeBudgetExceeded, "difference recursion exceeds the state cap");
    memo.emplace(d, c);
  }

  const TowerChain& chain_;
  TowerView<Pos> view_;
  EngineOptions opts_;
  std::vector<Pos> a_, b_;
  std::vector<Count> sizes_;
  std::vector<std::unordered_map<Pos, Count, PosHash<Pos>>> memo_;
  std::size_t states_ = 0;
};

template <class Pos>
std::vector<CorrelationPoint> run_series(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                         const std::vector<BigInt>& lags, const EngineOptions& opts) {
  Recursion<Pos> rec(chain, a, b, opts);
  std::vector<CorrelationPoint> pts;
  for (const auto& n : lags) {
    CorrelationPoint p;
    p.lag = n;
    try {
      p.value = rec.evaluate(n);
    } catch (const BudgetExceeded& e) {
      p.exhausted = true;
      p.note = e.what();
      if (e.partial()) p.value = *e.partial();
      else p.value = Enclosure(Rational(0), std::min(a.measure(), b.measure()));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

CorrelationSeries deep_correlation(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                   const std::vector<BigInt>& lags, const EngineOptions& opts) {
  auto [aa, bb] = internal::align(chain, a, b, opts.size_cap);
  CorrelationSeries s;
  s.family = chain.schedule().family();
  s.mode = Normalization::Raw;
  s.method = Method::DifferenceRecursion;
  s.stage_a = a.stage();
  s.stage_b = b.stage();
  if (aa.empty() || bb.empty()) {
    for (const auto& n : lags) s.points.push_back({n, Enclosure(Rational(0)), false, ""});
    return s;
  }
  s.points = dispatch_positions([&](auto tag) { return run_series<decltype(tag)>(chain, aa, bb, lags, opts); });
  return s;
}

Enclosure recursion_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                 const EngineOptions& opts) {
  auto [aa, bb] = internal::align(chain, a, b, opts.size_cap);
  if (aa.empty() || bb.empty()) return Enclosure(Rational(0));
  return dispatch_positions([&](auto tag) {
    using Pos = decltype(tag);
    Recursion<Pos> rec(chain, aa, bb, opts);
    return rec.evaluate(n);
  });
}

}  // namespace rankone
