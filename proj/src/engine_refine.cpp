#include <omp.h>

#include <algorithm>

#include "engine_internal.hpp"
#include "rankone/engine.hpp"
#include "rankone/position.hpp"

namespace rankone {

namespace {

// Membership index for a sorted list of base-stage levels. Dense lookup below
// a size threshold, binary search above it.
template <class Pos>
class Targets {
 public:
  Targets(std::vector<Pos> levels, const Pos& base_height) : levels_(std::move(levels)) {
    if (base_height <= Pos(kDenseLimit)) {
      dense_.assign(pos_to_index(base_height), -1);
      for (std::size_t i = 0; i < levels_.size(); ++i) dense_[pos_to_index(levels_[i])] = static_cast<std::int32_t>(i);
    }
  }

  std::int64_t index(const Pos& q) const {
    if (!dense_.empty()) return dense_[pos_to_index(q)];
    auto it = std::lower_bound(levels_.begin(), levels_.end(), q);
    if (it == levels_.end() || *it != q) return -1;
    return static_cast<std::int64_t>(it - levels_.begin());
  }

  std::size_t size() const { return levels_.size(); }

 private:
  static constexpr std::size_t kDenseLimit = std::size_t(1) << 24;
  std::vector<Pos> levels_;
  std::vector<std::int32_t> dense_;
};

// One probe: the point x is tested at position x + shift against `targets`.
// The first probe's target index is histogrammed; the rest only gate membership.
template <class Pos>
struct Probe {
  Pos shift;
  const Targets<Pos>* targets;
};

enum class Verdict { Counted, Out, Unresolved };

template <class Pos>
struct Classified {
  Verdict verdict;
  std::int64_t index;
};

template <class Pos>
Classified<Pos> classify(const TowerView<Pos>& view, const Pos& x, std::int64_t k, const std::vector<Probe<Pos>>& probes) {
  const Pos& h = view.height_at(k);
  bool pending = false;
  std::int64_t index = -1;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Pos q = x + probes[p].shift;
    if (q < 0 || q >= h) {
      pending = true;
      continue;
    }
    Pos base = view.decode_to_base(q, k);
    if (base < 0) return {Verdict::Out, -1};
    std::int64_t idx = probes[p].targets->index(base);
    if (idx < 0) return {Verdict::Out, -1};
    if (p == 0) index = idx;
  }
  if (pending) return {Verdict::Unresolved, -1};
  return {Verdict::Counted, index};
}

struct KernelOutput {
  std::int64_t first_stage = 0;
  std::vector<std::vector<std::uint64_t>> counts;  // [stage - first_stage][target index or 0]
  std::int64_t last_stage = 0;
  std::uint64_t unresolved = 0;
  bool stage_budget = false;
  bool size_budget = false;
};

template <class Pos>
void tally(std::vector<std::uint64_t>& row, const Classified<Pos>& c, bool aggregate) {
  row[aggregate ? 0 : static_cast<std::size_t>(c.index)] += 1;
}

// Classifies the points of `cur` (positions at stage k), or of all their copies
// in stage k+1 when `expand` is set. Returns the still unresolved positions.
template <class Pos>
std::vector<Pos> sweep(const TowerView<Pos>& view, const std::vector<Pos>& cur, std::int64_t k, bool expand,
                       const std::vector<Probe<Pos>>& probes, bool aggregate, std::vector<std::uint64_t>& row,
                       bool parallel) {
  const std::int64_t stage = expand ? k + 1 : k;
  const std::vector<Pos>* offs = expand ? &view.offsets_at(k) : nullptr;
  const std::size_t copies = expand ? offs->size() : 1;
  const std::size_t total = cur.size() * copies;
  auto position = [&](std::size_t t) {
    if (!expand) return cur[t];
    return static_cast<Pos>((*offs)[t / cur.size()] + cur[t % cur.size()]);
  };

  if (!parallel || total < 4096) {
    std::vector<Pos> next;
    for (std::size_t t = 0; t < total; ++t) {
      Pos x = position(t);
      auto c = classify(view, x, stage, probes);
      if (c.verdict == Verdict::Counted) tally(row, c, aggregate);
      else if (c.verdict == Verdict::Unresolved) next.push_back(x);
    }
    return next;
  }

  const int threads = omp_get_max_threads();
  std::vector<std::vector<Pos>> pending(static_cast<std::size_t>(threads));
  std::vector<std::vector<std::uint64_t>> rows(static_cast<std::size_t>(threads), std::vector<std::uint64_t>(row.size(), 0));
#pragma omp parallel num_threads(threads)
  {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    auto& my_pending = pending[tid];
    auto& my_row = rows[tid];
    const long n = static_cast<long>(total);
#pragma omp for schedule(static)
    for (long t = 0; t < n; ++t) {
      Pos x = position(static_cast<std::size_t>(t));
      auto c = classify(view, x, stage, probes);
      if (c.verdict == Verdict::Counted) tally(my_row, c, aggregate);
      else if (c.verdict == Verdict::Unresolved) my_pending.push_back(x);
    }
  }
  std::vector<Pos> next;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] += rows[t][i];
    next.insert(next.end(), pending[t].begin(), pending[t].end());
  }
  return next;
}

template <class Pos>
KernelOutput run_kernel(TowerView<Pos>& view, const std::vector<Level>& source, const std::vector<BigInt>& shifts,
                        const std::vector<const std::vector<Level>*>& target_levels, bool aggregate,
                        const EngineOptions& opts, bool parallel, const TowerChain& chain) {
  const std::int64_t J = view.base();
  BigInt reach = 0;
  for (const auto& s : shifts) reach = std::max(reach, BigInt(abs(s)));
  const std::int64_t K0 = chain.first_stage_above(reach, J);
  const std::int64_t stage_limit = opts.max_stage > 0 ? opts.max_stage : K0 + opts.extra_stages;
  require(K0 <= stage_limit, ErrorCode::StageBudgetExceeded, "first refinement stage beyond the stage budget");
  view.ensure(K0);

  BigInt predicted = static_cast<unsigned long>(source.size());
  for (std::int64_t k = J; k < K0; ++k) predicted *= view.r(k);
  if (predicted > BigInt(static_cast<unsigned long>(opts.size_cap))) {
    throw BudgetExceeded(ErrorCode::SizeBudgetExceeded,
                         "footprint of " + to_string(predicted) + " levels at stage " + std::to_string(K0) + " exceeds the cap");
  }

  std::vector<Targets<Pos>> targets;
  targets.reserve(target_levels.size());
  for (const auto* lv : target_levels) {
    std::vector<Pos> p;
    p.reserve(lv->size());
    for (auto l : *lv) p.push_back(pos_from_big<Pos>(to_big(l)));
    targets.emplace_back(std::move(p), view.height(J));
  }
  std::vector<Probe<Pos>> probes;
  for (std::size_t i = 0; i < shifts.size(); ++i) probes.push_back({pos_from_big<Pos>(shifts[i]), &targets[i]});

  std::vector<Pos> cur;
  cur.reserve(static_cast<std::size_t>(predicted.get_ui()));
  for (auto l : source) cur.push_back(pos_from_big<Pos>(to_big(l)));
  for (std::int64_t k = J; k < K0; ++k) {
    const auto& o = view.offsets(k);
    std::vector<Pos> next;
    next.reserve(cur.size() * o.size());
    for (const auto& off : o)
      for (const auto& x : cur) next.push_back(off + x);
    cur.swap(next);
  }

  const std::size_t width = aggregate ? 1 : targets.front().size();
  KernelOutput out;
  out.first_stage = K0;
  out.counts.emplace_back(width, 0);
  std::int64_t k = K0;
  cur = sweep(view, cur, k, false, probes, aggregate, out.counts.back(), parallel);
  while (!cur.empty()) {
    Rational mass = Rational(static_cast<unsigned long>(cur.size())) * view.level_measure(k);
    if (mass <= opts.tol) break;
    if (k + 1 > stage_limit) {
      out.stage_budget = true;
      break;
    }
    view.ensure(k + 1);
    if (cur.size() * static_cast<std::size_t>(view.r(k)) > opts.size_cap) {
      out.size_budget = true;
      break;
    }
    out.counts.emplace_back(width, 0);
    cur = sweep(view, cur, k, true, probes, aggregate, out.counts.back(), parallel);
    ++k;
  }
  out.last_stage = k;
  out.unresolved = cur.size();
  return out;
}

KernelOutput kernel(const TowerChain& chain, std::int64_t base, const std::vector<Level>& source,
                    const std::vector<BigInt>& shifts, const std::vector<const std::vector<Level>*>& targets,
                    bool aggregate, const EngineOptions& opts, bool parallel) {
  return dispatch_positions([&](auto tag) {
    using Pos = decltype(tag);
    TowerView<Pos> view(chain, base);
    return run_kernel<Pos>(view, source, shifts, targets, aggregate, opts, parallel, chain);
  });
}

Rational weighted(const KernelOutput& out, const TowerChain& chain, std::size_t index) {
  Rational total = 0;
  for (std::size_t s = 0; s < out.counts.size(); ++s) {
    std::uint64_t c = out.counts[s][index];
    if (c != 0) total += Rational(BigInt(std::to_string(c))) * chain.level_measure(out.first_stage + static_cast<std::int64_t>(s));
  }
  return total;
}

Rational slack(const KernelOutput& out, const TowerChain& chain) {
  return Rational(BigInt(std::to_string(out.unresolved))) * chain.level_measure(out.last_stage);
}

Enclosure finish(const KernelOutput& out, const TowerChain& chain, const std::string& what) {
  Rational lo = weighted(out, chain, 0);
  Enclosure e(lo, lo + slack(out, chain));
  if (out.stage_budget) throw BudgetExceeded(ErrorCode::StageBudgetExceeded, what + ": tolerance not reached within the stage budget", e);
  if (out.size_budget) throw BudgetExceeded(ErrorCode::SizeBudgetExceeded, what + ": escape set exceeds the size cap", e);
  return e;
}

Enclosure pair_kernel(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                      const EngineOptions& opts, bool parallel) {
  auto [aa, bb] = internal::align(chain, a, b, opts.size_cap);
  if (aa.empty() || bb.empty()) return Enclosure(Rational(0));
  auto out = kernel(chain, aa.stage(), aa.levels(), {n}, {&bb.levels()}, true, opts, parallel);
  return finish(out, chain, "shifted_intersection");
}

}  // namespace

namespace internal {

std::pair<LevelSet, LevelSet> align(const TowerChain& chain, const LevelSet& a, const LevelSet& b, std::size_t cap) {
  std::int64_t J = std::max(a.stage(), b.stage());
  return {a.stage() == J ? a : refine_set(chain, a, J, cap), b.stage() == J ? b : refine_set(chain, b, J, cap)};
}

}  // namespace internal

Enclosure shifted_intersection_serial(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                      const EngineOptions& opts) {
  return pair_kernel(chain, a, n, b, opts, false);
}

Enclosure shifted_intersection_parallel(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                        const EngineOptions& opts) {
  return pair_kernel(chain, a, n, b, opts, true);
}

Enclosure refine_decode_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                                     const EngineOptions& opts) {
  return pair_kernel(chain, a, n, b, opts, opts.parallel);
}

std::vector<Enclosure> intersection_row(const TowerChain& chain, const LevelSet& a, const BigInt& n,
                                        const std::vector<Level>& targets, std::int64_t target_stage,
                                        const EngineOptions& opts) {
  require(target_stage >= a.stage(), ErrorCode::InvalidParam, "row targets must live at or above the source stage");
  LevelSet aa = a.stage() == target_stage ? a : refine_set(chain, a, target_stage, opts.size_cap);
  LevelSet tt(target_stage, targets, chain);
  require(tt.size() == targets.size(), ErrorCode::InvalidParam, "row targets must be distinct");
  std::vector<Enclosure> row;
  if (aa.empty()) {
    row.assign(targets.size(), Enclosure(Rational(0)));
    return row;
  }
  auto out = kernel(chain, target_stage, aa.levels(), {n}, {&tt.levels()}, false, opts, opts.parallel);
  Rational s = slack(out, chain);
  // Targets were sorted by the LevelSet; map back to the caller's order.
  for (auto l : targets) {
    auto idx = static_cast<std::size_t>(std::lower_bound(tt.levels().begin(), tt.levels().end(), l) - tt.levels().begin());
    Rational lo = weighted(out, chain, idx);
    row.emplace_back(lo, lo + s);
  }
  if (out.stage_budget || out.size_budget)
    throw BudgetExceeded(out.stage_budget ? ErrorCode::StageBudgetExceeded : ErrorCode::SizeBudgetExceeded,
                         "intersection_row: tolerance not reached", row.empty() ? std::nullopt : std::optional<Enclosure>(row.front()));
  return row;
}

Enclosure triple_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n1, const LevelSet& b,
                              const BigInt& n2, const LevelSet& c, const EngineOptions& opts) {
  std::int64_t J = std::max({a.stage(), b.stage(), c.stage()});
  auto up = [&](const LevelSet& s) { return s.stage() == J ? s : refine_set(chain, s, J, opts.size_cap); };
  LevelSet aa = up(a), bb = up(b), cc = up(c);
  if (aa.empty() || bb.empty() || cc.empty()) return Enclosure(Rational(0));
  // x in A with T^{n1} x in C and T^{n1 - n2} x in B.
  auto out = kernel(chain, J, aa.levels(), {n1, BigInt(n1 - n2)}, {&cc.levels(), &bb.levels()}, true, opts, opts.parallel);
  return finish(out, chain, "triple_intersection");
}

}  // namespace rankone
