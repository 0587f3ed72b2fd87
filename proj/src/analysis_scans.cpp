#include <omp.h>

#include <algorithm>
#include <exception>

#include "rankone/analysis.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

namespace {

nlohmann::json enc_json(const Enclosure& e, int digits) {
  return {{"lo", to_decimal(e.lo(), digits)},
          {"hi", to_decimal(e.hi(), digits)},
          {"lo_exact", to_string(e.lo())},
          {"hi_exact", to_string(e.hi())}};
}

struct Meet {
  Enclosure value;
  bool exhausted = false;
};

Meet meet_or_partial(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b, const EngineOptions& opts) {
  Meet m;
  try {
    m.value = shifted_intersection(chain, a, n, b, opts);
  } catch (const BudgetExceeded& e) {
    m.exhausted = true;
    m.value = e.partial() ? *e.partial() : Enclosure(Rational(0), std::min(a.measure(), b.measure()));
  }
  return m;
}

// Lags run independently; the first failure in lag order is rethrown after the loop.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

// ------------------------------------------------------------ staircase anomaly

nlohmann::json AnomalyReport::to_json(int digits) const {
  return {{"stage", stage}, {"lag", big_to_json(lag)}, {"value", enc_json(value, digits)}, {"nu_a", enc_json(nu_a, digits)},
          {"exhausted", exhausted}};
}

AnomalyReport anomaly_for(const TowerChain& chain, const LevelSet& a, const EngineOptions& opts) {
  require(chain.schedule().measure_class() == MeasureClass::Finite, ErrorCode::UnboundedMeasure,
          "the anomaly is a normalized quantity");
  AnomalyReport rep;
  rep.stage = a.stage();
  rep.lag = 2 * chain.height(a.stage());
  Enclosure mx = space_measure(chain);
  rep.nu_a = Enclosure(a.measure()) / mx;
  Meet meet = a.empty() ? Meet{Enclosure(Rational(0)), false} : meet_or_partial(chain, a, rep.lag, a, opts);
  rep.exhausted = meet.exhausted;
  rep.value = meet.value / mx - rep.nu_a.square();
  return rep;
}

AnomalyReport staircase_anomaly(const TowerChain& chain, std::int64_t j, const EngineOptions& opts) {
  const BigInt& h = chain.height(j);
  require(fits_level(h) && h <= BigInt(static_cast<unsigned long>(opts.size_cap)), ErrorCode::SizeBudgetExceeded,
          "stage " + std::to_string(j) + " tower is too tall to enumerate");
  std::vector<Level> odd;
  for (Level l = 1; l < to_level(h); l += 2) odd.push_back(l);
  return anomaly_for(chain, LevelSet(j, std::move(odd), chain), opts);
}

std::int64_t largest_feasible_anomaly_stage(const TowerChain& chain, std::size_t size_cap, std::int64_t max_stage) {
  std::int64_t best = -1;
  const BigInt cap(static_cast<unsigned long>(size_cap));
  for (std::int64_t j = chain.start_stage(); j <= max_stage; ++j) {
    if (chain.height(j) / 2 > cap) break;
    best = j;
  }
  return best;
}

// ------------------------------------------------------------ asymmetry

nlohmann::json AsymmetryReport::to_json(int digits) const {
  return {{"stage", stage},
          {"h", big_to_json(h)},
          {"mu_a", to_string(mu_a)},
          {"one_three", enc_json(one_three, digits)},
          {"two_three", enc_json(two_three, digits)},
          {"one_three_minus_third", to_string(Rational(one_three.hi() - mu_a / 3))},
          {"exact", one_three.is_exact() && two_three.is_exact()}};
}

AsymmetryReport asymmetry_test(const TowerChain& chain, const LevelSet& a, std::int64_t j, const EngineOptions& opts) {
  require(a.stage() < j, ErrorCode::InvalidParam, "asymmetry test needs the set's stage below j");
  AsymmetryReport rep;
  rep.stage = j;
  rep.h = chain.height(j);
  rep.mu_a = a.measure();
  // mu(A ∩ T^{-h}A ∩ T^{-3h}A) = mu(T^{3h}A ∩ T^{2h}A ∩ A), and likewise for (2, 3).
  rep.one_three = triple_intersection(chain, a, BigInt(3 * rep.h), a, BigInt(2 * rep.h), a, opts);
  rep.two_three = triple_intersection(chain, a, BigInt(3 * rep.h), a, rep.h, a, opts);
  return rep;
}

// ------------------------------------------------------------ class alpha

std::pair<BigInt, BigInt> WindowRule::at(const TowerChain& chain, std::int64_t j) const {
  const BigInt& h = chain.height(j);
  const BigInt& h1 = chain.height(j + 1);
  return {BigInt(lo[0] * h + lo[1] * h1 + lo[2]), BigInt(hi[0] * h + hi[1] * h1 + hi[2])};
}

WindowRule WindowRule::from_json(const nlohmann::json& j) {
  WindowRule w;
  auto read = [](const nlohmann::json& v, std::array<BigInt, 3>& out) {
    require(v.is_array() && v.size() == 3, ErrorCode::ConfigError, "window bounds are [c_h, c_next, c_0]");
    for (std::size_t i = 0; i < 3; ++i) out[i] = big_from_json(v[i]);
  };
  read(j.at("lo"), w.lo);
  read(j.at("hi"), w.hi);
  return w;
}

nlohmann::json WindowRule::to_json() const {
  nlohmann::json l = nlohmann::json::array(), h = nlohmann::json::array();
  for (const auto& v : lo) l.push_back(big_to_json(v));
  for (const auto& v : hi) h.push_back(big_to_json(v));
  return {{"lo", l}, {"hi", h}};
}

nlohmann::json ClassAlpha::to_json(int digits) const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages)
    st.push_back({{"stage", s.stage},
                  {"window_lo", big_to_json(s.lo)},
                  {"window_hi", big_to_json(s.hi)},
                  {"conditional", enc_json(s.conditional, digits)},
                  {"resolved_at", s.resolved_at}});
  return {{"alpha", alpha}, {"width", width}, {"stages", st}};
}

namespace {

// Enclosure of mu(∪_{lo<=n<=hi} T^n A ∩ A) from the stage-K footprint of A.
Enclosure union_meet(const TowerChain& chain, const LevelSet& fp, const BigInt& lo, const BigInt& hi) {
  const auto& xs = fp.levels();
  const Level llo = to_level(lo), lhi = to_level(hi);
  std::uint64_t hits = 0, open = 0;
  for (auto x : xs) {
    // Some y in A with lo <= x - y <= hi?
    auto it = std::lower_bound(xs.begin(), xs.end(), x - lhi);
    if (it != xs.end() && *it <= x - llo) {
      ++hits;
      continue;
    }
    if (x - lhi < 0) ++open;  // part of the window reaches below the tower
  }
  const Rational& m = chain.level_measure(fp.stage());
  Rational l = Rational(BigInt(std::to_string(hits))) * m;
  return Enclosure(l, l + Rational(BigInt(std::to_string(open))) * m);
}

}  // namespace

ClassAlpha class_alpha(const TowerChain& chain, const LevelSet& a, const WindowRule& rule, std::int64_t j_max,
                       const EngineOptions& opts) {
  require(!a.empty(), ErrorCode::InvalidParam, "class alpha needs a non-empty set");
  require(j_max >= a.stage(), ErrorCode::InvalidParam, "j_max precedes the set's stage");
  ClassAlpha out;
  const Enclosure mu(a.measure());
  bool first = true;
  for (std::int64_t j = a.stage(); j <= j_max; ++j) {
    auto [lo, hi] = rule.at(chain, j);
    require(lo >= 0 && lo <= hi, ErrorCode::InvalidParam, "window must satisfy 0 <= lo <= hi at stage " + std::to_string(j));
    AlphaStage st;
    st.stage = j;
    st.lo = lo;
    st.hi = hi;
    std::int64_t K = chain.first_stage_above(hi, a.stage());
    const std::int64_t limit = opts.max_stage > 0 ? opts.max_stage : K + opts.extra_stages;
    std::optional<Enclosure> best;
    for (; K <= limit; ++K) {
      LevelSet fp;
      try {
        fp = refine_set(chain, a, K, opts.size_cap);
      } catch (const Error& e) {
        if (!e.is_budget() || !best) throw;
        break;
      }
      Enclosure e = union_meet(chain, fp, lo, hi);
      best = best ? best->intersect(e) : e;
      st.resolved_at = K;
      if (best->width() <= opts.tol) break;
    }
    st.conditional = *best / mu;
    double mid = st.conditional.mid_double();
    if (first || mid > out.alpha) {
      out.alpha = mid;
      out.width = st.conditional.width().get_d();
      first = false;
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

// ------------------------------------------------------------ scans

nlohmann::json scan_to_json(const std::vector<ScanPoint>& pts, int digits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pts) {
    nlohmann::json e = enc_json(p.value, digits);
    e["lag"] = big_to_json(p.lag);
    e["exhausted"] = p.exhausted;
    arr.push_back(e);
  }
  return arr;
}

std::vector<ScanPoint> rigidity_scan(const TowerChain& chain, const LevelSet& a, const std::vector<BigInt>& lags,
                                     const EngineOptions& opts) {
  std::vector<ScanPoint> pts(lags.size());
  const Rational twice = 2 * a.measure();
  EngineOptions inner = opts;
  inner.parallel = false;
  auto one = [&](std::size_t i) {
    Meet m = meet_or_partial(chain, a, lags[i], a, inner);
    Rational lo = twice - 2 * m.value.hi();
    pts[i] = {lags[i], Enclosure(lo < 0 ? Rational(0) : lo, twice - 2 * m.value.lo()), m.exhausted};
  };
  const auto n = static_cast<std::int64_t>(lags.size());
  std::vector<std::exception_ptr> errors(lags.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      one(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return pts;
}

nlohmann::json MixingScan::to_json(int digits) const {
  return {{"argmax", big_to_json(argmax)}, {"sup", enc_json(sup, digits)}, {"any_exhausted", any_exhausted},
          {"points", scan_to_json(points, digits)}};
}

MixingScan mixing_scan(const TowerChain& chain, const LevelSet& a, const LevelSet& b, const std::vector<BigInt>& lags,
                       const EngineOptions& opts) {
  require(!lags.empty(), ErrorCode::InvalidParam, "mixing scan needs at least one lag");
  Enclosure product(Rational(0));
  if (chain.schedule().measure_class() == MeasureClass::Finite)
    product = Enclosure(Rational(a.measure() * b.measure())) / space_measure(chain);
  MixingScan out;
  out.points.resize(lags.size());
  EngineOptions inner = opts;
  inner.parallel = false;
  auto one = [&](std::size_t i) {
    Meet m = meet_or_partial(chain, a, lags[i], b, inner);
    out.points[i] = {lags[i], (m.value - product).abs(), m.exhausted};
  };
  const auto n = static_cast<std::int64_t>(lags.size());
  std::vector<std::exception_ptr> errors(lags.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      one(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  rethrow_first(errors);
  // Fixed-order reduction keeps the argmax deterministic.
  std::size_t best = 0;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    out.any_exhausted = out.any_exhausted || out.points[i].exhausted;
    if (out.points[i].value.midpoint() > out.points[best].value.midpoint()) best = i;
  }
  out.argmax = out.points[best].lag;
  out.sup = out.points[best].value;
  for (const auto& p : out.points) out.sup = Enclosure(std::max(out.sup.lo(), p.value.lo()), std::max(out.sup.hi(), p.value.hi()));
  return out;
}

}  // namespace rankone
