#include "rankone/engine.hpp"

#include <algorithm>

#include "engine_internal.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

std::string method_name(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::RefineDecode: return "refine_decode";
    case Method::MeetInTheMiddle: return "meet_in_the_middle";
    case Method::DifferenceRecursion: return "difference_recursion";
  }
  return "auto";
}

Method method_from_string(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "refine_decode") return Method::RefineDecode;
  if (s == "meet_in_the_middle" || s == "mitm") return Method::MeetInTheMiddle;
  if (s == "difference_recursion" || s == "recursion") return Method::DifferenceRecursion;
  fail(ErrorCode::ConfigError, "unknown method '" + s + "'");
}

std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::Raw: return "raw";
    case Normalization::Normalized: return "normalized";
    case Normalization::Centered: return "centered";
  }
  return "raw";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "raw") return Normalization::Raw;
  if (s == "normalized") return Normalization::Normalized;
  if (s == "centered") return Normalization::Centered;
  fail(ErrorCode::ConfigError, "unknown normalization '" + s + "'");
}

namespace internal {

BigInt refine_footprint(const TowerChain& chain, const LevelSet& a, const BigInt& n) {
  std::int64_t K0 = chain.first_stage_above(BigInt(abs(n)), a.stage());
  BigInt size = static_cast<unsigned long>(a.size());
  for (std::int64_t k = a.stage(); k < K0; ++k) size *= chain.tower(k).vector.r;
  return size;
}

}  // namespace internal

Enclosure shifted_intersection(const TowerChain& chain, const LevelSet& a, const BigInt& n, const LevelSet& b,
                               const EngineOptions& opts) {
  switch (opts.method) {
    case Method::RefineDecode: return refine_decode_intersection(chain, a, n, b, opts);
    case Method::MeetInTheMiddle: return mitm_intersection(chain, a, n, b, opts);
    case Method::DifferenceRecursion: return recursion_intersection(chain, a, n, b, opts);
    case Method::Auto: break;
  }
  std::int64_t J = std::max(a.stage(), b.stage());
  BigInt size = internal::refine_footprint(chain, a.stage() == J ? a : refine_set(chain, a, J, opts.size_cap), n);
  if (size <= BigInt(static_cast<unsigned long>(opts.size_cap))) {
    try {
      return refine_decode_intersection(chain, a, n, b, opts);
    } catch (const BudgetExceeded& e) {
      // The escape set outgrew the cap; the recursion never materialises it.
      if (e.code() != ErrorCode::SizeBudgetExceeded) throw;
    }
  }
  return recursion_intersection(chain, a, n, b, opts);
}

Enclosure koopman_form(const TowerChain& chain, const LevelSet& a, const BigInt& k, const LevelSet& b,
                       const EngineOptions& opts) {
  return shifted_intersection(chain, a, BigInt(-k), b, opts);
}

Enclosure symmetric_difference(const TowerChain& chain, const LevelSet& a, const BigInt& n, const EngineOptions& opts) {
  // mu(T^n A) = mu(A), so mu(T^n A △ A) = 2 mu(A) - 2 mu(T^n A ∩ A).
  Enclosure meet = shifted_intersection(chain, a, n, a, opts);
  Rational twice = 2 * a.measure();
  Rational lo = twice - 2 * meet.hi();
  Rational hi = twice - 2 * meet.lo();
  if (lo < 0) lo = 0;
  return Enclosure(lo, hi);
}

Enclosure space_measure(const TowerChain& chain, std::int64_t depth) {
  return chain.total_measure(chain.start_stage() + depth).enclosure();
}

const CorrelationPoint* CorrelationSeries::find(const BigInt& lag) const {
  for (const auto& p : points)
    if (p.lag == lag) return &p;
  return nullptr;
}

bool CorrelationSeries::any_exhausted() const {
  return std::any_of(points.begin(), points.end(), [](const CorrelationPoint& p) { return p.exhausted; });
}

Rational CorrelationSeries::max_width() const {
  Rational w = 0;
  for (const auto& p : points) w = std::max(w, p.value.width());
  return w;
}

nlohmann::json CorrelationSeries::to_json(int digits) const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json e = {{"lag", big_to_json(p.lag)},
                        {"lo", to_decimal(p.value.lo(), digits)},
                        {"hi", to_decimal(p.value.hi(), digits)},
                        {"lo_exact", to_string(p.value.lo())},
                        {"hi_exact", to_string(p.value.hi())},
                        {"exhausted", p.exhausted}};
    if (!p.note.empty()) e["note"] = p.note;
    pts.push_back(e);
  }
  return {{"family", family},
          {"mode", normalization_name(mode)},
          {"method", method_name(method)},
          {"stage_a", stage_a},
          {"stage_b", stage_b},
          {"points", pts}};
}

namespace {

CorrelationPoint evaluate_point(const TowerChain& chain, const LevelSet& a, const LevelSet& b, const BigInt& n,
                                const EngineOptions& opts) {
  CorrelationPoint p;
  p.lag = n;
  try {
    p.value = shifted_intersection(chain, a, n, b, opts);
  } catch (const BudgetExceeded& e) {
    p.exhausted = true;
    p.note = e.what();
    p.value = e.partial() ? *e.partial() : Enclosure(Rational(0), std::min(a.measure(), b.measure()));
  }
  return p;
}

void normalise(CorrelationSeries& s, const TowerChain& chain, const LevelSet& a, const LevelSet& b) {
  if (s.mode == Normalization::Raw) return;
  Enclosure mx = space_measure(chain);
  Enclosure product = (Enclosure(a.measure()) * Enclosure(b.measure())) / (mx * mx);
  for (auto& p : s.points) {
    p.value = p.value / mx;
    if (s.mode == Normalization::Centered) p.value = p.value - product;
  }
}

}  // namespace

CorrelationSeries correlation_series(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                     const std::vector<BigInt>& lags, Normalization mode, const EngineOptions& opts) {
  if (mode != Normalization::Raw && chain.schedule().measure_class() == MeasureClass::Infinite)
    fail(ErrorCode::UnboundedMeasure, "normalised correlations need a finite measure space");
  CorrelationSeries s;
  if (opts.method == Method::DifferenceRecursion) {
    s = deep_correlation(chain, a, b, lags, opts);
  } else {
    s.family = chain.schedule().family();
    s.method = opts.method;
    s.stage_a = a.stage();
    s.stage_b = b.stage();
    for (const auto& n : lags) s.points.push_back(evaluate_point(chain, a, b, n, opts));
  }
  s.mode = mode;
  normalise(s, chain, a, b);
  return s;
}

CorrelationSeries base_correlation_fast(const TowerChain& chain, const LevelSet& a, const LevelSet& b,
                                        const std::vector<BigInt>& lags, const EngineOptions& opts) {
  CorrelationSeries s;
  s.family = chain.schedule().family();
  s.mode = Normalization::Raw;
  s.method = Method::MeetInTheMiddle;
  s.stage_a = a.stage();
  s.stage_b = b.stage();
  EngineOptions o = opts;
  o.method = Method::MeetInTheMiddle;
  for (const auto& n : lags) s.points.push_back(evaluate_point(chain, a, b, n, o));
  return s;
}

}  // namespace rankone
