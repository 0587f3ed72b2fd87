#include "rankone/app/operations.hpp"

#include <algorithm>
#include <map>

#include "rankone/analysis.hpp"
#include "rankone/families.hpp"
#include "rankone/finite_field.hpp"
#include "rankone/json_util.hpp"
#include "rankone/spacer_stats.hpp"

namespace rankone::app {

using nlohmann::json;

// ------------------------------------------------------------------ context

RunContext::RunContext(const ExperimentConfig& config) : config_(config), engine_(config.engine) {
  engine_.parallel = config.threads != 1;
}

const TowerChain& RunContext::chain() {
  if (!chain_) {
    require(config_.schedule.is_object(), ErrorCode::ConfigError, "this operation needs a schedule");
    FamilySpec spec;
    from_json(config_.schedule, spec);
    chain_ = std::make_unique<TowerChain>(make_schedule(spec));
  }
  return *chain_;
}

namespace {

// ------------------------------------------------------------------ params

const json& need(const json& p, const char* key) {
  require(p.contains(key), ErrorCode::ConfigError, std::string("missing parameter '") + key + "'");
  return p.at(key);
}

template <class T>
T as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::ConfigError, std::string("parameter '") + key + "' has the wrong type");
  }
}

template <class T>
T get(const json& p, const char* key) {
  return as<T>(need(p, key), key);
}

template <class T>
T get(const json& p, const char* key, T fallback) {
  return p.contains(key) ? as<T>(p.at(key), key) : fallback;
}

BigInt get_big(const json& p, const char* key) {
  const json& v = need(p, key);
  try {
    return big_from_json(v);
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, std::string("parameter '") + key + "' is not an integer");
  }
}

LevelSet get_set(RunContext& ctx, const char* key) {
  const json& v = need(ctx.params(), key);
  try {
    return LevelSet::from_json(v, ctx.chain());
  } catch (const json::exception&) {
    fail(ErrorCode::ConfigError, std::string("parameter '") + key + "' is not a level set");
  }
}

LevelSet get_set_or(RunContext& ctx, const char* key, const char* fallback_key) {
  return ctx.params().contains(key) ? get_set(ctx, key) : get_set(ctx, fallback_key);
}

std::pair<std::int64_t, std::int64_t> stage_span(const json& p, std::int64_t fallback) {
  if (p.contains("stages")) {
    const json& s = p.at("stages");
    require(s.is_array() && s.size() == 2, ErrorCode::ConfigError, "'stages' must be [lo, hi]");
    auto lo = as<std::int64_t>(s[0], "stages"), hi = as<std::int64_t>(s[1], "stages");
    require(lo <= hi, ErrorCode::ConfigError, "'stages' must satisfy lo <= hi");
    return {lo, hi};
  }
  std::int64_t j = get<std::int64_t>(p, "stage", fallback);
  return {j, j};
}

// ------------------------------------------------------------------ output helpers

struct Tracker {
  Rational max_width{0};
  bool exhausted = false;
  void see(const Enclosure& e) { max_width = std::max(max_width, e.width()); }
  void see(const Enclosure& e, bool ex) {
    see(e);
    exhausted = exhausted || ex;
  }
  OpResult result(json out, std::optional<Table> table = std::nullopt) const {
    return OpResult{std::move(out), std::move(table), max_width, exhausted};
  }
};

json enc(const Enclosure& e, int digits) {
  return {{"lo", to_decimal(e.lo(), digits)},
          {"hi", to_decimal(e.hi(), digits)},
          {"lo_exact", to_string(e.lo())},
          {"hi_exact", to_string(e.hi())}};
}

json rational_json(const Rational& q, int digits) { return {{"exact", to_string(q)}, {"decimal", to_decimal(q, digits)}}; }

json big_list(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

// Runs one engine call, turning budget exhaustion into a flagged partial enclosure.
template <class Fn>
std::pair<Enclosure, bool> guarded(Fn&& fn, const Rational& fallback_hi) {
  try {
    return {fn(), false};
  } catch (const BudgetExceeded& e) {
    return {e.partial() ? *e.partial() : Enclosure(Rational(0), fallback_hi), true};
  }
}

Table series_table(const CorrelationSeries& s, int digits) {
  Table t{{"lag", "lo", "hi", "exhausted"}, {}};
  for (const auto& p : s.points)
    t.rows.push_back({to_string(p.lag), to_decimal(p.value.lo(), digits), to_decimal(p.value.hi(), digits),
                      p.exhausted ? "1" : "0"});
  return t;
}

OpResult series_result(const CorrelationSeries& s, int digits) {
  Tracker tr;
  for (const auto& p : s.points) tr.see(p.value, p.exhausted);
  return tr.result(s.to_json(digits), series_table(s, digits));
}

Table scan_table(const std::vector<ScanPoint>& pts, int digits) {
  Table t{{"lag", "lo", "hi", "exhausted"}, {}};
  for (const auto& p : pts)
    t.rows.push_back({to_string(p.lag), to_decimal(p.value.lo(), digits), to_decimal(p.value.hi(), digits),
                      p.exhausted ? "1" : "0"});
  return t;
}

json tower_json(const Tower& t, bool offsets) {
  json j = {{"stage", t.stage},
            {"height", to_string(t.height)},
            {"level_measure", to_string(t.level_measure)},
            {"r", t.vector.r},
            {"spacers", big_list(t.vector.spacers)},
            {"next_height", to_string(t.next_height)}};
  if (offsets) j["offsets"] = big_list(t.offsets);
  return j;
}

json provenance_json(const LevelProvenance& p) {
  if (p.kind == LevelProvenance::Kind::Level) return {{"kind", "level"}, {"stage", p.stage}, {"level", to_string(p.level)}};
  return {{"kind", "spacer"}, {"stage", p.stage}, {"column", p.column}, {"depth", to_string(p.depth)}};
}

CorrelationSeries centered_series(RunContext& ctx, std::int64_t N) {
  require(N >= 1, ErrorCode::ConfigError, "'N' must be positive");
  LevelSet a = get_set(ctx, "a");
  LevelSet b = ctx.params().contains("b") ? get_set(ctx, "b") : a;
  std::vector<BigInt> lags;
  for (std::int64_t n = 0; n < N; ++n) lags.push_back(BigInt(static_cast<long>(n)));
  auto mode = normalization_from_string(get<std::string>(ctx.params(), "mode", "centered"));
  return correlation_series(ctx.chain(), a, b, lags, mode, ctx.engine());
}

// ------------------------------------------------------------------ operations

OpResult op_tower_sequence(RunContext& ctx) {
  const auto& chain = ctx.chain();
  std::int64_t last = get<std::int64_t>(ctx.params(), "stages", chain.start_stage() + 9);
  bool offsets = get<bool>(ctx.params(), "offsets", true);
  require(last >= chain.start_stage(), ErrorCode::ConfigError, "'stages' precedes the start stage");
  json towers = json::array();
  Table t{{"stage", "height", "r", "spacer_total", "level_measure"}, {}};
  for (const auto& tw : chain.sequence(last)) {
    towers.push_back(tower_json(tw, offsets));
    t.rows.push_back({std::to_string(tw.stage), to_string(tw.height), std::to_string(tw.vector.r),
                      to_string(tw.vector.spacer_total()), to_string(tw.level_measure)});
  }
  return Tracker{}.result({{"schedule", chain.schedule().to_json()}, {"towers", towers}}, t);
}

OpResult op_stage_vectors(RunContext& ctx) {
  const auto& chain = ctx.chain();
  std::int64_t count = get<std::int64_t>(ctx.params(), "count", 10);
  require(count >= 1, ErrorCode::ConfigError, "'count' must be positive");
  json out = json::array();
  Table t{{"stage", "r", "spacers"}, {}};
  for (std::int64_t j = chain.start_stage(); j < chain.start_stage() + count; ++j) {
    const auto& v = chain.tower(j).vector;
    out.push_back({{"stage", j}, {"r", v.r}, {"spacers", big_list(v.spacers)}});
    std::string s;
    for (const auto& x : v.spacers) s += (s.empty() ? "" : " ") + to_string(x);
    t.rows.push_back({std::to_string(j), std::to_string(v.r), s});
  }
  return Tracker{}.result({{"family", chain.schedule().family()}, {"stages", out}}, t);
}

OpResult op_refine_set(RunContext& ctx) {
  LevelSet a = get_set(ctx, "set");
  std::int64_t k = get<std::int64_t>(ctx.params(), "stage");
  LevelSet r = refine_set(ctx.chain(), a, k, ctx.engine().size_cap);
  json out = r.to_json();
  out["size"] = r.size();
  out["measure"] = to_string(r.measure());
  return Tracker{}.result(out);
}

OpResult op_decode_level(RunContext& ctx) {
  const auto& p = ctx.params();
  std::int64_t K = get<std::int64_t>(p, "stage");
  std::int64_t J = get<std::int64_t>(p, "target");
  BigInt level = get_big(p, "level");
  return Tracker{}.result({{"stage", K}, {"level", to_string(level)}, {"target", J},
                           {"provenance", provenance_json(decode_level(ctx.chain(), K, level, J))}});
}

OpResult op_total_measure(RunContext& ctx) {
  const auto& chain = ctx.chain();
  int d = ctx.config().digits;
  std::int64_t j = get<std::int64_t>(ctx.params(), "stage", chain.start_stage() + 32);
  TotalMeasure m = chain.total_measure(j);
  json out = {{"stage", j}, {"lower", rational_json(m.lower, d)}, {"declared_infinite", m.declared_infinite}};
  out["upper"] = m.upper ? rational_json(*m.upper, d) : json(nullptr);
  Tracker tr;
  if (m.upper) tr.see(Enclosure(m.lower, *m.upper));
  return tr.result(out);
}

OpResult op_primitive_root(RunContext& ctx) {
  auto p = get<std::uint64_t>(ctx.params(), "p");
  return Tracker{}.result({{"p", p}, {"g", primitive_root(p)}});
}

OpResult op_trace_sequence(RunContext& ctx) {
  const auto& p = ctx.params();
  auto b = get<std::uint32_t>(p, "b"), n = get<std::uint32_t>(p, "n");
  auto count = get<std::uint64_t>(p, "count", 0);
  auto start = get<std::uint64_t>(p, "start", 0);
  GaloisField field(b, n);
  if (count == 0) count = field.order() - 1;
  auto seq = trace_sequence(b, n, count, start);
  json mod = field.modulus();
  return Tracker{}.result({{"b", b}, {"n", n}, {"modulus", mod}, {"generator", field.generator()}, {"start", start},
                           {"traces", seq}});
}

OpResult op_validate_injectivity(RunContext& ctx) {
  const auto& p = ctx.params();
  auto r = get<std::uint64_t>(p, "r"), w = get<std::uint64_t>(p, "p");
  std::uint64_t g = p.contains("g") ? get<std::uint64_t>(p, "g") : primitive_root(r);
  return Tracker{}.result({{"r", r}, {"g", g}, {"p", w}, {"injective", validate_injectivity(r, g, w)}});
}

OpResult op_injectivity_sweep(RunContext& ctx) {
  auto max_prime = get<std::uint64_t>(ctx.params(), "max_prime");
  bool par = get<bool>(ctx.params(), "parallel", ctx.engine().parallel);
  InjectivitySweep s = par ? injectivity_sweep_parallel(max_prime) : injectivity_sweep_serial(max_prime);
  return Tracker{}.result({{"max_prime", max_prime},
                           {"primes_checked", s.primes_checked},
                           {"windows_checked", s.windows_checked},
                           {"pair_checks", s.pair_checks},
                           {"failures", s.failures},
                           {"first_failure_prime", s.first_failure_prime},
                           {"first_failure_window", s.first_failure_window},
                           {"holds", s.failures == 0}});
}

OpResult op_spacer_sum(RunContext& ctx) {
  const auto& p = ctx.params();
  auto j = get<std::int64_t>(p, "stage"), i = get<std::int64_t>(p, "i"), w = get<std::int64_t>(p, "p");
  return Tracker{}.result({{"stage", j}, {"i", i}, {"p", w}, {"sum", to_string(spacer_sum(ctx.chain(), j, i, w))}});
}

OpResult op_spacer_sum_distribution(RunContext& ctx) {
  const auto& p = ctx.params();
  auto j = get<std::int64_t>(p, "stage"), w = get<std::int64_t>(p, "p");
  SumHistogram h = spacer_sum_distribution(ctx.chain(), j, w);
  std::uint64_t max_count = 0, max_diff = 0;
  for (const auto& [v, c] : h.counts) max_count = std::max(max_count, c);
  auto diffs = difference_histogram(h);
  for (const auto& [d, c] : diffs)
    if (d != 0) max_diff = std::max(max_diff, c);
  json out = h.to_json();
  out["max_count"] = max_count;
  out["distinct_differences"] = diffs.size();
  out["max_difference_count"] = max_diff;
  Table t{{"value", "count"}, {}};
  for (const auto& [v, c] : h.counts) t.rows.push_back({to_string(v), std::to_string(c)});
  return Tracker{}.result(out, t);
}

OpResult op_triangular_law(RunContext& ctx) {
  const auto& p = ctx.params();
  auto j = get<std::int64_t>(p, "stage", ctx.chain().start_stage());
  json reports = json::array();
  Table t{{"stage", "p", "H", "samples", "tv", "telescoping"}, {}};
  std::vector<std::int64_t> windows;
  if (p.contains("p") && p.at("p").is_array()) windows = as<std::vector<std::int64_t>>(p.at("p"), "p");
  else windows.push_back(get<std::int64_t>(p, "p"));
  require(!windows.empty(), ErrorCode::ConfigError, "'p' is empty");
  for (auto w : windows) {
    TriangularReport r = ornstein_triangular(ctx.chain(), j, w);
    reports.push_back(r.to_json());
    t.rows.push_back({std::to_string(r.stage), std::to_string(r.window), std::to_string(r.H), std::to_string(r.samples),
                      to_decimal(rational_from_double(r.tv), 6), r.telescoping_holds ? "1" : "0"});
  }
  return Tracker{}.result({{"reports", reports}}, t);
}

OpResult op_shifted_intersection(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  BigInt n = get_big(ctx.params(), "n");
  auto [e, ex] = guarded([&] { return shifted_intersection(ctx.chain(), a, n, b, ctx.engine()); },
                         std::min(a.measure(), b.measure()));
  Tracker tr;
  tr.see(e, ex);
  return tr.result({{"n", to_string(n)}, {"value", enc(e, ctx.config().digits)}, {"exhausted", ex}});
}

OpResult op_triple_intersection(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  LevelSet c = get_set_or(ctx, "c", "a");
  BigInt n1 = get_big(ctx.params(), "n1"), n2 = get_big(ctx.params(), "n2");
  auto [e, ex] = guarded([&] { return triple_intersection(ctx.chain(), a, n1, b, n2, c, ctx.engine()); },
                         std::min({a.measure(), b.measure(), c.measure()}));
  Tracker tr;
  tr.see(e, ex);
  return tr.result({{"n1", to_string(n1)}, {"n2", to_string(n2)}, {"value", enc(e, ctx.config().digits)}, {"exhausted", ex}});
}

OpResult op_symmetric_difference(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  BigInt n = get_big(ctx.params(), "n");
  auto [e, ex] = guarded([&] { return symmetric_difference(ctx.chain(), a, n, ctx.engine()); }, 2 * a.measure());
  Tracker tr;
  tr.see(e, ex);
  return tr.result({{"n", to_string(n)}, {"mu_a", to_string(a.measure())}, {"value", enc(e, ctx.config().digits)},
                    {"exhausted", ex}});
}

std::vector<BigInt> get_lags(RunContext& ctx, const char* key) {
  return parse_lags(need(ctx.params(), key), &ctx.chain());
}

OpResult op_correlation_series(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  auto mode = normalization_from_string(get<std::string>(ctx.params(), "mode", "raw"));
  return series_result(correlation_series(ctx.chain(), a, b, get_lags(ctx, "lags"), mode, ctx.engine()), ctx.config().digits);
}

OpResult op_base_correlation_fast(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  return series_result(base_correlation_fast(ctx.chain(), a, b, get_lags(ctx, "lags"), ctx.engine()), ctx.config().digits);
}

OpResult op_deep_correlation(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  return series_result(deep_correlation(ctx.chain(), a, b, get_lags(ctx, "lags"), ctx.engine()), ctx.config().digits);
}

OpResult op_weak_limit_fit(RunContext& ctx) {
  const auto& p = ctx.params();
  auto powers = get_lags(ctx, "powers");
  auto k_min = get<std::int64_t>(p, "k_min", 0), k_max = get<std::int64_t>(p, "k_max", 10);
  auto stage = get<std::int64_t>(p, "test_stage", 4);
  LimitFit fit = weak_limit_fit(ctx.chain(), powers, k_min, k_max, stage, ctx.engine());
  const PowerFit& head = fit.headline();
  Table t{{"k", "a_k"}, {}};
  for (std::size_t i = 0; i < head.coefficients.size(); ++i)
    t.rows.push_back({std::to_string(k_min + static_cast<std::int64_t>(i)), to_decimal(rational_from_double(head.coefficients[i]), 8)});
  json out = fit.to_json();
  out["headline_power"] = to_string(head.power);
  out["residual"] = head.residual;
  Tracker tr;
  for (const auto& f : fit.fits) tr.max_width = std::max(tr.max_width, rational_from_double(f.max_width));
  return tr.result(out, t);
}

OpResult op_averaging_deviation(RunContext& ctx) {
  const auto& p = ctx.params();
  LevelSet f = get_set(ctx, "f");
  auto [lo, hi] = stage_span(p, ctx.chain().start_stage());
  auto w = get<std::int64_t>(p, "p");
  json reports = json::array();
  Table t{{"stage", "p", "lo", "hi", "max_multiplicity"}, {}};
  Tracker tr;
  int d = ctx.config().digits;
  for (std::int64_t j = lo; j <= hi; ++j) {
    DeviationReport r = averaging_deviation(ctx.chain(), j, w, f, ctx.engine());
    tr.see(r.value);
    reports.push_back(r.to_json(d));
    t.rows.push_back({std::to_string(j), std::to_string(w), to_decimal(r.value.lo(), d), to_decimal(r.value.hi(), d),
                      std::to_string(r.max_multiplicity)});
  }
  return tr.result({{"reports", reports}}, t);
}

OpResult op_statistical_D(RunContext& ctx) {
  const auto& p = ctx.params();
  auto f = get<std::vector<std::uint8_t>>(p, "f");
  auto m = get<std::int64_t>(p, "m");
  for (auto x : f) require(x <= 1, ErrorCode::ConfigError, "'f' must be a 0/1 vector");
  return Tracker{}.result({{"r", f.size()}, {"m", m}, {"D", statistical_D(f, m)}});
}

OpResult op_stat_lemma_mc(RunContext& ctx) {
  const auto& p = ctx.params();
  auto r = get<std::int64_t>(p, "r"), L = get<std::int64_t>(p, "L"), trials = get<std::int64_t>(p, "trials");
  auto eps = get<double>(p, "eps");
  auto seed = get<std::uint64_t>(p, "seed");
  bool par = get<bool>(p, "parallel", ctx.engine().parallel);
  StatLemmaSample s = stat_lemma_mc(r, L, eps, trials, seed, par);
  Table t{{"trial", "first_violation", "ratio"}, {}};
  for (std::size_t i = 0; i < s.first_violation.size(); ++i)
    t.rows.push_back({std::to_string(i), std::to_string(s.first_violation[i]), to_decimal(rational_from_double(s.violation_ratio[i]), 6)});
  return Tracker{}.result(s.to_json(), t);
}

OpResult op_tensor_closeness(RunContext& ctx) {
  const auto& p = ctx.params();
  LevelSet f = get_set(ctx, "f");
  std::vector<std::int64_t> rs;
  if (need(p, "r").is_array()) rs = as<std::vector<std::int64_t>>(p.at("r"), "r");
  else rs.push_back(get<std::int64_t>(p, "r"));
  require(!rs.empty(), ErrorCode::ConfigError, "'r' is empty");
  json reports = json::array();
  Table t{{"r", "M", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "eps_hat_hi", "holds"}, {}};
  Tracker tr;
  int d = ctx.config().digits;
  for (auto r : rs) {
    std::int64_t M;
    const json& mj = need(p, "M");
    if (mj.is_object()) M = get<std::int64_t>(mj, "scale") * r + get<std::int64_t>(mj, "offset", std::int64_t(0));
    else M = as<std::int64_t>(mj, "M");
    std::vector<BigInt> powers = p.contains("powers") ? get_lags(ctx, "powers") : slow_growth_powers(ctx.chain(), r, M);
    TensorCloseness c = tensor_closeness(ctx.chain(), f, r, powers, ctx.engine());
    tr.see(c.lhs, c.exhausted);
    tr.see(c.rhs);
    reports.push_back(c.to_json(d));
    t.rows.push_back({std::to_string(r), std::to_string(c.M), to_decimal(c.lhs.lo(), d), to_decimal(c.lhs.hi(), d),
                      to_decimal(c.rhs.lo(), d), to_decimal(c.rhs.hi(), d), to_decimal(c.eps_hat.hi(), d), c.holds ? "1" : "0"});
  }
  return tr.result({{"reports", reports}}, t);
}

OpResult op_staircase_anomaly(RunContext& ctx) {
  const auto& p = ctx.params();
  int d = ctx.config().digits;
  Tracker tr;
  json reports = json::array();
  Table t{{"stage", "lag", "lo", "hi", "exhausted"}, {}};
  auto add = [&](const AnomalyReport& r) {
    tr.see(r.value, r.exhausted);
    reports.push_back(r.to_json(d));
    t.rows.push_back({std::to_string(r.stage), to_string(r.lag), to_decimal(r.value.lo(), d), to_decimal(r.value.hi(), d),
                      r.exhausted ? "1" : "0"});
  };
  if (p.contains("set")) {
    add(anomaly_for(ctx.chain(), get_set(ctx, "set"), ctx.engine()));
  } else {
    std::int64_t fallback = largest_feasible_anomaly_stage(ctx.chain(), ctx.engine().size_cap);
    auto [lo, hi] = stage_span(p, fallback);
    for (std::int64_t j = lo; j <= hi; ++j) add(staircase_anomaly(ctx.chain(), j, ctx.engine()));
  }
  return tr.result({{"reports", reports}}, t);
}

OpResult op_asymmetry_test(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  auto [lo, hi] = stage_span(ctx.params(), a.stage() + 1);
  int d = ctx.config().digits;
  Tracker tr;
  json reports = json::array();
  Table t{{"stage", "one_three_lo", "one_three_hi", "two_three_lo", "two_three_hi", "mu_a_over_3"}, {}};
  for (std::int64_t j = lo; j <= hi; ++j) {
    AsymmetryReport r = asymmetry_test(ctx.chain(), a, j, ctx.engine());
    tr.see(r.one_three);
    tr.see(r.two_three);
    reports.push_back(r.to_json(d));
    t.rows.push_back({std::to_string(j), to_string(r.one_three.lo()), to_string(r.one_three.hi()), to_string(r.two_three.lo()),
                      to_string(r.two_three.hi()), to_string(Rational(r.mu_a / 3))});
  }
  return tr.result({{"reports", reports}}, t);
}

OpResult op_class_alpha(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  WindowRule rule = WindowRule::from_json(need(ctx.params(), "window"));
  auto j_max = get<std::int64_t>(ctx.params(), "j_max");
  ClassAlpha c = class_alpha(ctx.chain(), a, rule, j_max, ctx.engine());
  Tracker tr;
  int d = ctx.config().digits;
  Table t{{"stage", "window_lo", "window_hi", "lo", "hi"}, {}};
  for (const auto& s : c.stages) {
    tr.see(s.conditional);
    t.rows.push_back({std::to_string(s.stage), to_string(s.lo), to_string(s.hi), to_decimal(s.conditional.lo(), d),
                      to_decimal(s.conditional.hi(), d)});
  }
  return tr.result(c.to_json(d), t);
}

OpResult op_wiener_average(RunContext& ctx) {
  std::vector<std::int64_t> Ns;
  const json& nj = need(ctx.params(), "N");
  if (nj.is_array()) Ns = as<std::vector<std::int64_t>>(nj, "N");
  else Ns.push_back(as<std::int64_t>(nj, "N"));
  require(!Ns.empty(), ErrorCode::ConfigError, "'N' is empty");
  CorrelationSeries s = centered_series(ctx, *std::max_element(Ns.begin(), Ns.end()));
  int d = ctx.config().digits;
  Tracker tr;
  for (const auto& pt : s.points) tr.see(pt.value, pt.exhausted);
  json values = json::array();
  Table t{{"N", "lo", "hi"}, {}};
  for (auto N : Ns) {
    Enclosure w = wiener_average(s, N);
    values.push_back({{"N", N}, {"value", enc(w, d)}});
    t.rows.push_back({std::to_string(N), to_decimal(w.lo(), d), to_decimal(w.hi(), d)});
  }
  return tr.result({{"mode", normalization_name(s.mode)}, {"averages", values}, {"exhausted", s.any_exhausted()}}, t);
}

OpResult op_spectral_density(RunContext& ctx) {
  auto N = get<std::int64_t>(ctx.params(), "N");
  auto grid = get<std::int64_t>(ctx.params(), "grid", 256);
  CorrelationSeries s = centered_series(ctx, N);
  Tracker tr;
  for (const auto& pt : s.points) tr.see(pt.value, pt.exhausted);
  auto pts = spectral_density(s, N, grid);
  json arr = json::array();
  Table t{{"angle", "value"}, {}};
  double min_value = pts.empty() ? 0 : pts.front().value;
  for (const auto& q : pts) {
    arr.push_back({{"angle", q.angle}, {"value", q.value}, {"radius", q.radius}});
    t.rows.push_back({to_decimal(rational_from_double(q.angle), 10), to_decimal(rational_from_double(q.value), 10)});
    min_value = std::min(min_value, q.value);
  }
  return tr.result({{"mode", normalization_name(s.mode)}, {"N", N}, {"grid", grid}, {"min_value", min_value}, {"points", arr}}, t);
}

OpResult op_rigidity_scan(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  auto pts = rigidity_scan(ctx.chain(), a, get_lags(ctx, "lags"), ctx.engine());
  Tracker tr;
  for (const auto& q : pts) tr.see(q.value, q.exhausted);
  int d = ctx.config().digits;
  return tr.result({{"mu_a", to_string(a.measure())}, {"points", scan_to_json(pts, d)}}, scan_table(pts, d));
}

OpResult op_mixing_scan(RunContext& ctx) {
  LevelSet a = get_set(ctx, "a");
  LevelSet b = get_set_or(ctx, "b", "a");
  MixingScan m = mixing_scan(ctx.chain(), a, b, get_lags(ctx, "lags"), ctx.engine());
  Tracker tr;
  for (const auto& q : m.points) tr.see(q.value, q.exhausted);
  int d = ctx.config().digits;
  return tr.result(m.to_json(d), scan_table(m.points, d));
}

json info_json(const FamilyInfo& f) {
  json defaults;
  to_json(defaults, default_family(f.name));
  return {{"name", f.name}, {"formula", f.formula}, {"measure", f.measure}, {"notes", f.notes}, {"defaults", defaults}};
}

OpResult op_list_families(RunContext&) {
  json arr = json::array();
  Table t{{"name", "measure", "formula"}, {}};
  for (const auto& f : family_catalog()) {
    arr.push_back(info_json(f));
    t.rows.push_back({f.name, f.measure, f.formula});
  }
  return Tracker{}.result({{"count", arr.size()}, {"families", arr}}, t);
}

OpResult op_describe(RunContext& ctx) {
  return Tracker{}.result(info_json(describe_family(get<std::string>(ctx.params(), "name"))));
}

std::vector<Operation> build_registry() {
  return {
      {"tower_sequence", "heights, level measures, stage vectors and offsets up to a stage", true, op_tower_sequence},
      {"stage_vectors", "the first `count` stage vectors", true, op_stage_vectors},
      {"refine_set", "footprint of a level set at a deeper stage", true, op_refine_set},
      {"decode_level", "stage-J provenance of a stage-K level", true, op_decode_level},
      {"total_measure", "enclosure of mu(X)", true, op_total_measure},
      {"primitive_root", "smallest primitive root mod p", false, op_primitive_root},
      {"trace_sequence", "tr(q^i) in GF(b^n)", false, op_trace_sequence},
      {"validate_injectivity", "distinctness of {g^i} - {g^(i+p)}", false, op_validate_injectivity},
      {"injectivity_sweep", "injectivity over all primes up to a bound and all windows", false, op_injectivity_sweep},
      {"spacer_sum", "S_j(i, p)", true, op_spacer_sum},
      {"spacer_sum_distribution", "histogram of S_j(i, p) over i", true, op_spacer_sum_distribution},
      {"triangular_law", "Ornstein S - pH histogram against the triangular law", true, op_triangular_law},
      {"shifted_intersection", "mu(T^n A ∩ B)", true, op_shifted_intersection},
      {"triple_intersection", "mu(T^n1 A ∩ T^n2 B ∩ C)", true, op_triple_intersection},
      {"symmetric_difference", "mu(T^n A △ A)", true, op_symmetric_difference},
      {"correlation_series", "correlations over a lag list", true, op_correlation_series},
      {"base_correlation_fast", "meet-in-the-middle correlations", true, op_base_correlation_fast},
      {"deep_correlation", "difference-recursion correlations", true, op_deep_correlation},
      {"weak_limit_fit", "non-negative fit of a weak limit of powers", true, op_weak_limit_fit},
      {"averaging_deviation", "||Q_{j,p} f - Θ f||^2", true, op_averaging_deviation},
      {"statistical_D", "D(f, m) for a 0/1 vector", false, op_statistical_D},
      {"stat_lemma_mc", "seeded Monte Carlo of the statistical lemma event", false, op_stat_lemma_mc},
      {"tensor_closeness", "||P F - Q_r F||^2 against ||F||^2 / M + eps", true, op_tensor_closeness},
      {"staircase_anomaly", "nu(T^{2h_j} A ∩ A) - nu(A)^2 on odd levels", true, op_staircase_anomaly},
      {"asymmetry_test", "triple correlations at h, 2h, 3h", true, op_asymmetry_test},
      {"class_alpha", "limsup of conditional union measures", true, op_class_alpha},
      {"wiener_average", "(1/N) sum |gamma(n)|^2", true, op_wiener_average},
      {"spectral_density", "Fejér density on a grid of angles", true, op_spectral_density},
      {"rigidity_scan", "mu(T^n A △ A) over lags", true, op_rigidity_scan},
      {"mixing_scan", "sup |mu(T^n A ∩ B) - mu(A) mu(B) / mu(X)| over lags", true, op_mixing_scan},
      {"list_families", "catalog of schedule families", false, op_list_families},
      {"describe", "parameters and defaults of one family", false, op_describe},
  };
}

}  // namespace

const std::vector<Operation>& operations() {
  static const std::vector<Operation> registry = build_registry();
  return registry;
}

const Operation* find_operation(const std::string& name) {
  std::string n = normalize_operation(name);
  for (const auto& op : operations())
    if (op.name == n) return &op;
  return nullptr;
}

std::vector<BigInt> parse_lags(const json& spec, const TowerChain* chain) {
  std::vector<BigInt> lags;
  auto big = [](const json& v) {
    try {
      return big_from_json(v);
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, "lag is not an integer");
    }
  };
  if (spec.is_array()) {
    for (const auto& v : spec) lags.push_back(big(v));
  } else if (spec.is_object() && spec.contains("range")) {
    const json& r = spec.at("range");
    require(r.is_array() && r.size() == 2, ErrorCode::ConfigError, "'range' must be [lo, hi]");
    BigInt lo = big(r[0]), hi = big(r[1]);
    BigInt step = spec.contains("step") ? big(spec.at("step")) : BigInt(1);
    require(step > 0, ErrorCode::ConfigError, "'step' must be positive");
    require((hi - lo) / step < 10'000'000, ErrorCode::ConfigError, "lag range too long");
    for (BigInt n = lo; n <= hi; n += step) lags.push_back(n);
  } else if (spec.is_object() && spec.contains("heights")) {
    require(chain != nullptr, ErrorCode::ConfigError, "height lags need a schedule");
    const json& h = spec.at("heights");
    require(h.is_array() && h.size() == 2, ErrorCode::ConfigError, "'heights' must be [j_lo, j_hi]");
    auto lo = as<std::int64_t>(h[0], "heights"), hi = as<std::int64_t>(h[1], "heights");
    BigInt scale = spec.contains("scale") ? big(spec.at("scale")) : BigInt(1);
    BigInt offset = spec.contains("offset") ? big(spec.at("offset")) : BigInt(0);
    for (std::int64_t j = lo; j <= hi; ++j) lags.push_back(scale * chain->height(j) + offset);
  } else {
    fail(ErrorCode::ConfigError, "lags must be an array, {\"range\": ...} or {\"heights\": ...}");
  }
  require(!lags.empty(), ErrorCode::ConfigError, "empty lag list");
  return lags;
}

}  // namespace rankone::app
