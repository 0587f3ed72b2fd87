#include <algorithm>
#include <cmath>

#include "rankone/analysis.hpp"
#include "rankone/json_util.hpp"
#include "rankone/nnls.hpp"

namespace rankone {

const PowerFit& LimitFit::headline() const {
  require(!fits.empty(), ErrorCode::InvalidParam, "empty fit");
  auto it = std::max_element(fits.begin(), fits.end(),
                             [](const PowerFit& x, const PowerFit& y) { return abs(x.power) < abs(y.power); });
  return *it;
}

nlohmann::json LimitFit::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fits) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < f.coefficients.size(); ++i)
      coeffs.push_back({{"k", k_min + static_cast<std::int64_t>(i)}, {"a", f.coefficients[i]}});
    arr.push_back({{"power", big_to_json(f.power)},
                   {"coefficients", coeffs},
                   {"theta", f.theta},
                   {"unassigned", f.unassigned},
                   {"residual", f.residual},
                   {"ls_residual", f.ls_residual},
                   {"max_width", f.max_width}});
  }
  return {{"family", family}, {"test_stage", test_stage}, {"k_min", k_min}, {"k_max", k_max},
          {"normalized", normalized}, {"fits", arr}};
}

namespace {

// Matrix of <T̂^k χ_a, χ_b> over (a, b), flattened row-major, as midpoints.
struct FormTable {
  std::vector<double> values;
  double max_width = 0;
};

void add(FormTable& t, const Enclosure& e, const Enclosure& scale, bool normalized) {
  Enclosure v = normalized ? e / scale : e;
  t.values.push_back(v.mid_double());
  t.max_width = std::max(t.max_width, v.width().get_d());
}

// One table per power k. The difference recursion evaluates every power of a
// pair in one memoised pass; refine_decode decodes one source row at a time.
std::vector<FormTable> forms(const TowerChain& chain, std::int64_t stage, const std::vector<BigInt>& ks, const Enclosure& scale,
                             bool normalized, const EngineOptions& opts) {
  const std::int64_t h = chain.height(stage).get_si();
  std::vector<FormTable> tables(ks.size());
  for (auto& t : tables) t.values.reserve(static_cast<std::size_t>(h * h));
  if (opts.method == Method::RefineDecode) {
    std::vector<Level> all(static_cast<std::size_t>(h));
    for (std::int64_t l = 0; l < h; ++l) all[static_cast<std::size_t>(l)] = l;
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::int64_t a = 0; a < h; ++a) {
        LevelSet src(stage, {static_cast<Level>(a)}, chain);
        for (auto& e : intersection_row(chain, src, BigInt(-ks[i]), all, stage, opts)) add(tables[i], e, scale, normalized);
      }
    return tables;
  }
  std::vector<BigInt> lags;
  for (const auto& k : ks) lags.push_back(-k);
  for (std::int64_t a = 0; a < h; ++a) {
    LevelSet src(stage, {static_cast<Level>(a)}, chain);
    for (std::int64_t b = 0; b < h; ++b) {
      LevelSet dst(stage, {static_cast<Level>(b)}, chain);
      CorrelationSeries s = deep_correlation(chain, src, dst, lags, opts);
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const CorrelationPoint& p = s.points[i];
        if (!p.exhausted) {
          add(tables[i], p.value, scale, normalized);
        } else if (opts.method == Method::Auto) {
          EngineOptions o = opts;
          o.method = Method::RefineDecode;
          add(tables[i], shifted_intersection(chain, src, lags[i], dst, o), scale, normalized);
        } else {
          throw BudgetExceeded(ErrorCode::StageBudgetExceeded, "weak_limit_fit: " + p.note, p.value);
        }
      }
    }
  }
  return tables;
}

}  // namespace

LimitFit weak_limit_fit(const TowerChain& chain, const std::vector<BigInt>& powers, std::int64_t k_min, std::int64_t k_max,
                        std::int64_t test_stage, const EngineOptions& opts) {
  require(!powers.empty(), ErrorCode::InvalidParam, "weak_limit_fit needs at least one power");
  require(k_min <= k_max, ErrorCode::InvalidParam, "empty coefficient window");
  require(test_stage >= chain.start_stage(), ErrorCode::OutOfRange, "test stage precedes the start stage");
  const BigInt& hb = chain.height(test_stage);
  if (hb < 2) fail(ErrorCode::IllConditioned, "test family needs at least 2 distinct levels");
  require(hb <= 4096, ErrorCode::SizeBudgetExceeded, "test stage has too many levels to enumerate pairs");

  LimitFit fit;
  fit.family = chain.schedule().family();
  fit.test_stage = test_stage;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.normalized = chain.schedule().measure_class() == MeasureClass::Finite;
  Enclosure mx = fit.normalized ? space_measure(chain) : Enclosure(Rational(1));

  std::vector<BigInt> ks;
  for (std::int64_t k = k_min; k <= k_max; ++k) ks.emplace_back(static_cast<long>(k));
  const std::size_t nb = ks.size();
  ks.insert(ks.end(), powers.begin(), powers.end());
  std::vector<FormTable> tables = forms(chain, test_stage, ks, mx, fit.normalized, opts);
  std::vector<FormTable> basis(tables.begin(), tables.begin() + static_cast<std::ptrdiff_t>(nb));
  double basis_width = 0;
  for (const auto& b : basis) basis_width = std::max(basis_width, b.max_width);
  const std::size_t rows = basis.front().values.size();
  // Θ column: <Θ χ_a, χ_b> = nu(L_a) nu(L_b).
  const double theta_col = fit.normalized ? (Enclosure(chain.level_measure(test_stage)) / mx).square().mid_double() : 0.0;
  const std::size_t cols = basis.size() + (fit.normalized ? 1 : 0);

  std::vector<std::vector<double>> design(rows, std::vector<double>(cols, 0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) design[r][c] = basis[c].values[r];
    if (fit.normalized) design[r][basis.size()] = theta_col;
  }

  for (std::size_t pi = 0; pi < powers.size(); ++pi) {
    const BigInt& p = powers[pi];
    const FormTable& target = tables[nb + pi];
    NnlsResult sol = nnls(design, target.values);
    std::vector<double> x = project_capped_simplex(sol.x, 1.0);
    PowerFit pf;
    pf.power = p;
    pf.coefficients.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(basis.size()));
    pf.theta = fit.normalized ? x.back() : 0.0;
    double mass = 0;
    for (double v : x) mass += v;
    pf.unassigned = 1.0 - mass;
    pf.ls_residual = sol.residual_norm;
    pf.max_width = std::max(basis_width, target.max_width);
    double worst = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      double model = 0;
      for (std::size_t c = 0; c < cols; ++c) model += design[r][c] * x[c];
      worst = std::max(worst, std::abs(model - target.values[r]));
    }
    pf.residual = worst;
    fit.fits.push_back(std::move(pf));
  }
  return fit;
}

}  // namespace rankone
