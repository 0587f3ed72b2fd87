#include <algorithm>
#include <set>
#include <variant>

#include "rankone/analysis.hpp"
#include "rankone/families.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

namespace {

nlohmann::json enc_json(const Enclosure& e, int digits) {
  return {{"lo", to_decimal(e.lo(), digits)}, {"hi", to_decimal(e.hi(), digits)}, {"width", to_decimal(e.width(), digits)}};
}

Enclosure max_of(const Enclosure& a, const Enclosure& b) { return Enclosure(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())); }

}  // namespace

nlohmann::json TensorCloseness::to_json(int digits) const {
  nlohmann::json pw = nlohmann::json::array();
  for (const auto& p : powers) pw.push_back(big_to_json(p));
  return {{"r", r},           {"M", M},
          {"powers", pw},     {"lhs", enc_json(lhs, digits)},
          {"norm_sq", enc_json(norm_sq, digits)}, {"qq", enc_json(qq, digits)},
          {"eps_hat", enc_json(eps_hat, digits)}, {"rhs", enc_json(rhs, digits)},
          {"holds", holds},   {"exhausted", exhausted}};
}

std::vector<BigInt> slow_growth_powers(const TowerChain& chain, std::int64_t r, std::int64_t M) {
  const auto* spec = std::get_if<family::SlowGrowth>(&chain.schedule().spec());
  require(spec != nullptr, ErrorCode::InvalidParam, "slow-growth powers need a SlowGrowth schedule");
  require(M >= 1, ErrorCode::InvalidParam, "M must be positive");
  std::int64_t jr = slow_growth_block_start(*spec, r);
  std::vector<BigInt> out;
  for (std::int64_t m = 1; m <= M; ++m) out.push_back(chain.height(jr + m));
  return out;
}

TensorCloseness tensor_closeness(const TowerChain& chain, const LevelSet& f, std::int64_t r, const std::vector<BigInt>& powers,
                                 const EngineOptions& opts) {
  require(r >= 1, ErrorCode::InvalidParam, "Q_r needs r >= 1");
  require(!powers.empty(), ErrorCode::InvalidParam, "tensor closeness needs at least one power");
  require(chain.schedule().measure_class() == MeasureClass::Finite, ErrorCode::UnboundedMeasure,
          "tensor closeness uses normalized correlations");
  const auto M = static_cast<std::int64_t>(powers.size());

  std::set<BigInt> need;
  for (std::int64_t d = 1; d < r; ++d) need.insert(BigInt(static_cast<long>(d)));
  for (std::size_t a = 0; a < powers.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) need.insert(BigInt(abs(powers[a] - powers[b])));
    for (std::int64_t i = 0; i < r; ++i) need.insert(BigInt(abs(powers[a] - i)));
  }
  need.erase(BigInt(0));
  std::vector<BigInt> lags(need.begin(), need.end());

  EngineOptions o = opts;
  if (o.method == Method::Auto) o.method = Method::DifferenceRecursion;
  CorrelationSeries raw = o.method == Method::DifferenceRecursion ? deep_correlation(chain, f, f, lags, o)
                                                                  : correlation_series(chain, f, f, lags, Normalization::Raw, o);
  Enclosure mx = space_measure(chain);
  std::map<BigInt, Enclosure> g2;
  TensorCloseness out;
  for (const auto& p : raw.points) {
    g2[p.lag] = (p.value / mx).square();
    out.exhausted = out.exhausted || p.exhausted;
  }
  g2[BigInt(0)] = (Enclosure(f.measure()) / mx).square();
  auto G = [&](const BigInt& d) -> const Enclosure& { return g2.at(BigInt(abs(d))); };

  const Rational Mq(M), rq(r);
  Enclosure pp(Rational(0)), pq(Rational(0)), qq(Rational(0));
  for (const auto& a : powers)
    for (const auto& b : powers) pp += G(BigInt(a - b));
  pp = pp / (Mq * Mq);
  std::vector<Enclosure> cross(powers.size(), Enclosure(Rational(0)));
  for (std::size_t m = 0; m < powers.size(); ++m) {
    for (std::int64_t i = 0; i < r; ++i) cross[m] += G(BigInt(powers[m] - i));
    cross[m] = cross[m] / rq;
    pq += cross[m];
  }
  pq = pq / Mq;
  for (std::int64_t i = 0; i < r; ++i)
    for (std::int64_t k = 0; k < r; ++k) qq += G(BigInt(static_cast<long>(i - k)));
  qq = qq / (rq * rq);

  Enclosure eps(Rational(0));
  for (std::size_t m = 0; m < powers.size(); ++m) {
    eps = max_of(eps, (cross[m] - qq).abs());
    for (std::size_t n = m + 1; n < powers.size(); ++n) eps = max_of(eps, (G(BigInt(powers[m] - powers[n])) - qq).abs());
  }

  out.r = r;
  out.M = M;
  out.powers = powers;
  Enclosure lhs = pp - pq * Rational(2) + qq;
  out.lhs = Enclosure(std::max(lhs.lo(), Rational(0)), std::max(lhs.hi(), Rational(0)));
  out.norm_sq = G(BigInt(0));
  out.qq = qq;
  out.eps_hat = eps;
  out.rhs = out.norm_sq / Mq + eps;
  out.holds = out.lhs.hi() <= out.rhs.lo();
  return out;
}

}  // namespace rankone
