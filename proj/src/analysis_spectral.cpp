#include <cmath>
#include <numbers>

#include "rankone/analysis.hpp"

namespace rankone {

namespace {

std::vector<const CorrelationPoint*> first_lags(const CorrelationSeries& s, std::int64_t N) {
  require(N >= 1, ErrorCode::InvalidParam, "N must be positive");
  std::vector<const CorrelationPoint*> out;
  for (std::int64_t n = 0; n < N; ++n) {
    const CorrelationPoint* p = s.find(BigInt(static_cast<long>(n)));
    if (p == nullptr) fail(ErrorCode::MissingLags, "series lacks lag " + std::to_string(n));
    out.push_back(p);
  }
  return out;
}

}  // namespace

Enclosure wiener_average(const CorrelationSeries& series, std::int64_t N) {
  auto pts = first_lags(series, N);
  Enclosure acc(Rational(0));
  for (const auto* p : pts) acc += p->value.abs().square();
  return acc / Rational(N);
}

std::vector<DensityPoint> spectral_density(const CorrelationSeries& series, std::int64_t N, std::int64_t grid) {
  require(grid >= 1, ErrorCode::InvalidParam, "grid must be positive");
  auto pts = first_lags(series, N);
  std::vector<double> mid, half;
  for (const auto* p : pts) {
    mid.push_back(p->value.mid_double());
    half.push_back(p->value.width().get_d() / 2);
  }
  std::vector<DensityPoint> out;
  out.reserve(static_cast<std::size_t>(grid));
  for (std::int64_t k = 0; k < grid; ++k) {
    double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
    DensityPoint d;
    d.angle = theta;
    d.value = mid[0];
    d.radius = half[0];
    for (std::int64_t n = 1; n < N; ++n) {
      double w = 2.0 * (1.0 - static_cast<double>(n) / static_cast<double>(N));
      d.value += w * mid[static_cast<std::size_t>(n)] * std::cos(static_cast<double>(n) * theta);
      d.radius += w * half[static_cast<std::size_t>(n)];
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace rankone
