#include "rankone/families.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "rankone/error.hpp"
#include "rankone/finite_field.hpp"

namespace rankone {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

StageVector zeros(std::int64_t r) {
  StageVector v;
  v.r = r;
  v.spacers.assign(static_cast<std::size_t>(r), BigInt(0));
  return v;
}

StageVector from_list(std::vector<BigInt> s) {
  StageVector v;
  v.r = static_cast<std::int64_t>(s.size());
  v.spacers = std::move(s);
  return v;
}

std::int64_t columns_at(const Rule& rule, std::int64_t j) {
  std::int64_t r = rule.at_small(j, "cutting parameter");
  require(r >= 2, ErrorCode::InvalidSchedule, "cutting parameter r < 2 at stage " + std::to_string(j));
  require(r <= (1 << 24), ErrorCode::ScaleExceeded, "cutting parameter too large at stage " + std::to_string(j));
  return r;
}

std::shared_ptr<const GaloisField> cached_field(std::uint32_t b, std::uint32_t n) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const GaloisField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(b, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto field = std::make_shared<const GaloisField>(b, n);
  cache.emplace(key, field);
  return field;
}

std::uint64_t cached_nth_prime(std::uint64_t k) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  std::lock_guard<std::mutex> lock(mu);
  std::uint64_t limit = primes.empty() ? 64 : primes.back();
  while (primes.size() < k) {
    limit *= 2;
    primes = primes_up_to(limit);
  }
  return primes[k - 1];
}

using Rule_ = SpacerSchedule::StageRule;
using Cap_ = SpacerSchedule::MassCap;

struct Built {
  std::int64_t start_stage = 1;
  BigInt start_height{1};
  Rule_ rule;
  MeasureClass measure = MeasureClass::Finite;
  Cap_ cap;
};

Built build(const family::Odometer& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) { return zeros(columns_at(f.r, j)); };
  b.cap = [](std::int64_t, const BigInt&) { return BigInt(0); };
  return b;
}

Built build_fixed(std::vector<BigInt> s) {
  Built b;
  BigInt total = 0;
  for (const auto& x : s) total += x;
  b.rule = [s](std::int64_t, const BigInt&) { return from_list(s); };
  b.cap = [total](std::int64_t, const BigInt&) { return total; };
  return b;
}

Built build(const family::DelJuncoRudolph& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    StageVector v = zeros(columns_at(f.r, j));
    v.spacers[static_cast<std::size_t>(v.r / 2)] = 1;
    return v;
  };
  b.cap = [](std::int64_t, const BigInt&) { return BigInt(1); };
  return b;
}

Built build(const family::Katok& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    StageVector v = zeros(columns_at(f.r, j));
    for (std::int64_t i = v.r / 2; i < v.r; ++i) v.spacers[static_cast<std::size_t>(i)] = 1;
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    std::int64_t r = columns_at(f.r, j);
    return BigInt(static_cast<long>(r - r / 2));
  };
  return b;
}

Built build(const family::Semibounded& f) {
  require(f.columns >= 2, ErrorCode::InvalidSchedule, "semibounded needs at least 2 columns");
  require(f.position >= 1 && f.position <= f.columns, ErrorCode::InvalidSchedule, "semibounded position out of range");
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    StageVector v = zeros(f.columns);
    BigInt s = f.s.at(j);
    require(s >= 0, ErrorCode::InvalidSchedule, "negative spacer rule value at stage " + std::to_string(j));
    v.spacers[static_cast<std::size_t>(f.position - 1)] = s;
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) { return f.s.at(j); };
  return b;
}

Built build(const family::Ornstein& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    auto a = ornstein_draws(f, j);
    std::int64_t r = static_cast<std::int64_t>(a.size()) - 1;
    BigInt H = f.H.at(j);
    StageVector v;
    v.r = r;
    v.spacers.reserve(static_cast<std::size_t>(r));
    for (std::int64_t i = 0; i < r; ++i) {
      v.spacers.push_back(H + BigInt(static_cast<unsigned long>(a[static_cast<std::size_t>(i)])) -
                          BigInt(static_cast<unsigned long>(a[static_cast<std::size_t>(i + 1)])));
    }
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    BigInt H = f.H.at(j);
    return BigInt(BigInt(static_cast<long>(columns_at(f.r, j))) * H + H - 1);
  };
  return b;
}

Built build(const family::Staircase& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    StageVector v;
    v.r = columns_at(f.r, j);
    for (std::int64_t i = 1; i <= v.r; ++i) v.spacers.emplace_back(static_cast<long>(i));
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    BigInt r(static_cast<long>(columns_at(f.r, j)));
    return BigInt(r * (r + 1) / 2);
  };
  return b;
}

std::uint64_t galois_prime(const family::GaloisPrimitive& f, std::int64_t j) {
  BigInt target = f.prime.at(j);
  require(target.fits_slong_p() && target < BigInt(1L << 24), ErrorCode::ScaleExceeded, "prime rule value too large");
  long t = target.get_si();
  return next_prime(static_cast<std::uint64_t>(t < 2 ? 2 : t));
}

Built build(const family::GaloisPrimitive& f) {
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    std::uint64_t r = galois_prime(f, j);
    std::uint64_t q = primitive_root(r);
    StageVector v;
    v.r = static_cast<std::int64_t>(r);
    std::uint64_t x = q;  // {q^1}
    for (std::uint64_t i = 1; i <= r; ++i) {
      std::uint64_t nx = x * q % r;
      v.spacers.emplace_back(static_cast<unsigned long>(r + x - nx));
      x = nx;
    }
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    BigInt r(static_cast<unsigned long>(galois_prime(f, j)));
    return BigInt(r * r + r);
  };
  return b;
}

Built build(const family::GaloisTrace& f) {
  require(f.b >= 2 && is_prime(static_cast<std::uint64_t>(f.b)), ErrorCode::InvalidSchedule, "galois_trace base b must be prime");
  Built b;
  auto degree = [f](std::int64_t j) {
    std::int64_t n = f.n.at_small(j, "field degree");
    require(n >= 1 && n <= 32, ErrorCode::InvalidSchedule, "field degree out of range at stage " + std::to_string(j));
    BigInt size = ipow(BigInt(static_cast<long>(f.b)), static_cast<unsigned long>(n));
    require(size >= 3, ErrorCode::InvalidSchedule, "b^n - 1 < 2 at stage " + std::to_string(j));
    require(size <= BigInt(1L << 24), ErrorCode::ScaleExceeded, "b^n too large at stage " + std::to_string(j));
    return static_cast<std::uint32_t>(n);
  };
  b.rule = [f, degree](std::int64_t j, const BigInt&) {
    auto field = cached_field(static_cast<std::uint32_t>(f.b), degree(j));
    std::uint64_t r = field->order() - 1;
    std::uint64_t q = field->generator();
    StageVector v;
    v.r = static_cast<std::int64_t>(r);
    std::uint64_t x = q;
    std::uint32_t tx = field->trace(x);
    for (std::uint64_t i = 1; i <= r; ++i) {
      std::uint64_t nx = field->mul(x, q);
      std::uint32_t tn = field->trace(nx);
      v.spacers.emplace_back(static_cast<long>(f.b + static_cast<std::int64_t>(tx) - static_cast<std::int64_t>(tn)));
      x = nx;
      tx = tn;
    }
    return v;
  };
  b.cap = [f, degree](std::int64_t j, const BigInt&) {
    BigInt size = ipow(BigInt(static_cast<long>(f.b)), degree(j));
    return BigInt((size - 1) * f.b + f.b);
  };
  return b;
}

Built build(const family::Sidon& f) {
  require(f.c > 1, ErrorCode::InvalidSchedule, "sidon ratio c must exceed 1");
  Built b;
  b.measure = MeasureClass::Infinite;
  b.rule = [f](std::int64_t j, const BigInt& h) {
    StageVector v;
    v.r = columns_at(f.r, j);
    BigInt s = ceil(Rational(f.c * h));
    for (std::int64_t i = 0; i < v.r; ++i) {
      v.spacers.push_back(s);
      s = ceil(Rational(f.c * s));
    }
    return v;
  };
  return b;
}

Built build(const family::SelfSimilar& f) {
  require(f.v.size() >= 2, ErrorCode::InvalidSchedule, "self-similar vector needs at least 2 entries");
  Built b;
  BigInt total = 0;
  for (const auto& x : f.v) {
    require(x >= 0, ErrorCode::InvalidSchedule, "negative self-similar entry");
    total += x;
  }
  b.measure = total > 0 ? MeasureClass::Infinite : MeasureClass::Finite;
  b.rule = [f](std::int64_t, const BigInt& h) {
    StageVector v;
    v.r = static_cast<std::int64_t>(f.v.size());
    for (const auto& x : f.v) v.spacers.push_back(h * x);
    return v;
  };
  b.cap = [total](std::int64_t, const BigInt& h) { return BigInt(total * h); };
  return b;
}

Built build(const family::SlowGrowth& f) {
  require(f.r_min >= 2, ErrorCode::InvalidSchedule, "slow growth needs r_min >= 2");
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    std::int64_t r = slow_growth_r(f, j);
    StageVector v;
    v.r = r;
    for (std::int64_t i = 1; i < r; ++i) v.spacers.emplace_back(static_cast<long>(i));
    v.spacers.emplace_back(0L);
    return v;
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    BigInt r(static_cast<long>(slow_growth_r(f, j)));
    return BigInt(r * (r - 1) / 2);
  };
  return b;
}

Built build(const family::Factorial&) {
  Built b;
  b.start_stage = 2;
  b.start_height = 2;
  b.measure = MeasureClass::Infinite;
  b.rule = [](std::int64_t j, const BigInt&) {
    StageVector v;
    v.r = j;
    BigInt s = factorial(static_cast<unsigned long>(j - 1));
    v.spacers.assign(static_cast<std::size_t>(j), s);
    return v;
  };
  return b;
}

Built build(const family::Binomial&) {
  Built b;
  b.rule = [](std::int64_t j, const BigInt&) {
    StageVector v;
    v.r = j + 1;
    for (std::int64_t u = 1; u <= j + 1; ++u) v.spacers.push_back(binomial(static_cast<unsigned long>(j), static_cast<unsigned long>(u - 1)));
    return v;
  };
  b.cap = [](std::int64_t j, const BigInt&) { return ipow(BigInt(2), static_cast<unsigned long>(j)); };
  return b;
}

Built build(const family::PrimeSpacers&) {
  Built b;
  b.rule = [](std::int64_t j, const BigInt&) {
    return from_list({BigInt(0), BigInt(static_cast<unsigned long>(cached_nth_prime(static_cast<std::uint64_t>(j)))), BigInt(0)});
  };
  b.cap = [](std::int64_t j, const BigInt&) { return BigInt(static_cast<unsigned long>(cached_nth_prime(static_cast<std::uint64_t>(j)))); };
  return b;
}

Built build(const family::CustomFixed& f) {
  require(!f.vectors.empty(), ErrorCode::InvalidSchedule, "custom schedule needs at least one vector");
  for (std::size_t k = 0; k < f.vectors.size(); ++k) validate_stage_vector(from_list(f.vectors[k]), static_cast<std::int64_t>(k + 1));
  Built b;
  b.rule = [f](std::int64_t j, const BigInt&) {
    return from_list(f.vectors[static_cast<std::size_t>((j - 1) % static_cast<std::int64_t>(f.vectors.size()))]);
  };
  b.cap = [f](std::int64_t j, const BigInt&) {
    return from_list(f.vectors[static_cast<std::size_t>((j - 1) % static_cast<std::int64_t>(f.vectors.size()))]).spacer_total();
  };
  return b;
}

}  // namespace

std::mt19937_64 stage_rng(std::uint64_t seed, std::int64_t stage) {
  auto st = static_cast<std::uint64_t>(stage);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(st), static_cast<std::uint32_t>(st >> 32), 0x52414e4bu};
  return std::mt19937_64(seq);
}

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  require(bound > 0, ErrorCode::InvalidParam, "uniform_below needs a positive bound");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    std::uint64_t x = gen();
    if (x >= threshold) return x % bound;
  }
}

std::vector<std::uint64_t> ornstein_draws(const family::Ornstein& spec, std::int64_t stage) {
  std::int64_t r = columns_at(spec.r, stage);
  BigInt H = spec.H.at(stage);
  require(H >= 1 && H.fits_slong_p(), ErrorCode::InvalidSchedule, "Ornstein H must be a positive machine integer");
  auto gen = stage_rng(spec.seed, stage);
  std::vector<std::uint64_t> a(static_cast<std::size_t>(r + 1));
  for (auto& x : a) x = uniform_below(gen, static_cast<std::uint64_t>(H.get_si()));
  return a;
}

std::int64_t slow_growth_block_start(const family::SlowGrowth& spec, std::int64_t r) {
  require(r >= spec.r_min, ErrorCode::InvalidParam, "r below r_min");
  BigInt start = 1;
  for (std::int64_t q = spec.r_min; q < r; ++q) {
    BigInt len = spec.N.at(q);
    require(len >= 1, ErrorCode::InvalidSchedule, "block length N(r) must be >= 1");
    start += len;
  }
  require(start.fits_slong_p(), ErrorCode::ScaleExceeded, "block start beyond machine range");
  return start.get_si();
}

std::int64_t slow_growth_r(const family::SlowGrowth& spec, std::int64_t stage) {
  BigInt start = 1;
  for (std::int64_t r = spec.r_min;; ++r) {
    BigInt len = spec.N.at(r);
    require(len >= 1, ErrorCode::InvalidSchedule, "block length N(r) must be >= 1");
    if (BigInt(static_cast<long>(stage)) < start + len) return r;
    start += len;
  }
}

SpacerSchedule make_schedule(const FamilySpec& spec) {
  Built b = std::visit(overloaded{
                           [](const family::Odometer& f) { return build(f); },
                           [](const family::ChaconClassical&) { return build_fixed({BigInt(0), BigInt(1)}); },
                           [](const family::ChaconModified&) { return build_fixed({BigInt(0), BigInt(1), BigInt(0)}); },
                           [](const family::Chacon231&) { return build_fixed({BigInt(2), BigInt(3), BigInt(1)}); },
                           [](const auto& f) { return build(f); },
                       },
                       spec);
  return SpacerSchedule(spec, b.start_stage, b.start_height, std::move(b.rule), b.measure, std::move(b.cap));
}

SpacerSchedule make_schedule(const std::string& family_name) { return make_schedule(default_family(family_name)); }

}  // namespace rankone
