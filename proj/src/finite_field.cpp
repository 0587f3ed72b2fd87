#include "rankone/finite_field.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

#include "rankone/error.hpp"

namespace rankone {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

using Poly = std::vector<std::uint32_t>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a modulo the monic polynomial m, coefficients mod b.
Poly poly_mod(Poly a, const Poly& m, std::uint32_t b) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t k = 0; k <= dm; ++k) {
        std::uint64_t sub = static_cast<std::uint64_t>(lead) * m[k] % b;
        a[k + shift] = static_cast<std::uint32_t>((a[k + shift] + b - sub) % b);
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  std::uint64_t r = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t k = i * i; k <= n; k += i) composite[k] = true;
  }
  return out;
}

std::uint64_t nth_prime(std::uint64_t k) {
  require(k >= 1, ErrorCode::InvalidParam, "nth_prime needs k >= 1");
  std::uint64_t limit = 16;
  while (true) {
    auto ps = primes_up_to(limit);
    if (ps.size() >= k) return ps[k - 1];
    limit *= 2;
  }
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      f.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::uint64_t primitive_root(std::uint64_t p) {
  require(is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (p == 2) return 1;
  auto factors = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : factors) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(ErrorCode::NoGenerator, "no primitive root mod " + std::to_string(p));
}

bool is_irreducible(std::uint32_t b, const std::vector<std::uint32_t>& monic) {
  require(is_prime(b), ErrorCode::NotPrime, "field characteristic must be prime");
  Poly f = monic;
  trim(f);
  require(!f.empty() && f.back() == 1, ErrorCode::InvalidParam, "modulus must be monic");
  const std::size_t n = f.size() - 1;
  if (n == 0) return false;
  if (n == 1) return true;
  // Trial division by every monic polynomial of degree 1 .. n/2.
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < d; ++k) count *= b;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1);
      std::uint64_t c = code;
      for (std::size_t k = 0; k < d; ++k) {
        g[k] = static_cast<std::uint32_t>(c % b);
        c /= b;
      }
      g[d] = 1;
      if (poly_mod(f, g, b).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> first_irreducible(std::uint32_t b, std::uint32_t n) {
  require(is_prime(b), ErrorCode::NotPrime, "field characteristic must be prime");
  require(n >= 1, ErrorCode::InvalidParam, "field degree must be >= 1");
  std::uint64_t count = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    count *= b;
    require(count <= (1ull << 32), ErrorCode::ScaleExceeded, "field too large");
  }
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f(n + 1);
    std::uint64_t c = code;
    for (std::uint32_t k = 0; k < n; ++k) {
      f[k] = static_cast<std::uint32_t>(c % b);
      c /= b;
    }
    f[n] = 1;
    if (is_irreducible(b, f)) return f;
  }
  fail(ErrorCode::NotIrreducible, "no irreducible polynomial found");
}

GaloisField::GaloisField(std::uint32_t b, std::uint32_t n) : GaloisField(b, first_irreducible(b, n)) {}

GaloisField::GaloisField(std::uint32_t b, std::vector<std::uint32_t> modulus) : b_(b), f_(std::move(modulus)) {
  trim(f_);
  if (!is_irreducible(b_, f_)) fail(ErrorCode::NotIrreducible, "modulus is reducible over F_" + std::to_string(b));
  n_ = static_cast<std::uint32_t>(f_.size() - 1);
  size_ = 1;
  for (std::uint32_t k = 0; k < n_; ++k) size_ *= b_;
  init_trace();
}

std::vector<std::uint32_t> GaloisField::decode(std::uint64_t x) const {
  std::vector<std::uint32_t> c(n_);
  for (std::uint32_t k = 0; k < n_; ++k) {
    c[k] = static_cast<std::uint32_t>(x % b_);
    x /= b_;
  }
  return c;
}

std::uint64_t GaloisField::encode(const std::vector<std::uint32_t>& c) const {
  std::uint64_t x = 0;
  for (std::size_t k = c.size(); k-- > 0;) x = x * b_ + c[k];
  return x;
}

std::uint64_t GaloisField::mul(std::uint64_t x, std::uint64_t y) const {
  auto a = decode(x);
  auto c = decode(y);
  Poly prod(2 * n_, 0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (std::uint32_t k = 0; k < n_; ++k) {
      prod[i + k] = static_cast<std::uint32_t>((prod[i + k] + static_cast<std::uint64_t>(a[i]) * c[k]) % b_);
    }
  }
  Poly r = poly_mod(prod, f_, b_);
  r.resize(n_, 0);
  return encode(r);
}

std::uint64_t GaloisField::pow(std::uint64_t x, std::uint64_t e) const {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

void GaloisField::init_trace() {
  // tr is F_b-linear, so tabulate it on the basis 1, x, ..., x^(n-1).
  basis_trace_.assign(n_, 0);
  for (std::uint32_t k = 0; k < n_; ++k) {
    std::uint64_t e = 1;
    for (std::uint32_t t = 0; t < k; ++t) e *= b_;
    std::uint64_t y = e;
    std::vector<std::uint32_t> acc(n_, 0);
    for (std::uint32_t s = 0; s < n_; ++s) {
      auto c = decode(y);
      for (std::uint32_t t = 0; t < n_; ++t) acc[t] = (acc[t] + c[t]) % b_;
      y = pow(y, b_);
    }
    for (std::uint32_t t = 1; t < n_; ++t) {
      require(acc[t] == 0, ErrorCode::NotIrreducible, "trace left the prime field");
    }
    basis_trace_[k] = acc[0];
  }
}

std::uint32_t GaloisField::trace(std::uint64_t x) const {
  std::uint64_t t = 0;
  for (std::uint32_t k = 0; k < n_; ++k) {
    t += static_cast<std::uint64_t>(x % b_) * basis_trace_[k];
    x /= b_;
  }
  return static_cast<std::uint32_t>(t % b_);
}

std::uint64_t GaloisField::generator() const {
  const std::uint64_t N = size_ - 1;
  if (N == 1) return 1;
  auto factors = prime_factors(N);
  for (std::uint64_t g = 2; g < size_; ++g) {
    bool ok = true;
    for (auto q : factors) {
      if (pow(g, N / q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(ErrorCode::NoGenerator, "multiplicative group has no generator");
}

std::vector<std::uint32_t> trace_sequence(std::uint32_t b, std::uint32_t n, std::uint64_t count, std::uint64_t start) {
  GaloisField field(b, n);
  std::uint64_t q = field.generator();
  std::uint64_t x = field.pow(q, start);
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(field.trace(x));
    x = field.mul(x, q);
  }
  return out;
}

namespace {

bool injective_window(const std::vector<std::uint32_t>& pw, std::uint64_t r, std::uint64_t p,
                      std::vector<std::uint32_t>& stamp, std::uint32_t tag) {
  // Differences lie in (-r, r); offset by r for indexing.
  const std::uint64_t n = r - p;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t idx = static_cast<std::uint64_t>(pw[i]) + r - pw[i + p];
    if (stamp[idx] == tag) return false;
    stamp[idx] = tag;
  }
  return true;
}

std::vector<std::uint32_t> power_table(std::uint64_t r, std::uint64_t g) {
  std::vector<std::uint32_t> pw(r);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    pw[i] = static_cast<std::uint32_t>(x);
    x = x * g % r;
  }
  return pw;
}

struct PrimeResult {
  std::uint64_t windows = 0;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::uint64_t first_window = 0;
};

PrimeResult sweep_prime(std::uint64_t r) {
  PrimeResult res;
  std::uint64_t g = primitive_root(r);
  auto pw = power_table(r, g);
  std::vector<std::uint32_t> stamp(2 * r, 0);
  for (std::uint64_t p = 1; p < r; ++p) {
    ++res.windows;
    res.checks += r - p;
    if (!injective_window(pw, r, p, stamp, static_cast<std::uint32_t>(p))) {
      if (res.failures == 0) res.first_window = p;
      ++res.failures;
    }
  }
  return res;
}

void merge(InjectivitySweep& out, std::uint64_t r, const PrimeResult& pr) {
  ++out.primes_checked;
  out.windows_checked += pr.windows;
  out.pair_checks += pr.checks;
  if (pr.failures > 0 && out.failures == 0) {
    out.first_failure_prime = r;
    out.first_failure_window = pr.first_window;
  }
  out.failures += pr.failures;
}

}  // namespace

bool validate_injectivity(std::uint64_t r, std::uint64_t g, std::uint64_t p) {
  require(is_prime(r), ErrorCode::NotPrime, std::to_string(r) + " is not prime");
  require(p >= 1 && p < r, ErrorCode::WindowOutOfRange, "window must satisfy 0 < p < r");
  require(g >= 1 && g < r, ErrorCode::InvalidParam, "generator out of range");
  auto pw = power_table(r, g);
  std::vector<std::uint32_t> stamp(2 * r, 0);
  return injective_window(pw, r, p, stamp, 1);
}

InjectivitySweep injectivity_sweep_serial(std::uint64_t max_prime) {
  InjectivitySweep out;
  for (auto r : primes_up_to(max_prime)) merge(out, r, sweep_prime(r));
  return out;
}

InjectivitySweep injectivity_sweep_parallel(std::uint64_t max_prime) {
  auto primes = primes_up_to(max_prime);
  std::vector<PrimeResult> results(primes.size());
  const long n = static_cast<long>(primes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = n - 1; k >= 0; --k) results[static_cast<std::size_t>(k)] = sweep_prime(primes[static_cast<std::size_t>(k)]);
  InjectivitySweep out;
  for (std::size_t k = 0; k < primes.size(); ++k) merge(out, primes[k], results[k]);
  return out;
}

}  // namespace rankone
