#pragma once

#include <cstdint>
#include <vector>

namespace rankone {

bool is_prime(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);  // smallest prime >= n
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
std::uint64_t nth_prime(std::uint64_t k);  // nth_prime(1) = 2
std::vector<std::uint64_t> prime_factors(std::uint64_t n);  // distinct, ascending
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Smallest generator of (Z/pZ)*. Throws NotPrime.
std::uint64_t primitive_root(std::uint64_t p);

// GF(b^n) as F_b[x]/(f) with f the first monic irreducible of degree n in
// lexicographic order of its coefficient list (constant term least significant).
// Elements are encoded as integers sum c_k b^k.
class GaloisField {
 public:
  GaloisField(std::uint32_t b, std::uint32_t n);
  // Uses the supplied monic modulus (coefficients from x^0 up to x^n, leading 1). Throws NotIrreducible.
  GaloisField(std::uint32_t b, std::vector<std::uint32_t> modulus);

  std::uint32_t characteristic() const { return b_; }
  std::uint32_t degree() const { return n_; }
  std::uint64_t order() const { return size_; }
  const std::vector<std::uint32_t>& modulus() const { return f_; }

  std::uint64_t mul(std::uint64_t x, std::uint64_t y) const;
  std::uint64_t pow(std::uint64_t x, std::uint64_t e) const;
  std::uint32_t trace(std::uint64_t x) const;
  // Smallest encoded element of multiplicative order b^n - 1. Throws NoGenerator.
  std::uint64_t generator() const;

  std::vector<std::uint32_t> decode(std::uint64_t x) const;
  std::uint64_t encode(const std::vector<std::uint32_t>& c) const;

 private:
  void init_trace();

  std::uint32_t b_;
  std::uint32_t n_;
  std::uint64_t size_;
  std::vector<std::uint32_t> f_;
  std::vector<std::uint32_t> basis_trace_;
};

bool is_irreducible(std::uint32_t b, const std::vector<std::uint32_t>& monic);
std::vector<std::uint32_t> first_irreducible(std::uint32_t b, std::uint32_t n);

// tr(q^i) for i = start .. start+count-1, q = GaloisField(b, n).generator().
std::vector<std::uint32_t> trace_sequence(std::uint32_t b, std::uint32_t n, std::uint64_t count, std::uint64_t start = 0);

// Checks that {g^i} - {g^(i+p)} (residues in [0, p)) are distinct for i = 0 .. r-p-1.
bool validate_injectivity(std::uint64_t r, std::uint64_t g, std::uint64_t p);

struct InjectivitySweep {
  std::uint64_t primes_checked = 0;
  std::uint64_t windows_checked = 0;
  std::uint64_t pair_checks = 0;
  std::uint64_t failures = 0;
  std::uint64_t first_failure_prime = 0;
  std::uint64_t first_failure_window = 0;
};

// Every prime r <= max_prime and every window 1 <= p < r, with g the smallest primitive root.
InjectivitySweep injectivity_sweep_serial(std::uint64_t max_prime);
InjectivitySweep injectivity_sweep_parallel(std::uint64_t max_prime);

}  // namespace rankone
