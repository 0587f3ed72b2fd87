#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rankone {

using BigInt = mpz_class;
using Rational = mpq_class;
using Level = __int128;

BigInt big_from_string(const std::string& s);
Rational rational_from_string(const std::string& s);
std::string to_string(const BigInt& v);
std::string to_string(const Rational& v);
std::string to_string(Level v);

// Rounded fixed-point rendering with `digits` fractional digits (half away from zero).
std::string to_decimal(const Rational& v, int digits);
double to_double(const Rational& v);
Rational rational_from_double(double x);

BigInt to_big(Level v);
bool fits_level(const BigInt& v);
Level to_level(const BigInt& v);
Level level_from_string(const std::string& s);

BigInt ipow(const BigInt& base, unsigned long exp);
BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);
BigInt ceil(const Rational& q);
BigInt floor(const Rational& q);

// Number of bits needed to represent |v|.
std::size_t bit_length(const BigInt& v);

}  // namespace rankone
