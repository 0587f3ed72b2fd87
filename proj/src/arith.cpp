#include "rankone/arith.hpp"

#include <algorithm>
#include <cmath>

#include "rankone/error.hpp"

namespace rankone {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NoGenerator: return "NoGenerator";
    case ErrorCode::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorCode::StageBudgetExceeded: return "StageBudgetExceeded";
    case ErrorCode::ScaleExceeded: return "ScaleExceeded";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::MissingLags: return "MissingLags";
    case ErrorCode::UnboundedMeasure: return "UnboundedMeasure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

BigInt big_from_string(const std::string& s) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) fail(ErrorCode::InvalidParam, "not an integer: '" + s + "'");
  return v;
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational q(big_from_string(s.substr(0, slash)), big_from_string(s.substr(slash + 1)));
    if (q.get_den() == 0) fail(ErrorCode::InvalidParam, "zero denominator: " + s);
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos && s.find_first_of("eE") == std::string::npos) return Rational(big_from_string(s));
  if (s.find_first_of("eE") != std::string::npos) {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used != s.size()) fail(ErrorCode::InvalidParam, "not a number: " + s);
    return rational_from_double(x);
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg || (!digits.empty() && digits[0] == '+')) digits = digits.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    fail(ErrorCode::InvalidParam, "not a number: " + s);
  BigInt num(digits, 10);
  BigInt den = ipow(BigInt(10), static_cast<unsigned long>(s.size() - dot - 1));
  Rational q(neg ? BigInt(-num) : num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const BigInt& v) { return v.get_str(10); }

std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str(10);
  return v.get_num().get_str(10) + "/" + v.get_den().get_str(10);
}

std::string to_string(Level v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_decimal(const Rational& v, int digits) {
  if (digits < 0) digits = 0;
  BigInt scale = ipow(BigInt(10), static_cast<unsigned long>(digits));
  Rational scaled = v * scale;
  bool neg = scaled < 0;
  Rational mag = neg ? Rational(-scaled) : scaled;
  BigInt q = floor(mag + Rational(1, 2));
  std::string s = q.get_str(10);
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) - s.size() + 1, '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (neg && q != 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& v) { return v.get_d(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidParam, "non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

BigInt to_big(Level v) { return big_from_string(to_string(v)); }

bool fits_level(const BigInt& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= 125; }

Level to_level(const BigInt& v) {
  if (!fits_level(v)) fail(ErrorCode::ScaleExceeded, "value exceeds 125-bit level range: " + to_string(v));
  return level_from_string(v.get_str(10));
}

Level level_from_string(const std::string& s) {
  if (s.empty()) fail(ErrorCode::InvalidParam, "empty level");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i >= s.size()) fail(ErrorCode::InvalidParam, "bad level: " + s);
  if (s.size() - i > 38) fail(ErrorCode::ScaleExceeded, "level too large: " + s);
  Level v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail(ErrorCode::InvalidParam, "bad level: " + s);
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt ceil(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt floor(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

}  // namespace rankone
