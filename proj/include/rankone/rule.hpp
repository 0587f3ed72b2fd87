#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "rankone/arith.hpp"

namespace rankone {

// Integer-valued stage rule j -> value.
//   constant      c
//   affine        a*j + b
//   log2_floor    floor(log2(scale*j + offset))
//   exponential   coeff * base^j
//   power_floor   floor(coeff * j^(num/den))
// with optional clamping to [min, max].
struct Rule {
  enum class Kind { Constant, Affine, Log2Floor, Exponential, PowerFloor };

  Kind kind = Kind::Constant;
  BigInt a{0};
  BigInt b{0};
  BigInt coeff{1};
  BigInt base{2};
  BigInt scale{1};
  BigInt offset{0};
  unsigned long num = 1;
  unsigned long den = 1;
  std::optional<BigInt> min;
  std::optional<BigInt> max;

  static Rule constant(const BigInt& c);
  static Rule affine(const BigInt& a, const BigInt& b);
  static Rule log2_floor(const BigInt& offset, const BigInt& scale = BigInt(1));
  static Rule exponential(const BigInt& base, const BigInt& coeff = BigInt(1));
  static Rule power_floor(unsigned long num, unsigned long den, const BigInt& coeff = BigInt(1));

  Rule clamped(std::optional<BigInt> lo, std::optional<BigInt> hi) const;

  BigInt at(std::int64_t j) const;
  // Value that must fit a machine word (column counts and similar).
  std::int64_t at_small(std::int64_t j, const char* what) const;

  std::string describe() const;
  bool operator==(const Rule& o) const;
};

void to_json(nlohmann::json& j, const Rule& r);
void from_json(const nlohmann::json& j, Rule& r);

}  // namespace rankone
