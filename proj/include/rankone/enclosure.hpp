#pragma once

#include <optional>
#include <string>

#include "rankone/arith.hpp"
#include "rankone/error.hpp"

namespace rankone {

/// Closed rational interval [lo, hi]. Every reported quantity carries one.
class Enclosure {
 public:
  Enclosure() = default;
  explicit Enclosure(const Rational& exact) : lo_(exact), hi_(exact) {}
  Enclosure(const Rational& lo, const Rational& hi);

  static Enclosure exact(const Rational& v) { return Enclosure(v); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  double mid_double() const { return midpoint().get_d(); }
  bool is_exact() const { return lo_ == hi_; }
  bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Enclosure& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool overlaps(const Enclosure& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }

  // Intersection of two enclosures of the same quantity.
  Enclosure intersect(const Enclosure& o) const;
  Enclosure hull(const Enclosure& o) const;
  Enclosure abs() const;
  Enclosure square() const;

  Enclosure operator-() const { return Enclosure(-hi_, -lo_); }
  Enclosure& operator+=(const Enclosure& o);
  Enclosure& operator-=(const Enclosure& o);

  bool operator==(const Enclosure& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

 private:
  Rational lo_{0};
  Rational hi_{0};
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
// Division requires a divisor enclosure that excludes zero.
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Rational& s);
Enclosure operator/(const Enclosure& a, const Rational& s);

std::string to_string(const Enclosure& e);

/// Thrown when a size, stage or scale budget runs out; `partial` holds the best
/// enclosure reached before stopping, if one exists.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(ErrorCode code, const std::string& what, std::optional<Enclosure> partial = std::nullopt)
      : Error(code, what), partial_(std::move(partial)) {}
  const std::optional<Enclosure>& partial() const { return partial_; }

 private:
  std::optional<Enclosure> partial_;
};

}  // namespace rankone
