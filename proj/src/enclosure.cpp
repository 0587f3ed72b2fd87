#include "rankone/enclosure.hpp"

#include <algorithm>

namespace rankone {

Enclosure::Enclosure(const Rational& lo, const Rational& hi) : lo_(lo), hi_(hi) {
  require(lo_ <= hi_, ErrorCode::InvalidParam, "enclosure with lo > hi");
}

Enclosure Enclosure::intersect(const Enclosure& o) const {
  Rational lo = std::max(lo_, o.lo_);
  Rational hi = std::min(hi_, o.hi_);
  require(lo <= hi, ErrorCode::InvalidParam, "disjoint enclosures of one quantity: " + to_string(*this) + " vs " + to_string(o));
  return Enclosure(lo, hi);
}

Enclosure Enclosure::hull(const Enclosure& o) const { return Enclosure(std::min(lo_, o.lo_), std::max(hi_, o.hi_)); }

Enclosure Enclosure::abs() const {
  if (lo_ >= 0) return *this;
  if (hi_ <= 0) return -*this;
  return Enclosure(Rational(0), std::max(Rational(-lo_), hi_));
}

Enclosure Enclosure::square() const {
  Enclosure a = abs();
  return Enclosure(a.lo_ * a.lo_, a.hi_ * a.hi_);
}

Enclosure& Enclosure::operator+=(const Enclosure& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

Enclosure& Enclosure::operator-=(const Enclosure& o) {
  Rational lo = lo_ - o.hi_;
  hi_ -= o.lo_;
  lo_ = lo;
  return *this;
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  Enclosure r = a;
  r += b;
  return r;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  Enclosure r = a;
  r -= b;
  return r;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Rational p[4] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
  return Enclosure(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  require(!b.contains_zero(), ErrorCode::IllConditioned, "division by an enclosure containing zero: " + to_string(b));
  Enclosure inv(1 / b.hi(), 1 / b.lo());
  return a * inv;
}

Enclosure operator*(const Enclosure& a, const Rational& s) {
  if (s >= 0) return Enclosure(a.lo() * s, a.hi() * s);
  return Enclosure(a.hi() * s, a.lo() * s);
}

Enclosure operator/(const Enclosure& a, const Rational& s) {
  require(s != 0, ErrorCode::IllConditioned, "division by zero");
  return a * Rational(1 / s);
}

std::string to_string(const Enclosure& e) { return "[" + to_string(e.lo()) + ", " + to_string(e.hi()) + "]"; }

}  // namespace rankone
