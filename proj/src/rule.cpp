#include "rankone/rule.hpp"

#include "rankone/error.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

nlohmann::json big_to_json(const BigInt& v) {
  if (v.fits_slong_p()) return nlohmann::json(static_cast<std::int64_t>(v.get_si()));
  return nlohmann::json(v.get_str(10));
}

BigInt big_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return BigInt(std::to_string(j.get<std::uint64_t>()));
    return BigInt(static_cast<long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) return big_from_string(j.get<std::string>());
  if (j.is_number_float()) {
    double d = j.get<double>();
    Rational q = rational_from_double(d);
    if (q.get_den() != 1) fail(ErrorCode::InvalidParam, "expected an integer, got " + j.dump());
    return q.get_num();
  }
  fail(ErrorCode::InvalidParam, "expected an integer, got " + j.dump());
}

nlohmann::json rational_to_json(const Rational& q) {
  if (q.get_den() == 1) return big_to_json(q.get_num());
  return nlohmann::json(to_string(q));
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(big_from_json(j));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  fail(ErrorCode::InvalidParam, "expected a rational, got " + j.dump());
}

Rule Rule::constant(const BigInt& c) {
  Rule r;
  r.kind = Kind::Constant;
  r.b = c;
  return r;
}

Rule Rule::affine(const BigInt& a, const BigInt& b) {
  Rule r;
  r.kind = Kind::Affine;
  r.a = a;
  r.b = b;
  return r;
}

Rule Rule::log2_floor(const BigInt& offset, const BigInt& scale) {
  Rule r;
  r.kind = Kind::Log2Floor;
  r.offset = offset;
  r.scale = scale;
  return r;
}

Rule Rule::exponential(const BigInt& base, const BigInt& coeff) {
  Rule r;
  r.kind = Kind::Exponential;
  r.base = base;
  r.coeff = coeff;
  return r;
}

Rule Rule::power_floor(unsigned long num, unsigned long den, const BigInt& coeff) {
  require(den > 0, ErrorCode::InvalidParam, "power_floor denominator must be positive");
  Rule r;
  r.kind = Kind::PowerFloor;
  r.num = num;
  r.den = den;
  r.coeff = coeff;
  return r;
}

Rule Rule::clamped(std::optional<BigInt> lo, std::optional<BigInt> hi) const {
  Rule r = *this;
  r.min = std::move(lo);
  r.max = std::move(hi);
  return r;
}

BigInt Rule::at(std::int64_t j) const {
  BigInt v;
  BigInt bj(static_cast<long>(j));
  switch (kind) {
    case Kind::Constant: v = b; break;
    case Kind::Affine: v = a * bj + b; break;
    case Kind::Log2Floor: {
      BigInt x = scale * bj + offset;
      require(x > 0, ErrorCode::InvalidParam, "log2_floor argument must be positive at stage " + std::to_string(j));
      v = BigInt(static_cast<unsigned long>(bit_length(x) - 1));
      break;
    }
    case Kind::Exponential:
      require(j >= 0, ErrorCode::InvalidParam, "exponential rule needs j >= 0");
      v = coeff * ipow(base, static_cast<unsigned long>(j));
      break;
    case Kind::PowerFloor: {
      require(j >= 0, ErrorCode::InvalidParam, "power_floor rule needs j >= 0");
      BigInt p = ipow(coeff, den) * ipow(bj, num);
      mpz_root(v.get_mpz_t(), p.get_mpz_t(), den);
      break;
    }
  }
  if (min && v < *min) v = *min;
  if (max && v > *max) v = *max;
  return v;
}

std::int64_t Rule::at_small(std::int64_t j, const char* what) const {
  BigInt v = at(j);
  require(v.fits_slong_p(), ErrorCode::InvalidSchedule, std::string(what) + " does not fit a machine word");
  return v.get_si();
}

std::string Rule::describe() const {
  std::string s;
  switch (kind) {
    case Kind::Constant: s = to_string(b); break;
    case Kind::Affine: s = to_string(a) + "*j + " + to_string(b); break;
    case Kind::Log2Floor: s = "floor(log2(" + to_string(scale) + "*j + " + to_string(offset) + "))"; break;
    case Kind::Exponential: s = to_string(coeff) + "*" + to_string(base) + "^j"; break;
    case Kind::PowerFloor:
      s = "floor(" + to_string(coeff) + "*j^(" + std::to_string(num) + "/" + std::to_string(den) + "))";
      break;
  }
  if (min) s = "max(" + to_string(*min) + ", " + s + ")";
  if (max) s = "min(" + to_string(*max) + ", " + s + ")";
  return s;
}

bool Rule::operator==(const Rule& o) const {
  return kind == o.kind && a == o.a && b == o.b && coeff == o.coeff && base == o.base && scale == o.scale &&
         offset == o.offset && num == o.num && den == o.den && min == o.min && max == o.max;
}

void to_json(nlohmann::json& j, const Rule& r) {
  switch (r.kind) {
    case Rule::Kind::Constant: j = {{"kind", "constant"}, {"value", big_to_json(r.b)}}; break;
    case Rule::Kind::Affine: j = {{"kind", "affine"}, {"a", big_to_json(r.a)}, {"b", big_to_json(r.b)}}; break;
    case Rule::Kind::Log2Floor:
      j = {{"kind", "log2_floor"}, {"scale", big_to_json(r.scale)}, {"offset", big_to_json(r.offset)}};
      break;
    case Rule::Kind::Exponential:
      j = {{"kind", "exponential"}, {"base", big_to_json(r.base)}, {"coeff", big_to_json(r.coeff)}};
      break;
    case Rule::Kind::PowerFloor:
      j = {{"kind", "power_floor"}, {"num", r.num}, {"den", r.den}, {"coeff", big_to_json(r.coeff)}};
      break;
  }
  if (r.min) j["min"] = big_to_json(*r.min);
  if (r.max) j["max"] = big_to_json(*r.max);
}

void from_json(const nlohmann::json& j, Rule& r) {
  if (j.is_number_integer() || j.is_string()) {
    r = Rule::constant(big_from_json(j));
    return;
  }
  if (!j.is_object() || !j.contains("kind")) fail(ErrorCode::ConfigError, "rule must be an integer or an object with 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  auto big = [&](const char* key, long fallback) {
    return j.contains(key) ? big_from_json(j.at(key)) : BigInt(fallback);
  };
  if (kind == "constant") {
    if (!j.contains("value")) fail(ErrorCode::ConfigError, "constant rule needs 'value'");
    r = Rule::constant(big_from_json(j.at("value")));
  } else if (kind == "affine") {
    r = Rule::affine(big("a", 1), big("b", 0));
  } else if (kind == "log2_floor") {
    r = Rule::log2_floor(big("offset", 0), big("scale", 1));
  } else if (kind == "exponential") {
    r = Rule::exponential(big("base", 2), big("coeff", 1));
  } else if (kind == "power_floor") {
    r = Rule::power_floor(json_get_or<unsigned long>(j, "num", 1), json_get_or<unsigned long>(j, "den", 2), big("coeff", 1));
  } else {
    fail(ErrorCode::ConfigError, "unknown rule kind '" + kind + "'");
  }
  std::optional<BigInt> lo, hi;
  if (j.contains("min")) lo = big_from_json(j.at("min"));
  if (j.contains("max")) hi = big_from_json(j.at("max"));
  r = r.clamped(lo, hi);
}

}  // namespace rankone
