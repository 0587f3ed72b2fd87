#pragma once

#include <string>

#include "json.hpp"
#include "rankone/arith.hpp"

namespace rankone {

// Integers that fit int64 serialize as JSON numbers, larger ones as decimal strings.
nlohmann::json big_to_json(const BigInt& v);
BigInt big_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

template <class T>
T json_get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

}  // namespace rankone
