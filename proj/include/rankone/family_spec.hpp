#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rankone/arith.hpp"
#include "rankone/rule.hpp"

namespace rankone {

namespace family {

struct Odometer { Rule r = Rule::constant(BigInt(2)); bool operator==(const Odometer&) const = default; };
struct ChaconClassical { bool operator==(const ChaconClassical&) const = default; };
struct ChaconModified { bool operator==(const ChaconModified&) const = default; };
struct Chacon231 { bool operator==(const Chacon231&) const = default; };
struct DelJuncoRudolph { Rule r = Rule::constant(BigInt(3)); bool operator==(const DelJuncoRudolph&) const = default; };
struct Katok { Rule r = Rule::constant(BigInt(4)); bool operator==(const Katok&) const = default; };

// r columns, all spacers zero except column `position` (1-indexed) which gets s_j.
struct Semibounded {
  Rule s = Rule::power_floor(1, 2);
  std::int64_t columns = 3;
  std::int64_t position = 2;
  bool operator==(const Semibounded&) const = default;
};

struct Ornstein {
  Rule r = Rule::constant(BigInt(4096));
  Rule H = Rule::constant(BigInt(64));
  std::uint64_t seed = 1;
  bool operator==(const Ornstein&) const = default;
};

struct Staircase { Rule r = Rule::log2_floor(BigInt(8)); bool operator==(const Staircase&) const = default; };

// r_j is the smallest prime >= prime(j).
struct GaloisPrimitive { Rule prime = Rule::affine(BigInt(4), BigInt(1)); bool operator==(const GaloisPrimitive&) const = default; };

struct GaloisTrace {
  std::int64_t b = 2;
  Rule n = Rule::affine(BigInt(1), BigInt(1)).clamped(std::nullopt, BigInt(10));
  bool operator==(const GaloisTrace&) const = default;
};

struct Sidon {
  Rule r = Rule::affine(BigInt(1), BigInt(2));
  Rational c{4};
  bool operator==(const Sidon&) const = default;
};

struct SelfSimilar { std::vector<BigInt> v = {BigInt(0), BigInt(1)}; bool operator==(const SelfSimilar&) const = default; };

// r takes the value r for N(r) consecutive stages, starting from r_min.
struct SlowGrowth {
  Rule N = Rule::exponential(BigInt(16));
  std::int64_t r_min = 2;
  bool operator==(const SlowGrowth&) const = default;
};

struct Factorial { bool operator==(const Factorial&) const = default; };
struct Binomial { bool operator==(const Binomial&) const = default; };
struct PrimeSpacers { bool operator==(const PrimeSpacers&) const = default; };

struct CustomFixed {
  std::vector<std::vector<BigInt>> vectors = {{BigInt(0), BigInt(1)}};
  bool operator==(const CustomFixed&) const = default;
};

}  // namespace family

using FamilySpec = std::variant<family::Odometer, family::ChaconClassical, family::ChaconModified, family::Chacon231,
                                family::DelJuncoRudolph, family::Katok, family::Semibounded, family::Ornstein,
                                family::Staircase, family::GaloisPrimitive, family::GaloisTrace, family::Sidon,
                                family::SelfSimilar, family::SlowGrowth, family::Factorial, family::Binomial,
                                family::PrimeSpacers, family::CustomFixed>;

std::string family_name(const FamilySpec& spec);

struct FamilyInfo {
  std::string name;
  std::string formula;
  std::string measure;  // "finite", "infinite", or "finite (discrete spectrum)" etc.
  std::string notes;
};

const std::vector<FamilyInfo>& family_catalog();
const FamilyInfo& describe_family(const std::string& name);
FamilySpec default_family(const std::string& name);

void to_json(nlohmann::json& j, const FamilySpec& spec);
void from_json(const nlohmann::json& j, FamilySpec& spec);

}  // namespace rankone
