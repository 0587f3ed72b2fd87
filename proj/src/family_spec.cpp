#include "rankone/family_spec.hpp"

#include <algorithm>

#include "rankone/error.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using json = nlohmann::json;

json bigvec_to_json(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(big_to_json(x));
  return a;
}

std::vector<BigInt> bigvec_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::ConfigError, "expected an array of integers");
  std::vector<BigInt> v;
  for (const auto& x : j) v.push_back(big_from_json(x));
  return v;
}

Rule rule_or(const json& j, const char* key, const Rule& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<Rule>();
}

}  // namespace

std::string family_name(const FamilySpec& spec) {
  return std::visit(overloaded{
                        [](const family::Odometer&) { return "odometer"; },
                        [](const family::ChaconClassical&) { return "chacon_classical"; },
                        [](const family::ChaconModified&) { return "chacon_modified"; },
                        [](const family::Chacon231&) { return "chacon_231"; },
                        [](const family::DelJuncoRudolph&) { return "del_junco_rudolph"; },
                        [](const family::Katok&) { return "katok"; },
                        [](const family::Semibounded&) { return "semibounded"; },
                        [](const family::Ornstein&) { return "ornstein"; },
                        [](const family::Staircase&) { return "staircase"; },
                        [](const family::GaloisPrimitive&) { return "galois_primitive"; },
                        [](const family::GaloisTrace&) { return "galois_trace"; },
                        [](const family::Sidon&) { return "sidon"; },
                        [](const family::SelfSimilar&) { return "self_similar"; },
                        [](const family::SlowGrowth&) { return "slow_growth"; },
                        [](const family::Factorial&) { return "factorial"; },
                        [](const family::Binomial&) { return "binomial"; },
                        [](const family::PrimeSpacers&) { return "prime_spacers"; },
                        [](const family::CustomFixed&) { return "custom_fixed"; },
                    },
                    spec);
}

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> catalog = {
      {"odometer", "r_j = r(j), s_j(i) = 0", "finite", "discrete spectrum; T^{h_j} fixes every stage-j level set"},
      {"chacon_classical", "r_j = 2, s_j = (0, 1)", "finite", "mu(X) = 2"},
      {"chacon_modified", "r_j = 3, s_j = (0, 1, 0)", "finite", "mu(X) = 3/2"},
      {"chacon_231", "r_j = 3, s_j = (2, 3, 1)", "finite", "mu(X) = 4"},
      {"del_junco_rudolph", "r_j = r(j), s_j(i) = 1 if i = floor(r_j/2) + 1 else 0", "finite", ""},
      {"katok", "r_j = r(j), s_j(i) = 0 for i <= floor(r_j/2), 1 otherwise", "finite", ""},
      {"semibounded", "r_j = columns, s_j(position) = s(j), other spacers 0", "finite or infinite",
       "finite when the spacer mass sum_j s(j)/r^j converges"},
      {"ornstein", "a_j(1..r+1) iid uniform on {0..H-1}, s_j(i) = H + a_j(i) - a_j(i+1)", "finite",
       "random; draws derive from (seed, stage)"},
      {"staircase", "r_j = r(j), s_j(i) = i for i = 1..r_j", "finite", "r(j) non-decreasing with unit increments"},
      {"galois_primitive", "r_j prime, q primitive mod r_j, s_j(i) = r_j + {q^i} - {q^(i+1)}", "finite",
       "{x} is the residue in [0, r_j)"},
      {"galois_trace", "r_j = b^n - 1, s_j(i) = b + tr(q^i) - tr(q^(i+1)) in GF(b^n)", "finite",
       "q generates GF(b^n)*, tr is the absolute trace"},
      {"sidon", "r_j = r(j), s_j(1) = ceil(c h_j), s_j(i+1) = ceil(c s_j(i))", "infinite",
       "equals ceil(c^i) h_j for integer c"},
      {"self_similar", "r_j = |v|, s_j = h_j * v", "infinite", "h_{j+1} = h_j (r + sum v)"},
      {"slow_growth", "r_j = r for N(r) consecutive stages from r_min, s_j = (1, 2, ..., r-1, 0)", "finite", ""},
      {"factorial", "start stage 2 with h = 2, r_j = j, s_j(i) = (j-1)!", "infinite", "h_j = j!, mu(X_j) = j"},
      {"binomial", "r_j = j + 1, s_j(u) = C(j, u-1)", "infinite", ""},
      {"prime_spacers", "r_j = 3, s_j = (0, p_j, 0) with p_j the j-th prime", "finite", ""},
      {"custom_fixed", "stage start+k uses vectors[k mod L]", "finite", "values supplied by the user"},
  };
  return catalog;
}

const FamilyInfo& describe_family(const std::string& name) {
  const auto& cat = family_catalog();
  auto it = std::find_if(cat.begin(), cat.end(), [&](const FamilyInfo& f) { return f.name == name; });
  if (it == cat.end()) fail(ErrorCode::UnknownFamily, "no family named '" + name + "'");
  return *it;
}

FamilySpec default_family(const std::string& name) {
  if (name == "odometer") return family::Odometer{};
  if (name == "chacon_classical") return family::ChaconClassical{};
  if (name == "chacon_modified") return family::ChaconModified{};
  if (name == "chacon_231") return family::Chacon231{};
  if (name == "del_junco_rudolph") return family::DelJuncoRudolph{};
  if (name == "katok") return family::Katok{};
  if (name == "semibounded") return family::Semibounded{};
  if (name == "ornstein") return family::Ornstein{};
  if (name == "staircase") return family::Staircase{};
  if (name == "galois_primitive") return family::GaloisPrimitive{};
  if (name == "galois_trace") return family::GaloisTrace{};
  if (name == "sidon") return family::Sidon{};
  if (name == "self_similar") return family::SelfSimilar{};
  if (name == "slow_growth") return family::SlowGrowth{};
  if (name == "factorial") return family::Factorial{};
  if (name == "binomial") return family::Binomial{};
  if (name == "prime_spacers") return family::PrimeSpacers{};
  if (name == "custom_fixed") return family::CustomFixed{};
  fail(ErrorCode::UnknownFamily, "no family named '" + name + "'");
}

void to_json(json& j, const FamilySpec& spec) {
  j = json::object();
  j["family"] = family_name(spec);
  std::visit(overloaded{
                 [&](const family::Odometer& f) { j["r"] = f.r; },
                 [&](const family::ChaconClassical&) {},
                 [&](const family::ChaconModified&) {},
                 [&](const family::Chacon231&) {},
                 [&](const family::DelJuncoRudolph& f) { j["r"] = f.r; },
                 [&](const family::Katok& f) { j["r"] = f.r; },
                 [&](const family::Semibounded& f) {
                   j["s"] = f.s;
                   j["columns"] = f.columns;
                   j["position"] = f.position;
                 },
                 [&](const family::Ornstein& f) {
                   j["r"] = f.r;
                   j["H"] = f.H;
                   j["seed"] = f.seed;
                 },
                 [&](const family::Staircase& f) { j["r"] = f.r; },
                 [&](const family::GaloisPrimitive& f) { j["prime"] = f.prime; },
                 [&](const family::GaloisTrace& f) {
                   j["b"] = f.b;
                   j["n"] = f.n;
                 },
                 [&](const family::Sidon& f) {
                   j["r"] = f.r;
                   j["c"] = rational_to_json(f.c);
                 },
                 [&](const family::SelfSimilar& f) { j["v"] = bigvec_to_json(f.v); },
                 [&](const family::SlowGrowth& f) {
                   j["N"] = f.N;
                   j["r_min"] = f.r_min;
                 },
                 [&](const family::Factorial&) {},
                 [&](const family::Binomial&) {},
                 [&](const family::PrimeSpacers&) {},
                 [&](const family::CustomFixed& f) {
                   json a = json::array();
                   for (const auto& v : f.vectors) a.push_back(bigvec_to_json(v));
                   j["vectors"] = a;
                 },
             },
             spec);
}

void from_json(const json& j, FamilySpec& spec) {
  if (!j.is_object() || !j.contains("family")) fail(ErrorCode::ConfigError, "schedule needs a 'family' field");
  std::string name = j.at("family").get<std::string>();
  spec = default_family(name);
  std::visit(overloaded{
                 [&](family::Odometer& f) { f.r = rule_or(j, "r", f.r); },
                 [&](family::ChaconClassical&) {},
                 [&](family::ChaconModified&) {},
                 [&](family::Chacon231&) {},
                 [&](family::DelJuncoRudolph& f) { f.r = rule_or(j, "r", f.r); },
                 [&](family::Katok& f) { f.r = rule_or(j, "r", f.r); },
                 [&](family::Semibounded& f) {
                   f.s = rule_or(j, "s", f.s);
                   f.columns = json_get_or<std::int64_t>(j, "columns", f.columns);
                   f.position = json_get_or<std::int64_t>(j, "position", f.position);
                 },
                 [&](family::Ornstein& f) {
                   f.r = rule_or(j, "r", f.r);
                   f.H = rule_or(j, "H", f.H);
                   f.seed = json_get_or<std::uint64_t>(j, "seed", f.seed);
                 },
                 [&](family::Staircase& f) { f.r = rule_or(j, "r", f.r); },
                 [&](family::GaloisPrimitive& f) { f.prime = rule_or(j, "prime", f.prime); },
                 [&](family::GaloisTrace& f) {
                   f.b = json_get_or<std::int64_t>(j, "b", f.b);
                   f.n = rule_or(j, "n", f.n);
                 },
                 [&](family::Sidon& f) {
                   f.r = rule_or(j, "r", f.r);
                   if (j.contains("c")) f.c = rational_from_json(j.at("c"));
                 },
                 [&](family::SelfSimilar& f) {
                   if (j.contains("v")) f.v = bigvec_from_json(j.at("v"));
                 },
                 [&](family::SlowGrowth& f) {
                   f.N = rule_or(j, "N", f.N);
                   f.r_min = json_get_or<std::int64_t>(j, "r_min", f.r_min);
                 },
                 [&](family::Factorial&) {},
                 [&](family::Binomial&) {},
                 [&](family::PrimeSpacers&) {},
                 [&](family::CustomFixed& f) {
                   if (j.contains("vectors")) {
                     f.vectors.clear();
                     for (const auto& v : j.at("vectors")) f.vectors.push_back(bigvec_from_json(v));
                   }
                 },
             },
             spec);
}

}  // namespace rankone
