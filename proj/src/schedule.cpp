#include "rankone/schedule.hpp"

#include "rankone/error.hpp"
#include "rankone/json_util.hpp"

namespace rankone {

BigInt StageVector::spacer_total() const {
  BigInt t = 0;
  for (const auto& s : spacers) t += s;
  return t;
}

void validate_stage_vector(const StageVector& v, std::int64_t stage) {
  const std::string where = " at stage " + std::to_string(stage);
  require(v.r >= 2, ErrorCode::InvalidSchedule, "cutting parameter r < 2" + where);
  require(v.spacers.size() == static_cast<std::size_t>(v.r), ErrorCode::InvalidSchedule,
          "spacer vector length " + std::to_string(v.spacers.size()) + " != r = " + std::to_string(v.r) + where);
  for (const auto& s : v.spacers) require(s >= 0, ErrorCode::InvalidSchedule, "negative spacer" + where);
}

SpacerSchedule::SpacerSchedule(FamilySpec spec, std::int64_t start_stage, BigInt start_height, StageRule rule,
                               MeasureClass measure, MassCap mass_cap)
    : spec_(std::move(spec)),
      start_stage_(start_stage),
      start_height_(std::move(start_height)),
      rule_(std::move(rule)),
      measure_(measure),
      mass_cap_(std::move(mass_cap)) {
  require(start_height_ >= 1, ErrorCode::InvalidSchedule, "start height must be >= 1");
  require(static_cast<bool>(rule_), ErrorCode::InvalidSchedule, "missing stage rule");
}

StageVector SpacerSchedule::stage(std::int64_t j, const BigInt& height) const {
  require(j >= start_stage_, ErrorCode::OutOfRange, "stage " + std::to_string(j) + " precedes the start stage");
  StageVector v = rule_(j, height);
  validate_stage_vector(v, j);
  return v;
}

BigInt SpacerSchedule::mass_cap(std::int64_t j, const BigInt& height) const {
  if (!mass_cap_) return stage(j, height).spacer_total();
  return mass_cap_(j, height);
}

nlohmann::json SpacerSchedule::to_json() const {
  nlohmann::json j;
  rankone::to_json(j, spec_);
  j["start_stage"] = start_stage_;
  j["start_height"] = big_to_json(start_height_);
  j["measure"] = measure_ == MeasureClass::Finite ? "finite" : "infinite";
  return j;
}

}  // namespace rankone
