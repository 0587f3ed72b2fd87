#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rankone/arith.hpp"
#include "rankone/family_spec.hpp"

namespace rankone {

/// Cutting parameter and spacer vector of one stage. Columns are 1-indexed in
/// the mathematics; `spacers[i-1]` holds s_j(i).
struct StageVector {
  std::int64_t r = 0;
  std::vector<BigInt> spacers;

  BigInt spacer_total() const;
  const BigInt& s(std::int64_t i) const { return spacers.at(static_cast<std::size_t>(i - 1)); }
  bool operator==(const StageVector& o) const = default;
};

// Throws InvalidSchedule unless r >= 2, |spacers| = r and all spacers are >= 0.
void validate_stage_vector(const StageVector& v, std::int64_t stage);

enum class MeasureClass { Finite, Infinite };

class SpacerSchedule {
 public:
  using StageRule = std::function<StageVector(std::int64_t stage, const BigInt& height)>;
  // Upper bound on the spacer total at a stage, used for tail bounds.
  using MassCap = std::function<BigInt(std::int64_t stage, const BigInt& height)>;

  SpacerSchedule(FamilySpec spec, std::int64_t start_stage, BigInt start_height, StageRule rule,
                 MeasureClass measure, MassCap mass_cap);

  const FamilySpec& spec() const { return spec_; }
  std::string family() const { return family_name(spec_); }
  std::int64_t start_stage() const { return start_stage_; }
  const BigInt& start_height() const { return start_height_; }
  MeasureClass measure_class() const { return measure_; }

  StageVector stage(std::int64_t j, const BigInt& height) const;
  BigInt mass_cap(std::int64_t j, const BigInt& height) const;

  nlohmann::json to_json() const;

 private:
  FamilySpec spec_;
  std::int64_t start_stage_;
  BigInt start_height_;
  StageRule rule_;
  MeasureClass measure_;
  MassCap mass_cap_;
};

}  // namespace rankone
