#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "json.hpp"
#include "rankone/arith.hpp"
#include "rankone/enclosure.hpp"
#include "rankone/schedule.hpp"

namespace rankone {

/// Stage-j tower: height h_j, level measure m_j (mu(E_start) = 1), the stage
/// vector used to cut it, and the column offsets o_j(i) of its copies inside
/// the stage-(j+1) tower.
struct Tower {
  std::int64_t stage = 0;
  BigInt height;
  Rational level_measure;
  StageVector vector;
  std::vector<BigInt> offsets;  // offsets[i-1] = o_j(i)
  BigInt next_height;

  Rational measure() const { return Rational(height * level_measure); }
};

struct TotalMeasure {
  Rational lower;
  std::optional<Rational> upper;  // absent when no finite bound is available
  bool declared_infinite = false;

  bool bounded() const { return upper.has_value(); }
  // Throws UnboundedMeasure when no finite upper bound exists.
  Enclosure enclosure() const;
};

/// Memoised tower sequence of one schedule. Safe for concurrent readers.
class TowerChain {
 public:
  explicit TowerChain(SpacerSchedule schedule);

  const SpacerSchedule& schedule() const { return schedule_; }
  std::int64_t start_stage() const { return schedule_.start_stage(); }

  const Tower& tower(std::int64_t j) const;
  std::vector<Tower> sequence(std::int64_t last) const;
  const BigInt& height(std::int64_t j) const { return tower(j).height; }
  const Rational& level_measure(std::int64_t j) const { return tower(j).level_measure; }

  // Smallest stage K >= from with h_K > n.
  std::int64_t first_stage_above(const BigInt& n, std::int64_t from) const;

  TotalMeasure total_measure(std::int64_t j) const;

 private:
  SpacerSchedule schedule_;
  mutable std::mutex mu_;
  mutable std::deque<Tower> towers_;
  mutable std::map<std::int64_t, TotalMeasure> measures_;
};

std::vector<Tower> tower_sequence(const SpacerSchedule& schedule, std::int64_t last);

// Exact lower bound h_J m_J and a tail bound on the spacer mass added after stage J.
TotalMeasure total_measure(const TowerChain& chain, std::int64_t j);

/// Finite union of stage-J levels, stored sorted and without repeats.
class LevelSet {
 public:
  LevelSet() = default;
  LevelSet(std::int64_t stage, std::vector<Level> levels, const TowerChain& chain);

  static LevelSet base(std::int64_t stage, const TowerChain& chain);
  static LevelSet full(std::int64_t stage, const TowerChain& chain);
  static LevelSet range(std::int64_t stage, const BigInt& lo, const BigInt& hi, const TowerChain& chain);

  std::int64_t stage() const { return stage_; }
  const std::vector<Level>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }
  bool contains(Level l) const;
  const Rational& level_measure() const { return level_measure_; }
  Rational measure() const { return Rational(level_measure_ * static_cast<unsigned long>(levels_.size())); }

  nlohmann::json to_json() const;
  static LevelSet from_json(const nlohmann::json& j, const TowerChain& chain);

  bool operator==(const LevelSet& o) const { return stage_ == o.stage_ && levels_ == o.levels_; }

 private:
  std::int64_t stage_ = 0;
  std::vector<Level> levels_;
  Rational level_measure_{0};
};

constexpr std::size_t kDefaultSizeCap = 10'000'000;

// Footprint of A at stage K >= A.stage(). Throws SizeBudgetExceeded past `size_cap` levels.
LevelSet refine_set(const TowerChain& chain, const LevelSet& a, std::int64_t stage, std::size_t size_cap = kDefaultSizeCap);

struct LevelProvenance {
  enum class Kind { Level, Spacer };
  Kind kind = Kind::Level;
  std::int64_t stage = 0;   // stage of the level, or stage whose top spacer block holds the point
  BigInt level;             // level index at `stage` (Kind::Level)
  std::int64_t column = 0;  // column whose spacer block holds the point (Kind::Spacer)
  BigInt depth;             // position inside that spacer block (Kind::Spacer)

  bool operator==(const LevelProvenance& o) const = default;
};

// Walks a stage-K level down to stage J: either the stage-J level it lies in,
// or the spacer block (stage k, column i, depth d) it was added as.
LevelProvenance decode_level(const TowerChain& chain, std::int64_t K, const BigInt& level, std::int64_t J);

}  // namespace rankone
