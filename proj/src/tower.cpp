#include "rankone/tower.hpp"

#include <algorithm>

#include "rankone/error.hpp"

namespace rankone {

namespace {

// Stages summed exactly before the geometric remainder, and the window over
// which the remainder ratio is measured.
constexpr std::int64_t kTailExact = 24;
constexpr std::int64_t kTailWindow = 24;

Tower make_tower(const SpacerSchedule& s, std::int64_t j, const BigInt& h, const Rational& m) {
  Tower t;
  t.stage = j;
  t.height = h;
  t.level_measure = m;
  t.vector = s.stage(j, h);
  t.offsets.reserve(static_cast<std::size_t>(t.vector.r));
  BigInt o = 0;
  for (std::int64_t i = 0; i < t.vector.r; ++i) {
    t.offsets.push_back(o);
    o += h + t.vector.spacers[static_cast<std::size_t>(i)];
  }
  t.next_height = o;
  return t;
}

}  // namespace

Enclosure TotalMeasure::enclosure() const {
  if (!upper) fail(ErrorCode::UnboundedMeasure, declared_infinite ? "the space has infinite measure" : "no finite tail bound available");
  return Enclosure(lower, *upper);
}

TowerChain::TowerChain(SpacerSchedule schedule) : schedule_(std::move(schedule)) {}

const Tower& TowerChain::tower(std::int64_t j) const {
  std::lock_guard<std::mutex> lock(mu_);
  const std::int64_t s = schedule_.start_stage();
  require(j >= s, ErrorCode::OutOfRange, "stage " + std::to_string(j) + " precedes the start stage " + std::to_string(s));
  if (towers_.empty()) towers_.push_back(make_tower(schedule_, s, schedule_.start_height(), Rational(1)));
  while (static_cast<std::int64_t>(towers_.size()) <= j - s) {
    const Tower& prev = towers_.back();
    Rational m = prev.level_measure / prev.vector.r;
    towers_.push_back(make_tower(schedule_, prev.stage + 1, prev.next_height, m));
  }
  return towers_[static_cast<std::size_t>(j - s)];
}

std::vector<Tower> TowerChain::sequence(std::int64_t last) const {
  std::vector<Tower> out;
  for (std::int64_t j = start_stage(); j <= last; ++j) out.push_back(tower(j));
  return out;
}

std::int64_t TowerChain::first_stage_above(const BigInt& n, std::int64_t from) const {
  std::int64_t k = std::max(from, start_stage());
  while (tower(k).height <= n) ++k;
  return k;
}

TotalMeasure TowerChain::total_measure(std::int64_t j) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = measures_.find(j);
    if (it != measures_.end()) return it->second;
  }
  const Tower& t = tower(j);
  TotalMeasure out;
  out.lower = t.measure();
  if (schedule_.measure_class() == MeasureClass::Infinite) {
    out.declared_infinite = true;
  } else {
    // mu(X) - mu(X_J) = sum_{k >= J} (sum_i s_k(i)) m_{k+1}. Sum the first terms
    // exactly, then bound the rest by b_k = cap_k m_{k+1} with ratio rho < 1
    // measured over a window of stages.
    Rational exact = 0;
    BigInt h = t.height;
    Rational m = t.level_measure;
    std::int64_t k = j;
    for (; k < j + kTailExact; ++k) {
      StageVector v = schedule_.stage(k, h);
      Rational mn = m / v.r;
      exact += Rational(v.spacer_total()) * mn;
      h = h * v.r + v.spacer_total();
      m = mn;
    }
    std::vector<Rational> b;
    for (std::int64_t q = k; q <= k + kTailWindow; ++q) {
      StageVector v = schedule_.stage(q, h);
      Rational mn = m / v.r;
      b.push_back(Rational(schedule_.mass_cap(q, h)) * mn);
      h = h * v.r + v.spacer_total();
      m = mn;
    }
    bool bounded = true;
    Rational rho = 0;
    bool all_zero = std::all_of(b.begin(), b.end(), [](const Rational& x) { return x == 0; });
    if (!all_zero) {
      for (std::size_t q = 0; q + 1 < b.size(); ++q) {
        if (b[q] == 0) {
          if (b[q + 1] != 0) bounded = false;
          continue;
        }
        rho = std::max(rho, Rational(b[q + 1] / b[q]));
      }
      if (rho >= 1) bounded = false;
    }
    if (bounded) {
      Rational rest = all_zero ? Rational(0) : Rational(b.front() / (1 - rho));
      out.upper = out.lower + exact + rest;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  measures_.emplace(j, out);
  return out;
}

std::vector<Tower> tower_sequence(const SpacerSchedule& schedule, std::int64_t last) {
  TowerChain chain(schedule);
  return chain.sequence(last);
}

TotalMeasure total_measure(const TowerChain& chain, std::int64_t j) { return chain.total_measure(j); }

LevelSet::LevelSet(std::int64_t stage, std::vector<Level> levels, const TowerChain& chain)
    : stage_(stage), levels_(std::move(levels)) {
  const Tower& t = chain.tower(stage);
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
  if (!levels_.empty()) {
    require(levels_.front() >= 0, ErrorCode::OutOfRange, "negative level index");
    require(to_big(levels_.back()) < t.height, ErrorCode::OutOfRange,
            "level " + to_string(levels_.back()) + " outside stage " + std::to_string(stage) + " of height " + to_string(t.height));
  }
  level_measure_ = t.level_measure;
}

LevelSet LevelSet::base(std::int64_t stage, const TowerChain& chain) { return LevelSet(stage, {0}, chain); }

LevelSet LevelSet::full(std::int64_t stage, const TowerChain& chain) {
  return range(stage, BigInt(0), BigInt(chain.height(stage) - 1), chain);
}

LevelSet LevelSet::range(std::int64_t stage, const BigInt& lo, const BigInt& hi, const TowerChain& chain) {
  require(lo >= 0 && lo <= hi, ErrorCode::InvalidParam, "bad level range");
  BigInt count = hi - lo + 1;
  require(count <= BigInt(static_cast<unsigned long>(kDefaultSizeCap)), ErrorCode::SizeBudgetExceeded, "level range too large");
  std::vector<Level> v;
  Level a = to_level(lo);
  Level b = to_level(hi);
  for (Level l = a; l <= b; ++l) v.push_back(l);
  return LevelSet(stage, std::move(v), chain);
}

bool LevelSet::contains(Level l) const { return std::binary_search(levels_.begin(), levels_.end(), l); }

nlohmann::json LevelSet::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (auto l : levels_) lv.push_back(to_string(l));
  return {{"stage", stage_}, {"levels", lv}};
}

LevelSet LevelSet::from_json(const nlohmann::json& j, const TowerChain& chain) {
  if (!j.is_object() || !j.contains("stage")) fail(ErrorCode::ConfigError, "level set needs 'stage'");
  std::int64_t stage = j.at("stage").get<std::int64_t>();
  if (j.contains("range")) {
    const auto& r = j.at("range");
    if (!r.is_array() || r.size() != 2) fail(ErrorCode::ConfigError, "'range' must be [lo, hi]");
    auto val = [](const nlohmann::json& x) { return x.is_string() ? big_from_string(x.get<std::string>()) : BigInt(static_cast<long>(x.get<std::int64_t>())); };
    return range(stage, val(r[0]), val(r[1]), chain);
  }
  if (j.contains("kind")) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "base") return base(stage, chain);
    if (kind == "full") return full(stage, chain);
    if (kind == "odd" || kind == "even") {
      const BigInt& h = chain.height(stage);
      require(h <= BigInt(static_cast<unsigned long>(kDefaultSizeCap)), ErrorCode::SizeBudgetExceeded, "level set too large");
      std::vector<Level> v;
      for (Level l = kind == "odd" ? 1 : 0; to_big(l) < h; l += 2) v.push_back(l);
      return LevelSet(stage, std::move(v), chain);
    }
    fail(ErrorCode::ConfigError, "unknown level set kind '" + kind + "'");
  }
  std::vector<Level> v;
  if (j.contains("levels")) {
    for (const auto& x : j.at("levels")) v.push_back(x.is_string() ? level_from_string(x.get<std::string>()) : static_cast<Level>(x.get<std::int64_t>()));
  }
  return LevelSet(stage, std::move(v), chain);
}

LevelSet refine_set(const TowerChain& chain, const LevelSet& a, std::int64_t stage, std::size_t size_cap) {
  require(stage >= a.stage(), ErrorCode::InvalidParam, "refine target precedes the set's stage");
  BigInt predicted = static_cast<unsigned long>(a.size());
  for (std::int64_t k = a.stage(); k < stage; ++k) predicted *= chain.tower(k).vector.r;
  if (predicted > BigInt(static_cast<unsigned long>(size_cap))) {
    throw BudgetExceeded(ErrorCode::SizeBudgetExceeded,
                         "refined footprint of " + to_string(predicted) + " levels exceeds the cap of " + std::to_string(size_cap));
  }
  require(fits_level(chain.height(stage)), ErrorCode::ScaleExceeded, "stage height exceeds the level index range");
  std::vector<Level> cur = a.levels();
  for (std::int64_t k = a.stage(); k < stage; ++k) {
    const Tower& t = chain.tower(k);
    std::vector<Level> next;
    next.reserve(cur.size() * static_cast<std::size_t>(t.vector.r));
    // Column-major order keeps the result sorted: o(i) + l < o(i+1) for l < h.
    for (const auto& o : t.offsets) {
      Level ol = to_level(o);
      for (auto l : cur) next.push_back(ol + l);
    }
    cur.swap(next);
  }
  return LevelSet(stage, std::move(cur), chain);
}

LevelProvenance decode_level(const TowerChain& chain, std::int64_t K, const BigInt& level, std::int64_t J) {
  require(J >= chain.start_stage() && J <= K, ErrorCode::InvalidParam, "decode needs start <= J <= K");
  require(level >= 0 && level < chain.height(K), ErrorCode::OutOfRange, "level outside the stage-K tower");
  BigInt l = level;
  for (std::int64_t k = K - 1; k >= J; --k) {
    const Tower& t = chain.tower(k);
    auto it = std::upper_bound(t.offsets.begin(), t.offsets.end(), l);
    std::size_t col = static_cast<std::size_t>(it - t.offsets.begin());  // 1-indexed column
    l -= t.offsets[col - 1];
    if (l >= t.height) {
      LevelProvenance p;
      p.kind = LevelProvenance::Kind::Spacer;
      p.stage = k;
      p.column = static_cast<std::int64_t>(col);
      p.depth = l - t.height;
      return p;
    }
  }
  LevelProvenance p;
  p.kind = LevelProvenance::Kind::Level;
  p.stage = J;
  p.level = l;
  return p;
}

}  // namespace rankone
