#pragma once

// Reference model for the measure engine. It never touches column offsets or
// level decoding: it cuts actual intervals with integer endpoints (common
// denominator prod r_k), stacks them geometrically, and reads T as "next
// interval up" in the finest tower.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rankone/arith.hpp"
#include "rankone/schedule.hpp"

namespace oracle {

struct Interval {
  std::int64_t a;
  std::int64_t b;  // [a, b)
};

class IntervalExchange {
 public:
  // stages[k] cuts tower number k (stage start + k). Building stops once the
  // tower would exceed `max_levels` intervals or the denominator overflows.
  IntervalExchange(std::int64_t start_stage, std::int64_t start_height, const std::vector<rankone::StageVector>& stages,
                   std::size_t max_levels)
      : start_(start_stage) {
    std::int64_t q = 1;
    std::size_t usable = 0;
    std::int64_t h = start_height;
    for (const auto& v : stages) {
      std::int64_t total = 0;
      for (const auto& s : v.spacers) total += s.get_si();
      std::int64_t nh = h * v.r + total;
      if (q > (std::int64_t(1) << 50) / v.r || static_cast<std::size_t>(nh) > max_levels) break;
      q *= v.r;
      h = nh;
      ++usable;
    }
    denominator_ = q;
    std::vector<Interval> tower;
    for (std::int64_t l = 0; l < start_height; ++l) tower.push_back({l * q, (l + 1) * q});
    std::int64_t next_free = start_height * q;
    towers_.push_back(tower);
    for (std::size_t k = 0; k < usable; ++k) {
      const auto& v = stages[k];
      std::int64_t len = (tower.front().b - tower.front().a) / v.r;
      std::vector<Interval> stacked;
      for (std::int64_t col = 0; col < v.r; ++col) {
        for (const auto& iv : tower) stacked.push_back({iv.a + col * len, iv.a + (col + 1) * len});
        std::int64_t s = v.spacers[static_cast<std::size_t>(col)].get_si();
        for (std::int64_t t = 0; t < s; ++t) {
          stacked.push_back({next_free, next_free + len});
          next_free += len;
        }
      }
      tower.swap(stacked);
      towers_.push_back(tower);
    }
  }

  std::int64_t deepest_stage() const { return start_ + static_cast<std::int64_t>(towers_.size()) - 1; }
  std::int64_t height(std::int64_t stage) const { return static_cast<std::int64_t>(tower(stage).size()); }
  const std::vector<Interval>& tower(std::int64_t stage) const { return towers_.at(static_cast<std::size_t>(stage - start_)); }

  // For each interval of the deepest tower, the stage-J level containing it, or -1.
  std::vector<std::int64_t> classes(std::int64_t stage) const {
    const auto& coarse = tower(stage);
    std::vector<std::pair<std::int64_t, std::int64_t>> by_left;
    for (std::size_t i = 0; i < coarse.size(); ++i) by_left.push_back({coarse[i].a, static_cast<std::int64_t>(i)});
    std::sort(by_left.begin(), by_left.end());
    const auto& fine = tower(deepest_stage());
    std::vector<std::int64_t> out(fine.size(), -1);
    for (std::size_t k = 0; k < fine.size(); ++k) {
      auto it = std::upper_bound(by_left.begin(), by_left.end(), std::make_pair(fine[k].a, std::int64_t(1) << 62));
      if (it == by_left.begin()) continue;
      --it;
      const auto& iv = coarse[static_cast<std::size_t>(it->second)];
      if (fine[k].a >= iv.a && fine[k].b <= iv.b) out[k] = it->second;
    }
    return out;
  }

  // [resolved, resolved + unresolved] for mu(T^n A ∩ B), A and B given as stage-J levels.
  std::pair<rankone::Rational, rankone::Rational> intersection(std::int64_t stage, const std::vector<std::int64_t>& a,
                                                               std::int64_t n, const std::vector<std::int64_t>& b) const {
    return intersection(stage, a, n, stage, b);
  }

  // Same with A on stage `sa` and B on stage `sb`.
  std::pair<rankone::Rational, rankone::Rational> intersection(std::int64_t sa, const std::vector<std::int64_t>& a, std::int64_t n,
                                                               std::int64_t sb, const std::vector<std::int64_t>& b) const {
    auto cls_a = classes(sa), cls_b = classes(sb);
    std::vector<char> in_a(static_cast<std::size_t>(height(sa)), 0), in_b(static_cast<std::size_t>(height(sb)), 0);
    for (auto l : a) in_a[static_cast<std::size_t>(l)] = 1;
    for (auto l : b) in_b[static_cast<std::size_t>(l)] = 1;
    const auto& fine = tower(deepest_stage());
    const std::int64_t H = static_cast<std::int64_t>(fine.size());
    std::int64_t hit = 0, open = 0;
    for (std::int64_t k = 0; k < H; ++k) {
      std::int64_t c = cls_a[static_cast<std::size_t>(k)];
      if (c < 0 || !in_a[static_cast<std::size_t>(c)]) continue;
      std::int64_t len = fine[static_cast<std::size_t>(k)].b - fine[static_cast<std::size_t>(k)].a;
      std::int64_t t = k + n;
      if (t < 0 || t >= H) {
        open += len;
        continue;
      }
      std::int64_t ct = cls_b[static_cast<std::size_t>(t)];
      if (ct >= 0 && in_b[static_cast<std::size_t>(ct)]) hit += len;
    }
    rankone::Rational lo(hit, denominator_);
    rankone::Rational hi(hit + open, denominator_);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
  }

  // Point-level check of mu(T^{n1} A ∩ T^{n2} B ∩ C) at the deepest stage.
  std::pair<rankone::Rational, rankone::Rational> triple(std::int64_t stage, const std::vector<std::int64_t>& a, std::int64_t n1,
                                                         const std::vector<std::int64_t>& b, std::int64_t n2,
                                                         const std::vector<std::int64_t>& c) const {
    auto cls = classes(stage);
    auto mark = [&](const std::vector<std::int64_t>& s) {
      std::vector<char> m(static_cast<std::size_t>(height(stage)), 0);
      for (auto l : s) m[static_cast<std::size_t>(l)] = 1;
      return m;
    };
    auto ia = mark(a), ib = mark(b), ic = mark(c);
    const auto& fine = tower(deepest_stage());
    const std::int64_t H = static_cast<std::int64_t>(fine.size());
    auto member = [&](std::int64_t k, const std::vector<char>& m) {
      std::int64_t cl = cls[static_cast<std::size_t>(k)];
      return cl >= 0 && m[static_cast<std::size_t>(cl)];
    };
    std::int64_t hit = 0, open = 0;
    // y = T^{n1} x with x in A, y in C, T^{-n2} y in B.
    for (std::int64_t x = 0; x < H; ++x) {
      if (!member(x, ia)) continue;
      std::int64_t len = fine[static_cast<std::size_t>(x)].b - fine[static_cast<std::size_t>(x)].a;
      std::int64_t y = x + n1, z = x + n1 - n2;
      bool y_in = y >= 0 && y < H, z_in = z >= 0 && z < H;
      if ((y_in && !member(y, ic)) || (z_in && !member(z, ib))) continue;
      if (!y_in || !z_in) open += len;
      else hit += len;
    }
    rankone::Rational lo(hit, denominator_), hi(hit + open, denominator_);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
  }

 private:
  std::int64_t start_;
  std::int64_t denominator_ = 1;
  std::vector<std::vector<Interval>> towers_;
};

}  // namespace oracle
