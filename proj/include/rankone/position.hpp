#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "rankone/arith.hpp"
#include "rankone/error.hpp"
#include "rankone/tower.hpp"

namespace rankone {

// Machine positions used inside the kernels. The dispatcher starts with the
// narrowest type and retries wider ones when a tower height does not fit.
using Pos128 = __int128;
using Pos256 = boost::multiprecision::int256_t;
using PosBig = boost::multiprecision::cpp_int;

enum class PosWidth { W128, W256, Arbitrary };

struct PosOverflow : Error {
  explicit PosOverflow(const std::string& what) : Error(ErrorCode::ScaleExceeded, what) {}
};

template <class Pos>
struct PosTraits;

template <>
struct PosTraits<Pos128> {
  static constexpr std::size_t usable_bits = 120;
  static constexpr PosWidth width = PosWidth::W128;
  static Pos128 from_big(const BigInt& v) { return to_level(v); }
  static BigInt to_big(Pos128 v) { return rankone::to_big(v); }
  static std::uint64_t low64(Pos128 v) { return static_cast<std::uint64_t>(v); }
};

template <>
struct PosTraits<Pos256> {
  static constexpr std::size_t usable_bits = 248;
  static constexpr PosWidth width = PosWidth::W256;
  static Pos256 from_big(const BigInt& v) { return Pos256(v.get_str(10)); }
  static BigInt to_big(const Pos256& v) { return big_from_string(v.str()); }
  static std::uint64_t low64(const Pos256& v) { return static_cast<std::uint64_t>(v & Pos256(0xffffffffffffffffull)); }
};

template <>
struct PosTraits<PosBig> {
  static constexpr std::size_t usable_bits = static_cast<std::size_t>(-1);
  static constexpr PosWidth width = PosWidth::Arbitrary;
  static PosBig from_big(const BigInt& v) { return PosBig(v.get_str(10)); }
  static BigInt to_big(const PosBig& v) { return big_from_string(v.str()); }
  static std::uint64_t low64(const PosBig& v) { return static_cast<std::uint64_t>(v & PosBig(0xffffffffffffffffull)); }
};

template <class Pos>
Pos pos_from_big(const BigInt& v) {
  if (bit_length(v) > PosTraits<Pos>::usable_bits) throw PosOverflow("value needs " + std::to_string(bit_length(v)) + " bits");
  return PosTraits<Pos>::from_big(v);
}

template <class Pos>
std::size_t pos_to_index(const Pos& v) {
  return static_cast<std::size_t>(v);
}

template <class Pos>
struct PosHash {
  std::size_t operator()(const Pos& v) const {
    std::uint64_t x = PosTraits<Pos>::low64(v);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

/// Machine-width copy of the towers J .. K, extended on demand.
template <class Pos>
class TowerView {
 public:
  TowerView(const TowerChain& chain, std::int64_t base) : chain_(chain), base_(base) { ensure(base); }

  std::int64_t base() const { return base_; }
  std::int64_t last() const { return base_ + static_cast<std::int64_t>(h_.size()) - 1; }

  void ensure(std::int64_t k) {
    while (last() < k) {
      const Tower& t = chain_.tower(last() + 1);
      // Sums of a position and a shift must stay representable.
      if (bit_length(t.next_height) + 2 > PosTraits<Pos>::usable_bits)
        throw PosOverflow("stage " + std::to_string(t.stage) + " exceeds the position width");
      h_.push_back(pos_from_big<Pos>(t.height));
      std::vector<Pos> o;
      o.reserve(t.offsets.size());
      for (const auto& x : t.offsets) o.push_back(pos_from_big<Pos>(x));
      off_.push_back(std::move(o));
      r_.push_back(t.vector.r);
      m_.push_back(t.level_measure);
    }
  }

  const Pos& height(std::int64_t k) {
    ensure(k);
    return h_[idx(k)];
  }
  const std::vector<Pos>& offsets(std::int64_t k) {
    ensure(k);
    return off_[idx(k)];
  }
  std::int64_t r(std::int64_t k) {
    ensure(k);
    return r_[idx(k)];
  }
  const Rational& level_measure(std::int64_t k) {
    ensure(k);
    return m_[idx(k)];
  }

  // Level at the base stage holding position q of the stage-k tower, or -1 for spacer.
  // Requires ensure(k) to have been called; safe for concurrent readers afterwards.
  Pos decode_to_base(Pos q, std::int64_t k) const {
    for (std::int64_t s = k - 1; s >= base_; --s) {
      const auto& o = off_[idx(s)];
      auto it = std::upper_bound(o.begin(), o.end(), q);
      q -= *(it - 1);
      if (q >= h_[idx(s)]) return Pos(-1);
    }
    return q;
  }

  const Pos& height_at(std::int64_t k) const { return h_[idx(k)]; }
  const std::vector<Pos>& offsets_at(std::int64_t k) const { return off_[idx(k)]; }

 private:
  std::size_t idx(std::int64_t k) const { return static_cast<std::size_t>(k - base_); }

  const TowerChain& chain_;
  std::int64_t base_;
  std::vector<Pos> h_;
  std::vector<std::vector<Pos>> off_;
  std::vector<std::int64_t> r_;
  std::vector<Rational> m_;
};

// Runs fn(Pos{}) with the narrowest position type whose range suffices.
template <class Fn>
auto dispatch_positions(Fn&& fn) {
  try {
    return fn(Pos128{});
  } catch (const PosOverflow&) {
  }
  try {
    return fn(Pos256{});
  } catch (const PosOverflow&) {
  }
  return fn(PosBig{});
}

}  // namespace rankone
