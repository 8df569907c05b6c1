#pragma once

// Internal iteration kernels shared by detection, search and the oracle.

#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cyclekit/cycle.hpp"
#include "cyclekit/mapping.hpp"
#include "cyclekit/numeric.hpp"

namespace cyclekit::detail {

template <class Int>
class Stepper;

/// 128-bit kernel. Callers guarantee |x| * max|m| + max|r| < 2^125.
template <>
class Stepper<i128> {
 public:
  explicit Stepper(const MappingDef& mapping) : d_(mapping.modulus()) {
    for (const auto& b : mapping.branches()) {
      m_.push_back(b.multiplier);
      r_.push_back(b.offset);
    }
    const auto ud = static_cast<std::uint64_t>(d_);
    pow2_ = std::has_single_bit(ud);
    shift_ = std::countr_zero(ud);
  }

  std::size_t residue(i128 x) const {
    if (pow2_) return static_cast<std::size_t>(x & static_cast<i128>(d_ - 1));
    if (fits64(x)) {
      auto q = static_cast<std::int64_t>(x) % d_;
      return static_cast<std::size_t>(q < 0 ? q + d_ : q);
    }
    auto q = x % d_;
    return static_cast<std::size_t>(q < 0 ? q + d_ : q);
  }

  void advance(i128& x) const {
    const std::size_t b = residue(x);
    const i128 y = static_cast<i128>(m_[b]) * x - r_[b];
    if (pow2_) {
      x = y >> shift_;  // exact multiple of d, so the arithmetic shift is exact
    } else if (fits64(y)) {
      x = static_cast<std::int64_t>(y) / d_;
    } else {
      x = y / d_;
    }
  }

  static bool exceeds(i128 x, i128 bound) { return x > bound || x < -bound; }

 private:
  static bool fits64(i128 x) { return x == static_cast<std::int64_t>(x); }

  std::int64_t d_;
  std::vector<std::int64_t> m_;
  std::vector<std::int64_t> r_;
  bool pow2_ = false;
  int shift_ = 0;
};

template <>
class Stepper<BigInt> {
 public:
  explicit Stepper(const MappingDef& mapping) : d_(static_cast<unsigned long>(mapping.modulus())) {
    for (const auto& b : mapping.branches()) {
      m_.push_back(b.multiplier);
      r_.push_back(b.offset);
    }
  }

  std::size_t residue(const BigInt& x) const { return mpz_fdiv_ui(x.get_mpz_t(), d_); }

  void advance(BigInt& x) const {
    const std::size_t b = residue(x);
    mpz_mul_si(scratch_.get_mpz_t(), x.get_mpz_t(), m_[b]);
    if (r_[b] >= 0) {
      mpz_sub_ui(scratch_.get_mpz_t(), scratch_.get_mpz_t(), static_cast<unsigned long>(r_[b]));
    } else {
      mpz_add_ui(scratch_.get_mpz_t(), scratch_.get_mpz_t(), static_cast<unsigned long>(-r_[b]));
    }
    mpz_divexact_ui(x.get_mpz_t(), scratch_.get_mpz_t(), d_);
  }

  static bool exceeds(const BigInt& x, const BigInt& bound) { return mpz_cmpabs(x.get_mpz_t(), bound.get_mpz_t()) > 0; }

 private:
  unsigned long d_;
  std::vector<long> m_;
  std::vector<long> r_;
  mutable BigInt scratch_;
};

/// True when every value allowed by `max_magnitude` can be stepped in 128 bits.
inline bool fast_path_ok(const MappingDef& mapping, const BigInt& max_magnitude) {
  const BigInt worst = max_magnitude * static_cast<long>(mapping.max_abs_multiplier()) +
                       static_cast<long>(mapping.max_abs_offset());
  return bit_length(worst) <= 124;
}

struct KnownCycle {
  std::size_t id = 0;
  std::uint64_t period = 0;
};

struct NoMemo {
  template <class Int>
  std::optional<KnownCycle> operator()(const Int&) const {
    return std::nullopt;
  }
};

template <class Int>
struct RawDetect {
  DetectStatus status = DetectStatus::StepCutoff;
  std::uint64_t tail = 0;
  std::uint64_t period = 0;
  Int entry{};
  std::optional<std::size_t> known_id;
};

inline std::uint64_t brent_cap(std::uint64_t max_steps) {
  // Brent finishes within 2*max(mu + 1, lambda) + lambda <= 3 * max_steps + 2
  // hare steps whenever mu + lambda <= max_steps.
  constexpr auto limit = std::numeric_limits<std::uint64_t>::max() / 8;
  return max_steps > limit ? std::numeric_limits<std::uint64_t>::max() : 4 * max_steps + 4;
}

/// Brent cycle finding followed by the tail rewind. `memo(x)` reports
/// membership of x in an already known cycle; the first such hit is the
/// cycle entry, so the classification matches a memo-free run exactly.
template <class Int, class Memo>
RawDetect<Int> detect_raw(const Stepper<Int>& st, const Int& start, std::uint64_t max_steps, const Int& max_mag,
                          const Memo& memo) {
  RawDetect<Int> out;
  auto classify = [&](std::uint64_t tail, std::uint64_t period) {
    out.tail = tail;
    out.period = period;
    out.status = (period <= max_steps && tail <= max_steps - period) ? DetectStatus::EnteredCycle
                                                                      : DetectStatus::StepCutoff;
  };

  if (Stepper<Int>::exceeds(start, max_mag)) {
    out.status = DetectStatus::MagnitudeCutoff;
    return out;
  }
  if (auto known = memo(start)) {
    out.entry = start;
    out.known_id = known->id;
    classify(0, known->period);
    return out;
  }

  const std::uint64_t cap = brent_cap(max_steps);
  Int tortoise = start;
  Int hare = start;
  std::uint64_t power = 1;
  std::uint64_t lam = 0;
  std::uint64_t index = 0;
  for (;;) {
    st.advance(hare);
    ++index;
    ++lam;
    if (Stepper<Int>::exceeds(hare, max_mag)) {
      out.status = index <= max_steps ? DetectStatus::MagnitudeCutoff : DetectStatus::StepCutoff;
      return out;
    }
    if (auto known = memo(hare)) {
      out.entry = hare;
      out.known_id = known->id;
      classify(index, known->period);
      return out;
    }
    if (hare == tortoise) break;
    if (index >= cap) {
      out.status = DetectStatus::StepCutoff;
      return out;
    }
    if (lam == power) {
      tortoise = hare;
      power <<= 1;
      lam = 0;
    }
  }

  // Rewind: a hare lam steps ahead of the tortoise meets it at the entry.
  Int t = start;
  Int h = start;
  for (std::uint64_t i = 0; i < lam; ++i) st.advance(h);
  std::uint64_t mu = 0;
  while (t != h) {
    st.advance(t);
    st.advance(h);
    ++mu;
  }
  out.entry = t;
  classify(mu, lam);
  return out;
}

inline BigInt to_big(const i128& x) { return from_i128(x); }
inline BigInt to_big(const BigInt& x) { return x; }

/// Lists `period` elements starting from `entry`.
template <class Int>
std::vector<BigInt> walk_cycle(const Stepper<Int>& st, Int entry, std::uint64_t period) {
  std::vector<BigInt> out;
  out.reserve(static_cast<std::size_t>(period));
  for (std::uint64_t i = 0; i < period; ++i) {
    out.push_back(to_big(entry));
    st.advance(entry);
  }
  return out;
}

}  // namespace cyclekit::detail
