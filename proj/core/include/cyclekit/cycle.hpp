#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cyclekit/mapping.hpp"

namespace cyclekit {

class CycleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integer cycle rotated so that its smallest element comes first.
struct Cycle {
  std::vector<BigInt> elements;
  BranchCounts counts;

  std::size_t period() const { return elements.size(); }
  const BigInt& min_element() const { return elements.front(); }
  /// Element of smallest absolute value (the negative one on a tie). Negative
  /// cycles are conventionally quoted by this element, e.g. <-17, -25, ...>.
  const BigInt& least_magnitude() const;
  bool contains(const BigInt& value) const;

  friend bool operator==(const Cycle& a, const Cycle& b) { return a.elements == b.elements; }
};

/// Orders by (period, min element); used for every catalog listing.
bool canonical_less(const Cycle& a, const Cycle& b);

/// Rotates a closed orbit so its minimum is first and tallies branch usage.
/// Throws CycleError if the sequence is empty, repeats a value, or is not
/// closed under the mapping.
Cycle canonicalize(const MappingDef& mapping, std::span<const BigInt> raw_elements);

struct DetectLimits {
  std::uint64_t max_steps = 1'000'000;
  BigInt max_magnitude = BigInt("1000000000000000000000000000000");  // 10^30
};

enum class DetectStatus {
  EnteredCycle,     // tail + period <= max_steps
  StepCutoff,       // no repeat within max_steps steps
  MagnitudeCutoff,  // |x_i| > max_magnitude for some i <= max_steps before any repeat
};

const char* to_string(DetectStatus status);

struct DetectResult {
  DetectStatus status = DetectStatus::StepCutoff;
  std::optional<Cycle> cycle;
  /// Steps before the trajectory first reaches the cycle (mu).
  std::uint64_t tail_length = 0;
};

/// Follows the trajectory from `start` with Brent's algorithm (constant
/// memory), then rewinds to locate the cycle entry and lists the cycle.
/// Small magnitudes run on 128-bit integers; anything the cutoffs allow to
/// grow past that runs on GMP integers.
DetectResult detect_cycle(const MappingDef& mapping, const BigInt& start, const DetectLimits& limits = {});

}  // namespace cyclekit
