#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclekit/numeric.hpp"

namespace cyclekit {

/// One residue-class branch: x -> (multiplier * x - offset) / modulus.
struct Branch {
  std::int64_t multiplier = 0;
  std::int64_t offset = 0;

  friend bool operator==(const Branch&, const Branch&) = default;
};

class MappingError : public std::invalid_argument {
 public:
  enum class Kind { ModulusTooSmall, BranchCountMismatch, ZeroMultiplier, CongruenceViolated, UnknownFamily };

  MappingError(Kind kind, std::optional<std::size_t> index, const std::string& message)
      : std::invalid_argument(message), kind_(kind), index_(index) {}

  Kind kind() const { return kind_; }
  /// Offending branch index, when the error concerns a single branch.
  std::optional<std::size_t> index() const { return index_; }

 private:
  Kind kind_;
  std::optional<std::size_t> index_;
};

/// A validated generalized 3x+1 mapping
///   T(x) = (m_i x - r_i) / d   when x = i (mod d),
/// with d >= 2, m_i != 0 and r_i = i * m_i (mod d) so every step is exact.
class MappingDef {
 public:
  /// Checks the invariants in order (modulus, branch count, then each branch)
  /// and throws MappingError naming the first violation.
  static MappingDef validate(std::int64_t modulus, std::vector<Branch> branches, std::string name = {});

  std::int64_t modulus() const { return modulus_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t index) const { return branches_.at(index); }
  std::size_t branch_count() const { return branches_.size(); }
  const std::string& name() const { return name_; }

  /// m_i / d as an exact ratio.
  ExactRatio ratio(std::size_t index) const;

  std::int64_t max_abs_multiplier() const;
  std::int64_t max_abs_offset() const;

  /// Structural equality (modulus and branches); the display name is ignored.
  bool same_map(const MappingDef& other) const {
    return modulus_ == other.modulus_ && branches_ == other.branches_;
  }

 private:
  MappingDef(std::int64_t modulus, std::vector<Branch> branches, std::string name)
      : modulus_(modulus), branches_(std::move(branches)), name_(std::move(name)) {}

  std::int64_t modulus_;
  std::vector<Branch> branches_;
  std::string name_;
};

struct StepResult {
  BigInt next;
  std::size_t branch = 0;
};

/// Canonical residue of x, always in 0..d-1 (so -330 mod 4 = 2).
std::size_t residue(const MappingDef& mapping, const BigInt& x);

StepResult apply(const MappingDef& mapping, const BigInt& x);

/// Per-branch usage counts of a walk.
struct BranchCounts {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  friend bool operator==(const BranchCounts&, const BranchCounts&) = default;
  friend auto operator<=>(const BranchCounts&, const BranchCounts&) = default;
};

/// Growth/division view of a count vector for the two-kind analyses.
struct GrowthSplit {
  std::uint64_t growth = 0;    // k1
  std::uint64_t division = 0;  // k2
  friend bool operator==(const GrowthSplit&, const GrowthSplit&) = default;
};

/// Which branches count as "growth" in k1. With exactly two distinct ratios
/// m_i/d the larger ratio is growth and the smaller one division; with any
/// other number of distinct ratios every non-zero residue counts as growth
/// (k2 + k3 + ... in the many-branch bound).
std::vector<bool> growth_branches(const MappingDef& mapping);

/// Number of distinct ratios m_i/d among the branches.
std::size_t distinct_ratio_count(const MappingDef& mapping);

GrowthSplit split_counts(const MappingDef& mapping, const BranchCounts& counts);

struct Trajectory {
  BigInt start;
  /// values[0] = start; values[j+1] = T(values[j]).
  std::vector<BigInt> values;
  /// branches[j] is the residue class of values[j].
  std::vector<std::size_t> branches;
  std::size_t modulus = 0;
  /// Set when the walk stopped early because |value| exceeded the cutoff.
  bool magnitude_cutoff = false;

  std::size_t steps() const { return branches.size(); }
};

struct TrajectoryLimits {
  std::optional<BigInt> max_magnitude;
};

Trajectory trajectory(const MappingDef& mapping, const BigInt& start, std::uint64_t steps,
                      const TrajectoryLimits& limits = {});

BranchCounts branch_counts(const Trajectory& trajectory);

// Named families.
MappingDef collatz();           // g(n): 2n/3, (4n-1)/3, (4n+1)/3
MappingDef three_x_plus_one();  // T(n): n/2, (3n+1)/2
MappingDef carnielli_T(std::int64_t d);
MappingDef carnielli_L(std::int64_t d);

/// The six assignments of the outputs {2n, 4n-3, 4n-1} to the classes
/// {3n, 3n-2, 3n-1}. Indices 1-4 are (2n,4n-3,4n-1), (2n,4n-1,4n-3),
/// (4n-3,4n-1,2n), (4n-3,2n,4n-1); 5 and 6 are the remaining two in
/// lexicographic order, (4n-1,2n,4n-3) and (4n-1,4n-3,2n).
MappingDef permutation_variant(int index);

}  // namespace cyclekit
