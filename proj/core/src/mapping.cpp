#include "cyclekit/mapping.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <set>

namespace cyclekit {

MappingDef MappingDef::validate(std::int64_t modulus, std::vector<Branch> branches, std::string name) {
  if (modulus < 2) {
    throw MappingError(MappingError::Kind::ModulusTooSmall, std::nullopt,
                       "modulus d must be >= 2 (got " + std::to_string(modulus) + ")");
  }
  if (branches.size() != static_cast<std::size_t>(modulus)) {
    throw MappingError(MappingError::Kind::BranchCountMismatch, std::nullopt,
                       "expected " + std::to_string(modulus) + " branches, got " + std::to_string(branches.size()));
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    if (b.multiplier == 0) {
      throw MappingError(MappingError::Kind::ZeroMultiplier, i, "branch " + std::to_string(i) + ": multiplier is zero");
    }
    // r_i = i * m_i (mod d), evaluated without overflow.
    const BigInt lhs = BigInt(static_cast<long>(b.offset));
    const BigInt rhs = BigInt(static_cast<long>(i)) * BigInt(static_cast<long>(b.multiplier));
    if (floor_mod(lhs - rhs, static_cast<std::uint64_t>(modulus)) != 0) {
      throw MappingError(MappingError::Kind::CongruenceViolated, i,
                         "branch " + std::to_string(i) + ": r = " + std::to_string(b.offset) + " is not congruent to " +
                             std::to_string(i) + "*" + std::to_string(b.multiplier) + " (mod " +
                             std::to_string(modulus) + ")");
    }
  }
  return MappingDef(modulus, std::move(branches), std::move(name));
}

ExactRatio MappingDef::ratio(std::size_t index) const {
  ExactRatio q(BigInt(static_cast<long>(branches_.at(index).multiplier)), BigInt(static_cast<long>(modulus_)));
  q.canonicalize();
  return q;
}

std::int64_t MappingDef::max_abs_multiplier() const {
  std::int64_t out = 0;
  for (const auto& b : branches_) out = std::max<std::int64_t>(out, std::llabs(b.multiplier));
  return out;
}

std::int64_t MappingDef::max_abs_offset() const {
  std::int64_t out = 0;
  for (const auto& b : branches_) out = std::max<std::int64_t>(out, std::llabs(b.offset));
  return out;
}

std::size_t residue(const MappingDef& mapping, const BigInt& x) {
  return static_cast<std::size_t>(floor_mod(x, static_cast<std::uint64_t>(mapping.modulus())));
}

StepResult apply(const MappingDef& mapping, const BigInt& x) {
  const std::size_t b = residue(mapping, x);
  const Branch& br = mapping.branch(b);
  BigInt numerator = x * static_cast<long>(br.multiplier) - static_cast<long>(br.offset);
  BigInt next;
  mpz_divexact_ui(next.get_mpz_t(), numerator.get_mpz_t(), static_cast<unsigned long>(mapping.modulus()));
  return {std::move(next), b};
}

std::uint64_t BranchCounts::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::size_t distinct_ratio_count(const MappingDef& mapping) {
  std::vector<ExactRatio> ratios;
  for (std::size_t i = 0; i < mapping.branch_count(); ++i) {
    const auto q = mapping.ratio(i);
    if (std::find(ratios.begin(), ratios.end(), q) == ratios.end()) ratios.push_back(q);
  }
  return ratios.size();
}

std::vector<bool> growth_branches(const MappingDef& mapping) {
  std::vector<bool> growth(mapping.branch_count(), false);
  if (distinct_ratio_count(mapping) == 2) {
    ExactRatio smallest = mapping.ratio(0);
    for (std::size_t i = 1; i < mapping.branch_count(); ++i) smallest = std::min(smallest, mapping.ratio(i));
    for (std::size_t i = 0; i < mapping.branch_count(); ++i) growth[i] = mapping.ratio(i) != smallest;
  } else {
    for (std::size_t i = 1; i < mapping.branch_count(); ++i) growth[i] = true;
  }
  return growth;
}

GrowthSplit split_counts(const MappingDef& mapping, const BranchCounts& counts) {
  const auto growth = growth_branches(mapping);
  GrowthSplit split;
  for (std::size_t i = 0; i < counts.counts.size() && i < growth.size(); ++i) {
    (growth[i] ? split.growth : split.division) += counts.counts[i];
  }
  return split;
}

Trajectory trajectory(const MappingDef& mapping, const BigInt& start, std::uint64_t steps,
                      const TrajectoryLimits& limits) {
  Trajectory out;
  out.start = start;
  out.modulus = static_cast<std::size_t>(mapping.modulus());
  out.values.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(steps, 1u << 20)) + 1);
  out.values.push_back(start);
  BigInt x = start;
  for (std::uint64_t s = 0; s < steps; ++s) {
    if (limits.max_magnitude && abs(x) > *limits.max_magnitude) {
      out.magnitude_cutoff = true;
      break;
    }
    auto step = apply(mapping, x);
    out.branches.push_back(step.branch);
    x = std::move(step.next);
    out.values.push_back(x);
  }
  return out;
}

BranchCounts branch_counts(const Trajectory& trajectory) {
  BranchCounts out{std::vector<std::uint64_t>(trajectory.modulus, 0)};
  for (const auto b : trajectory.branches) ++out.counts[b];
  return out;
}

MappingDef collatz() { return MappingDef::validate(3, {{2, 0}, {4, 1}, {4, -1}}, "collatz"); }

MappingDef three_x_plus_one() { return MappingDef::validate(2, {{1, 0}, {3, -1}}, "3x1"); }

MappingDef carnielli_T(std::int64_t d) {
  if (d < 2) {
    throw MappingError(MappingError::Kind::ModulusTooSmall, std::nullopt, "carnielli-T needs d >= 2");
  }
  std::vector<Branch> branches{{1, 0}};
  for (std::int64_t i = 1; i < d; ++i) branches.push_back({d + 1, -(d - i)});
  return MappingDef::validate(d, std::move(branches), "carnielli-T:" + std::to_string(d));
}

MappingDef carnielli_L(std::int64_t d) {
  if (d < 2) {
    throw MappingError(MappingError::Kind::ModulusTooSmall, std::nullopt, "carnielli-L needs d >= 2");
  }
  std::vector<Branch> branches(static_cast<std::size_t>(d));
  branches[0] = {1, 0};
  // Representatives i with -d/2 < i <= d/2, i != 0, i.e. 2i in (-d, d].
  for (std::int64_t i = -d; i <= d; ++i) {
    if (i == 0 || 2 * i <= -d || 2 * i > d) continue;
    const auto slot = static_cast<std::size_t>(((i % d) + d) % d);
    branches[slot] = {d + 1, i};
  }
  return MappingDef::validate(d, std::move(branches), "carnielli-L:" + std::to_string(d));
}

MappingDef permutation_variant(int index) {
  if (index < 1 || index > 6) {
    throw MappingError(MappingError::Kind::UnknownFamily, std::nullopt,
                       "permutation variant index must be in 1..6 (got " + std::to_string(index) + ")");
  }
  // Outputs a*n + b: 2n, 4n-3, 4n-1.
  struct Output {
    std::int64_t a, b;
  };
  constexpr std::array<Output, 3> outputs{{{2, 0}, {4, -3}, {4, -1}}};
  // Output assigned to classes 3n, 3n-2, 3n-1 respectively.
  constexpr std::array<std::array<int, 3>, 6> assignments{{
      {0, 1, 2},
      {0, 2, 1},
      {1, 2, 0},
      {1, 0, 2},
      {2, 0, 1},
      {2, 1, 0},
  }};
  // Class 3n - c has residue (-c) mod 3 and n = (x + c) / 3.
  constexpr std::array<std::int64_t, 3> shift{0, 2, 1};
  std::vector<Branch> branches(3);
  const auto& assignment = assignments[static_cast<std::size_t>(index - 1)];
  for (std::size_t cls = 0; cls < 3; ++cls) {
    const Output& o = outputs[static_cast<std::size_t>(assignment[cls])];
    // a * (x + c) / 3 + b = (a x - (-(a c + 3 b))) / 3
    const std::size_t res = cls;  // classes 3n, 3n-2, 3n-1 have residues 0, 1, 2
    branches[res] = {o.a, -(o.a * shift[cls] + 3 * o.b)};
  }
  return MappingDef::validate(3, std::move(branches), "perm:" + std::to_string(index));
}

}  // namespace cyclekit
