#pragma once

#include <cstddef>
#include <span>

#include "cyclekit/mapping.hpp"

namespace cyclekit {

/// x -> slope * x + offset, exactly. For a composed branch sequence the slope
/// is the product of m_i/d (lambda) and the offset is the order-dependent
/// remainder (rho_k for g, delta_k for T).
struct AffineMap {
  ExactRatio slope{1};
  ExactRatio offset{0};

  static AffineMap identity() { return {}; }
  static AffineMap of_branch(const MappingDef& mapping, std::size_t branch);

  ExactRatio operator()(const ExactRatio& x) const { return slope * x + offset; }

  /// (*this) applied after `first`.
  AffineMap after(const AffineMap& first) const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// Composition of the given branches in order: the first index is applied first.
AffineMap compose_affine(const MappingDef& mapping, std::span<const std::size_t> branch_sequence);

}  // namespace cyclekit
