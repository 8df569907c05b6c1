#include "cyclekit/affine.hpp"

#include <stdexcept>

namespace cyclekit {

AffineMap AffineMap::of_branch(const MappingDef& mapping, std::size_t branch) {
  const Branch& b = mapping.branch(branch);
  const BigInt d(static_cast<long>(mapping.modulus()));
  AffineMap out{ExactRatio(BigInt(static_cast<long>(b.multiplier)), d),
                ExactRatio(BigInt(static_cast<long>(-b.offset)), d)};
  out.slope.canonicalize();
  out.offset.canonicalize();
  return out;
}

AffineMap AffineMap::after(const AffineMap& first) const {
  return {slope * first.slope, slope * first.offset + offset};
}

AffineMap compose_affine(const MappingDef& mapping, std::span<const std::size_t> branch_sequence) {
  AffineMap acc;
  for (const auto b : branch_sequence) {
    if (b >= mapping.branch_count()) throw std::out_of_range("branch index out of range");
    acc = AffineMap::of_branch(mapping, b).after(acc);
  }
  return acc;
}

}  // namespace cyclekit
