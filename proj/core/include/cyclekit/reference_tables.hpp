#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cyclekit/nodes.hpp"

namespace cyclekit {

/// One published node row. `printed_main` is the label as printed, which is
/// not always the strictly increasing main index; rows are matched by (k1, k2).
struct ReferenceRow {
  std::uint64_t printed_main = 0;
  Side side = Side::PP;
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  std::uint64_t k = 0;
  std::string_view lambda;
  std::string_view ln_C;  // empty for seeds
};

/// Published node rows for the {4/3, 2/3} family (constant 7/24).
std::span<const ReferenceRow> collatz_reference_nodes();
/// Published node rows for the 3x+1 family (constant 5/12).
std::span<const ReferenceRow> three_x_plus_one_reference_nodes();

struct ReferenceTolerance {
  ExactRatio lambda{1, 10'000'000'000'000};  // 1e-13
  double ln_C = 1e-5;
};

struct ReferenceCheck {
  ReferenceRow row;
  bool found = false;
  bool side_ok = false;
  bool k_ok = false;
  bool lambda_ok = false;
  bool ln_C_ok = false;
  double lambda_diff = 0;
  double ln_C_diff = 0;

  bool passed() const { return found && side_ok && k_ok && lambda_ok && ln_C_ok; }
};

/// Looks up every reference row among `nodes` by (k1, k2) and compares.
std::vector<ReferenceCheck> compare_with_reference(const std::vector<Node>& nodes, std::span<const ReferenceRow> rows,
                                                   const ReferenceTolerance& tolerance = {});

}  // namespace cyclekit
