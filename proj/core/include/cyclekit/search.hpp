#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclekit/catalog.hpp"
#include "cyclekit/cycle.hpp"
#include "cyclekit/nodes.hpp"

namespace cyclekit {

struct SearchOptions {
  DetectLimits limits;
  unsigned threads = 0;  // 0 = hardware concurrency
  /// Stop a trajectory as soon as it touches a cycle this worker already knows.
  bool use_memo = true;
  std::int64_t block_size = 2048;
};

struct SearchReport {
  MappingDef mapping;
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  DetectLimits limits;
  CycleCatalog catalog;
  /// hits[i] = number of starts whose trajectory entered catalog.cycles[i].
  std::vector<std::uint64_t> hits;
  std::uint64_t entered = 0;
  std::uint64_t step_cutoff = 0;
  std::uint64_t magnitude_cutoff = 0;
  std::vector<std::string> notes;

  std::uint64_t starts() const { return entered + step_cutoff + magnitude_cutoff; }
};

/// Runs detect_cycle from every start in [lo, hi]. The result does not
/// depend on the thread count or on memoization. Throws
/// std::invalid_argument when lo > hi or a cutoff is not positive.
SearchReport search_range(const MappingDef& mapping, std::int64_t lo, std::int64_t hi, const SearchOptions& options = {});

enum class SignPolicy { Auto, Positive, Negative, Both };

struct NodeSearchOptions {
  SearchOptions search;
  SignPolicy signs = SignPolicy::Auto;
  /// Largest |start| actually searched when C is enormous.
  std::int64_t max_range = 10'000'000;
};

struct NodeSearchReport {
  SearchReport report;  // catalog holds only cycles with the node's (k1, k2)
  BigInt k1;
  BigInt k2;
  Side side = Side::PP;
  BoundResult bound;
  BigInt bound_floor;  // floor(C)
  bool empty = false;
  bool truncated = false;
};

/// Searches every start with 1 <= |m| <= C for the node's bound C and keeps
/// the cycles whose (growth, division) counts equal (k1, k2). With
/// SignPolicy::Auto the {4/3, 2/3} family is searched on positive starts
/// (its map is odd), the {3/2, 1/2} family on positive starts for PP nodes
/// and negative starts for PG nodes, anything else on both signs.
NodeSearchReport search_node(const MappingDef& mapping, const BigInt& k1, const BigInt& k2,
                             const ExactRatio& constant, const NodeSearchOptions& options = {});

struct ProfileEntry {
  BigInt start;
  /// Step at which the trajectory first came back to `start`, if within the horizon.
  std::optional<std::uint64_t> return_step;
  /// Counts at the return step, or after `horizon` steps when there is none.
  BranchCounts counts;
  ExactRatio lambda;
  bool magnitude_cutoff = false;
};

struct LambdaProfile {
  std::vector<ProfileEntry> entries;
  std::map<BranchCounts, std::uint64_t> histogram;
  std::uint64_t returned = 0;
};

/// Branch counts and lambda of each sampled trajectory, either at its first
/// return or at the horizon.
LambdaProfile lambda_profile(const MappingDef& mapping, std::span<const BigInt> starts, std::uint64_t horizon,
                             const TrajectoryLimits& limits = {});

}  // namespace cyclekit
