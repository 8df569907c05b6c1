#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclekit/cycle.hpp"
#include "cyclekit/mapping.hpp"

namespace cyclekit {

/// Cycles of one mapping, sorted by (period, min element), pairwise disjoint.
struct CycleCatalog {
  MappingDef mapping;
  std::vector<Cycle> cycles;
  std::vector<std::string> notes;

  /// Index of the cycle containing `value`, if any.
  std::optional<std::size_t> find_containing(const BigInt& value) const;
  /// True when no value appears in two cycles.
  bool disjoint() const;
};

/// Sorts canonically and drops duplicates (same min element).
void normalize(CycleCatalog& catalog);

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct OracleOptions {
  std::uint64_t budget = 10'000'000;  // d^max_period must not exceed this
  unsigned threads = 0;               // 0 = hardware concurrency
};

struct OracleResult {
  CycleCatalog catalog;
  std::uint64_t sequences_examined = 0;
  /// Sequences whose composed slope is exactly 1 (no isolated fixed point).
  std::uint64_t unit_slope_skipped = 0;
  /// Of those, how many also have zero offset (every consistent x is periodic).
  std::uint64_t unit_slope_identity = 0;
};

/// Every cycle of period <= max_period, found by solving x = A x + B for
/// each branch sequence and keeping integer solutions whose replay follows
/// that sequence. Complete up to max_period. Throws BudgetExceeded when
/// d^max_period > options.budget.
OracleResult enumerate_cycles_exact(const MappingDef& mapping, std::size_t max_period, const OracleOptions& options = {});

/// A catalog entry as stored on disk: either the full element list, or a
/// single member plus the period, from which the cycle is rebuilt. The member
/// is `seed`, else `least_magnitude`, else `min`.
struct CatalogEntry {
  std::optional<std::vector<BigInt>> elements;
  std::optional<BigInt> seed;
  std::size_t period = 0;
  std::optional<BigInt> min;
  std::optional<BigInt> least_magnitude;
  std::optional<BranchCounts> counts;
  std::string note;
};

struct CatalogFile {
  MappingDef mapping;
  std::vector<CatalogEntry> entries;
  std::vector<std::string> notes;
};

CatalogFile to_catalog_file(const CycleCatalog& catalog);

struct EntryCheck {
  std::size_t index = 0;
  bool passed = false;
  std::string message;
  std::size_t period = 0;
  std::optional<BigInt> min;
  std::optional<BigInt> least_magnitude;
  BranchCounts counts;
};

struct VerifyReport {
  std::vector<EntryCheck> entries;
  bool all_passed() const;
  std::size_t failures() const;
};

/// Re-walks every entry under the mapping. A failure is a report entry, never an exception.
VerifyReport verify_catalog(const MappingDef& mapping, const std::vector<CatalogEntry>& entries);
VerifyReport verify_catalog(const CatalogFile& file);
VerifyReport verify_catalog(const CycleCatalog& catalog);

}  // namespace cyclekit
