#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclekit/mapping.hpp"
#include "cyclekit/numeric.hpp"
#include "cyclekit/real.hpp"

namespace cyclekit {

/// A logarithm together with a rigorous bound: |exact - value| <= 2^error_exponent.
struct CertifiedLog {
  Real value;
  long error_exponent = 0;

  /// Sign of the exact quantity (0 only for an exact zero).
  int certain_sign() const;
};

/// Exact lambda = prod_i (m_i / d)^counts_i.
ExactRatio lambda_exact(const MappingDef& mapping, const BranchCounts& counts);

/// sum_i counts_i * (ln m_i - ln d), with error at most 2^-(precision_bits - 8).
/// The value is exactly zero only when lambda = 1. Throws std::domain_error
/// when a negative multiplier makes lambda negative (no real logarithm).
CertifiedLog ln_lambda(const MappingDef& mapping, const BranchCounts& counts, unsigned precision_bits = 256);

/// One term of sum_i count_i * ln(ratio_i); ratios must be positive.
struct LogTerm {
  BigInt count;
  ExactRatio ratio;
};

/// Certified evaluation of a sum of logarithms. Precision is raised until the
/// sign is certain, so callers must rule out an exact zero beforehand.
CertifiedLog log_combination(std::span<const LogTerm> terms, unsigned precision_bits = 256);

/// (4^k1 - 3^k1) / 3^k1: the largest |offset| over every ordering of k1
/// growth steps and any number of 2n/3 steps of the original Collatz map.
ExactRatio rho_max(std::uint64_t k1);

namespace bound_constants {
ExactRatio collatz();           // 7/24, valid for m >= 1
ExactRatio atkin();             // 63/248, valid for m >= 8
ExactRatio three_x_plus_one();  // 5/12, valid for |m| >= 1
}  // namespace bound_constants

struct BoundResult {
  Real C;
  Real ln_C;
  ExactRatio constant;
  /// lambda was negative and |lambda| was used instead.
  bool used_absolute_lambda = false;
};

/// C = constant / ((1 / k_growth) |ln lambda|). Throws std::domain_error when
/// lambda = 1 or k_growth = 0 (no bound exists).
BoundResult bound_C(const CertifiedLog& ln_lambda, const BigInt& k_growth, const ExactRatio& constant,
                    unsigned precision_bits = 256);

/// Bound for a branch-count vector; k_growth comes from growth_branches().
BoundResult bound_C(const MappingDef& mapping, const BranchCounts& counts, const ExactRatio& constant,
                    unsigned precision_bits = 256);

/// Mapping whose lambda is built from exactly two ratios, one below 1
/// (division, counted by k2) and one above 1 (growth, counted by k1).
struct TwoRatioFamily {
  std::string name;
  ExactRatio growth;
  ExactRatio division;

  static TwoRatioFamily collatz();           // 4/3 and 2/3
  static TwoRatioFamily three_x_plus_one();  // 3/2 and 1/2
  /// Throws std::invalid_argument unless the mapping has two distinct ratios
  /// straddling 1.
  static TwoRatioFamily from_mapping(const MappingDef& mapping);

  /// 7/24 for the {4/3, 2/3} family, 5/12 for {3/2, 1/2}; none otherwise.
  std::optional<ExactRatio> default_constant() const;

  ExactRatio lambda(std::uint64_t k1, std::uint64_t k2) const;
};

enum class Side { PP, PG };

const char* to_string(Side side);

struct Node {
  std::uint64_t main_index = 1;
  std::uint64_t secondary_index = 1;
  Side side = Side::PP;
  bool seed = false;
  BigInt k1;
  BigInt k2;
  /// Exact value, kept while k is below NodeOptions::exact_k_limit.
  std::optional<ExactRatio> lambda;
  CertifiedLog ln_lambda;
  /// Present for products when a bound constant was supplied.
  std::optional<Real> ln_C;

  BigInt k() const { return k1 + k2; }
  /// lambda as a decimal-ready real (exact value rounded, or exp(ln lambda)).
  Real lambda_value(unsigned precision_bits = 128) const;
};

struct NodeStop {
  std::optional<std::uint64_t> max_main;      // largest main index emitted
  std::optional<BigInt> max_k;                // largest k emitted
  std::optional<std::uint64_t> max_products;  // products emitted after the seeds
};

struct NodeOptions {
  unsigned precision_bits = 256;
  std::optional<ExactRatio> constant;
  std::uint64_t exact_k_limit = 100'000;
};

/// Runs the PP/PG product algorithm: seeds PP = division (0,1) and
/// PG = growth (1,0); each product PP*PG replaces PP when below 1, PG when
/// above. The main index advances whenever the replaced side flips; the
/// secondary index counts within a run. Seeds are both N_{1,1}.
std::vector<Node> generate_nodes(const TwoRatioFamily& family, const NodeStop& stop, const NodeOptions& options = {});

struct ReciprocalPair {
  std::size_t position = 0;  // index in the aligned sequence
  const Node* g = nullptr;
  const Node* t = nullptr;
  bool reciprocal = false;
  bool exact = false;  // decided with exact ratios rather than certified logs
  bool sides_swapped = false;
};

struct RunPair {
  std::string g_label;
  std::string t_label;
  std::size_t g_count = 0;
  std::size_t t_count = 0;
  bool match = false;
};

struct ReciprocityReport {
  std::vector<ReciprocalPair> pairs;
  std::vector<RunPair> runs;
  /// Nodes left over on the longer side; nonzero means the depths do not correspond.
  std::size_t unpaired = 0;
  bool ok() const;
};

/// Pairs the 3x+1 node sequence (without its first seed, 1/2) against the
/// g-family sequence and checks value reciprocity, swapped sides and equal
/// run structure. Main node i of g pairs with main node i+1 of 3x+1.
ReciprocityReport reciprocity_check(const std::vector<Node>& g_nodes, const std::vector<Node>& t_nodes);

}  // namespace cyclekit
