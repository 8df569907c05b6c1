#include "cyclekit/nodes.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace cyclekit {

namespace {

constexpr long kExactZero = LONG_MIN / 4;
constexpr mpfr_prec_t kMaxWorkingPrecision = mpfr_prec_t{1} << 26;

long ceil_log2(std::size_t n) {
  long bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

// Above this many bits the exact product is not formed just to test lambda = 1.
constexpr std::uint64_t kExactTestBits = std::uint64_t{1} << 24;

}  // namespace

int CertifiedLog::certain_sign() const {
  if (value.is_zero()) return 0;
  return value.sign();
}

ExactRatio lambda_exact(const MappingDef& mapping, const BranchCounts& counts) {
  if (counts.counts.size() != mapping.branch_count()) {
    throw std::invalid_argument("branch count vector has " + std::to_string(counts.counts.size()) +
                                " entries, mapping has " + std::to_string(mapping.branch_count()) + " branches");
  }
  ExactRatio out(1);
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    if (counts.counts[i] != 0) out *= pow(mapping.ratio(i), counts.counts[i]);
  }
  return out;
}

CertifiedLog log_combination(std::span<const LogTerm> terms, unsigned precision_bits) {
  // Each term c * ln(q) is bounded by c * 2^e with e the exponent of ln(q).
  std::vector<const LogTerm*> live;
  long magnitude_bits = LONG_MIN;
  std::size_t count_bits = 0;
  for (const auto& t : terms) {
    if (sgn(t.ratio) <= 0) throw std::domain_error("logarithm of a non-positive ratio");
    if (sgn(t.count) == 0 || t.ratio == 1) continue;
    live.push_back(&t);
    const long e = log(t.ratio, 64).exponent() + 1;
    magnitude_bits = std::max(magnitude_bits, static_cast<long>(bit_length(t.count)) + e);
    count_bits = std::max(count_bits, bit_length(t.count));
  }
  if (live.empty()) return {Real(precision_bits), kExactZero};

  // Rounding: at most 2 ulps per product and one per addition, all bounded
  // by S * 2^-w with S = sum |c_i ln q_i| <= 2^(magnitude_bits + log2 n).
  const long sum_bits = magnitude_bits + ceil_log2(live.size()) + ceil_log2(live.size() + 2);
  mpfr_prec_t w = static_cast<mpfr_prec_t>(precision_bits) + 16 + std::max(sum_bits, 0L);
  w = std::max<mpfr_prec_t>(w, static_cast<mpfr_prec_t>(count_bits) + 2);
  for (;;) {
    Real sum(w);
    for (const LogTerm* t : live) sum = sum + Real::from(t->count, w) * log(t->ratio, w);
    const long err = sum_bits - static_cast<long>(w);
    if (!sum.is_zero() && sum.exponent() - 1 > err) return {sum, err};
    if (w >= kMaxWorkingPrecision) {
      throw std::domain_error("cannot certify the sign of a logarithm sum (value may be exactly zero)");
    }
    w *= 2;
  }
}

namespace {

// ln |lambda| plus whether lambda itself is negative.
CertifiedLog ln_abs_lambda(const MappingDef& mapping, const BranchCounts& counts, unsigned precision_bits,
                           bool& negative) {
  if (counts.counts.size() != mapping.branch_count()) {
    throw std::invalid_argument("branch count vector has " + std::to_string(counts.counts.size()) +
                                " entries, mapping has " + std::to_string(mapping.branch_count()) + " branches");
  }
  negative = false;
  std::uint64_t bits = 0;
  std::vector<LogTerm> terms;
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    const auto c = counts.counts[i];
    if (c == 0) continue;
    const auto& b = mapping.branch(i);
    if (b.multiplier < 0 && c % 2 == 1) negative = !negative;
    ExactRatio q = abs(mapping.ratio(i));
    terms.push_back({BigInt(std::to_string(c)), q});
    bits += c * (bit_length(BigInt(static_cast<long>(std::llabs(b.multiplier)))) +
                 bit_length(BigInt(static_cast<long>(mapping.modulus()))));
  }
  if (bits <= kExactTestBits && abs(lambda_exact(mapping, counts)) == 1) {
    return {Real(precision_bits), kExactZero};
  }
  return log_combination(terms, precision_bits);
}

}  // namespace

CertifiedLog ln_lambda(const MappingDef& mapping, const BranchCounts& counts, unsigned precision_bits) {
  bool negative = false;
  auto out = ln_abs_lambda(mapping, counts, precision_bits, negative);
  if (negative) throw std::domain_error("lambda is negative; its logarithm is undefined");
  return out;
}

ExactRatio rho_max(std::uint64_t k1) {
  const BigInt four = pow(BigInt(4), k1);
  const BigInt three = pow(BigInt(3), k1);
  ExactRatio out(four - three, three);
  out.canonicalize();
  return out;
}

namespace bound_constants {
ExactRatio collatz() { return ExactRatio(7, 24); }
ExactRatio atkin() { return ExactRatio(63, 248); }
ExactRatio three_x_plus_one() { return ExactRatio(5, 12); }
}  // namespace bound_constants

BoundResult bound_C(const CertifiedLog& ln_lambda, const BigInt& k_growth, const ExactRatio& constant,
                    unsigned precision_bits) {
  if (sgn(k_growth) <= 0) throw std::domain_error("no growth branches (k_growth = 0): bound undefined");
  if (ln_lambda.certain_sign() == 0) throw std::domain_error("lambda = 1: bound undefined");
  if (sgn(constant) <= 0) throw std::domain_error("bound constant must be positive");
  const mpfr_prec_t w = static_cast<mpfr_prec_t>(precision_bits) + 16;
  const Real abs_ln = abs(ln_lambda.value).rounded(w);
  BoundResult out{Real(w), Real(w), constant, false};
  out.ln_C = log(constant, w) + log(Real::from(k_growth, w)) - log(abs_ln);
  out.C = exp(out.ln_C);
  return out;
}

BoundResult bound_C(const MappingDef& mapping, const BranchCounts& counts, const ExactRatio& constant,
                    unsigned precision_bits) {
  bool negative = false;
  const auto ln = ln_abs_lambda(mapping, counts, precision_bits, negative);
  const auto growth = growth_branches(mapping);
  std::uint64_t k_growth = 0;
  for (std::size_t i = 0; i < counts.counts.size(); ++i) {
    if (growth[i]) k_growth += counts.counts[i];
  }
  auto out = bound_C(ln, BigInt(std::to_string(k_growth)), constant, precision_bits);
  out.used_absolute_lambda = negative;
  return out;
}

TwoRatioFamily TwoRatioFamily::collatz() { return {"collatz", ExactRatio(4, 3), ExactRatio(2, 3)}; }

TwoRatioFamily TwoRatioFamily::three_x_plus_one() { return {"3x1", ExactRatio(3, 2), ExactRatio(1, 2)}; }

TwoRatioFamily TwoRatioFamily::from_mapping(const MappingDef& mapping) {
  if (distinct_ratio_count(mapping) != 2) {
    throw std::invalid_argument("node generation needs exactly two distinct branch ratios m_i/d");
  }
  ExactRatio lo = mapping.ratio(0);
  ExactRatio hi = lo;
  for (std::size_t i = 1; i < mapping.branch_count(); ++i) {
    lo = std::min(lo, mapping.ratio(i));
    hi = std::max(hi, mapping.ratio(i));
  }
  if (sgn(lo) <= 0 || lo >= 1 || hi <= 1) {
    throw std::invalid_argument("node generation needs one positive ratio below 1 and one above 1");
  }
  return {mapping.name(), hi, lo};
}

std::optional<ExactRatio> TwoRatioFamily::default_constant() const {
  if (growth == ExactRatio(4, 3) && division == ExactRatio(2, 3)) return bound_constants::collatz();
  if (growth == ExactRatio(3, 2) && division == ExactRatio(1, 2)) return bound_constants::three_x_plus_one();
  return std::nullopt;
}

ExactRatio TwoRatioFamily::lambda(std::uint64_t k1, std::uint64_t k2) const {
  return pow(growth, k1) * pow(division, k2);
}

const char* to_string(Side side) { return side == Side::PP ? "PP" : "PG"; }

Real Node::lambda_value(unsigned precision_bits) const {
  if (lambda) return Real::from(*lambda, precision_bits);
  const mpfr_prec_t w = std::max<mpfr_prec_t>(precision_bits + 16, ln_lambda.value.precision());
  return exp(ln_lambda.value.rounded(w)).rounded(precision_bits);
}

namespace {

Node make_node(const TwoRatioFamily& family, const BigInt& k1, const BigInt& k2, const NodeOptions& options) {
  Node n;
  n.k1 = k1;
  n.k2 = k2;
  const std::vector<LogTerm> terms{{k1, family.growth}, {k2, family.division}};
  if (n.k() <= BigInt(std::to_string(options.exact_k_limit))) {
    ExactRatio value = pow(family.growth, k1.get_ui()) * pow(family.division, k2.get_ui());
    if (value == 1) throw std::domain_error("node product equals 1 exactly");
    n.side = value < 1 ? Side::PP : Side::PG;
    n.lambda = std::move(value);
  }
  n.ln_lambda = log_combination(terms, options.precision_bits);
  const Side from_log = n.ln_lambda.certain_sign() < 0 ? Side::PP : Side::PG;
  if (n.lambda && from_log != n.side) throw std::logic_error("certified logarithm disagrees with exact lambda");
  n.side = from_log;
  return n;
}

}  // namespace

std::vector<Node> generate_nodes(const TwoRatioFamily& family, const NodeStop& stop, const NodeOptions& options) {
  if (!stop.max_main && !stop.max_k && !stop.max_products) {
    throw std::invalid_argument("generate_nodes needs a stop condition");
  }
  if (options.precision_bits < 64) throw std::invalid_argument("precision_bits must be at least 64");
  if (!(family.division < 1 && family.growth > 1 && sgn(family.division) > 0)) {
    throw std::invalid_argument("family ratios must satisfy 0 < division < 1 < growth");
  }

  std::vector<Node> out;
  Node pp = make_node(family, BigInt(0), BigInt(1), options);
  Node pg = make_node(family, BigInt(1), BigInt(0), options);
  pp.seed = pg.seed = true;
  out.push_back(pp);
  out.push_back(pg);

  std::uint64_t main = 1;
  std::uint64_t secondary = 0;
  std::optional<Side> last;
  std::uint64_t products = 0;
  for (;;) {
    if (stop.max_products && products >= *stop.max_products) break;
    const BigInt k1 = pp.k1 + pg.k1;
    const BigInt k2 = pp.k2 + pg.k2;
    if (stop.max_k && k1 + k2 > *stop.max_k) break;
    Node n = make_node(family, k1, k2, options);
    const bool flip = !last || *last != n.side;
    const std::uint64_t next_main = flip ? main + 1 : main;
    if (stop.max_main && next_main > *stop.max_main) break;
    main = next_main;
    secondary = flip ? 1 : secondary + 1;
    last = n.side;
    n.main_index = main;
    n.secondary_index = secondary;
    if (options.constant) n.ln_C = bound_C(n.ln_lambda, n.k1, *options.constant, options.precision_bits).ln_C;
    (n.side == Side::PP ? pp : pg) = n;
    out.push_back(std::move(n));
    ++products;
  }
  return out;
}

bool ReciprocityReport::ok() const {
  return !pairs.empty() && unpaired == 0 && std::all_of(pairs.begin(), pairs.end(),
                                       [](const ReciprocalPair& p) { return p.reciprocal && p.sides_swapped; }) &&
         std::all_of(runs.begin(), runs.end(), [](const RunPair& r) { return r.match; });
}

namespace {

struct Unit {
  std::string label;
  std::size_t count = 0;
};

// Seeds are separate one-node units; products are grouped by main index.
std::vector<Unit> run_units(const std::vector<const Node*>& nodes) {
  std::vector<Unit> units;
  std::optional<std::uint64_t> current;
  for (const Node* n : nodes) {
    if (n->seed) {
      units.push_back({std::string("seed ") + to_string(n->side), 1});
      current.reset();
      continue;
    }
    if (!current || *current != n->main_index) {
      units.push_back({"main " + std::to_string(n->main_index), 0});
      current = n->main_index;
    }
    ++units.back().count;
  }
  return units;
}

bool reciprocal_by_logs(const Node& a, const Node& b) {
  const mpfr_prec_t w = std::max(a.ln_lambda.value.precision(), b.ln_lambda.value.precision());
  const Real sum = abs(a.ln_lambda.value.rounded(w) + b.ln_lambda.value.rounded(w));
  const long e = std::max(a.ln_lambda.error_exponent, b.ln_lambda.error_exponent) + 2;
  return sum.is_zero() || sum <= power_of_two(e, 64);
}

}  // namespace

ReciprocityReport reciprocity_check(const std::vector<Node>& g_nodes, const std::vector<Node>& t_nodes) {
  std::vector<const Node*> g;
  std::vector<const Node*> t;
  for (const auto& n : g_nodes) g.push_back(&n);
  bool dropped = false;
  for (const auto& n : t_nodes) {
    if (!dropped && n.seed && n.side == Side::PP) {
      dropped = true;
      continue;
    }
    t.push_back(&n);
  }

  ReciprocityReport report;
  const std::size_t n = std::min(g.size(), t.size());
  report.unpaired = std::max(g.size(), t.size()) - n;
  for (std::size_t i = 0; i < n; ++i) {
    ReciprocalPair p;
    p.position = i;
    p.g = g[i];
    p.t = t[i];
    p.sides_swapped = g[i]->side != t[i]->side;
    if (g[i]->lambda && t[i]->lambda) {
      p.exact = true;
      p.reciprocal = *g[i]->lambda * *t[i]->lambda == 1;
    } else {
      p.reciprocal = reciprocal_by_logs(*g[i], *t[i]);
    }
    report.pairs.push_back(p);
  }

  const std::vector<const Node*> g_used(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
  const std::vector<const Node*> t_used(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n));
  const auto gu = run_units(g_used);
  const auto tu = run_units(t_used);
  for (std::size_t i = 0; i < std::max(gu.size(), tu.size()); ++i) {
    RunPair r;
    if (i < gu.size()) {
      r.g_label = gu[i].label;
      r.g_count = gu[i].count;
    }
    if (i < tu.size()) {
      r.t_label = tu[i].label;
      r.t_count = tu[i].count;
    }
    r.match = i < gu.size() && i < tu.size() && r.g_count == r.t_count;
    report.runs.push_back(std::move(r));
  }
  return report;
}

}  // namespace cyclekit
