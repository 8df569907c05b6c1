#include "cyclekit/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace cyclekit {

std::optional<std::size_t> CycleCatalog::find_containing(const BigInt& value) const {
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (cycles[i].contains(value)) return i;
  }
  return std::nullopt;
}

bool CycleCatalog::disjoint() const {
  std::set<BigInt> seen;
  for (const auto& c : cycles) {
    for (const auto& v : c.elements) {
      if (!seen.insert(v).second) return false;
    }
  }
  return true;
}

void normalize(CycleCatalog& catalog) {
  std::sort(catalog.cycles.begin(), catalog.cycles.end(), canonical_less);
  catalog.cycles.erase(std::unique(catalog.cycles.begin(), catalog.cycles.end()), catalog.cycles.end());
}

namespace {

// Composition after `depth` steps: value = (M x + N) / d^depth.
template <class Int>
struct Frame {
  Int slope_num;
  Int offset_num;
  Int denom;
};

struct Found {
  std::map<BigInt, Cycle> cycles;  // keyed by min element
  std::uint64_t sequences = 0;
  std::uint64_t unit_slope = 0;
  std::uint64_t unit_identity = 0;
};

inline BigInt as_big(const i128& x) { return from_i128(x); }
inline BigInt as_big(const BigInt& x) { return x; }
inline bool is_zero(const i128& x) { return x == 0; }
inline bool is_zero(const BigInt& x) { return sgn(x) == 0; }

template <class Int>
class Enumerator {
 public:
  Enumerator(const MappingDef& mapping, std::size_t max_period) : mapping_(mapping), max_period_(max_period) {
    for (const auto& b : mapping.branches()) {
      m_.push_back(Int(static_cast<long>(b.multiplier)));
      r_.push_back(Int(static_cast<long>(b.offset)));
    }
    d_ = Int(static_cast<long>(mapping.modulus()));
  }

  /// Explores every sequence that starts with `prefix`; proper prefixes
  /// shorter than `examine_from` are left to another work item.
  void run(const std::vector<std::size_t>& prefix, std::size_t examine_from, Found& found) {
    sequence_ = prefix;
    Frame<Int> f{Int(1), Int(0), Int(1)};
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      f = extend(f, prefix[i]);
      if (i + 1 >= examine_from) examine(f, i + 1, found);
    }
    descend(f, found);
  }

 private:
  Frame<Int> extend(const Frame<Int>& f, std::size_t b) const {
    return {m_[b] * f.slope_num, m_[b] * f.offset_num - r_[b] * f.denom, d_ * f.denom};
  }

  void descend(const Frame<Int>& f, Found& found) {
    if (sequence_.size() >= max_period_) return;
    for (std::size_t b = 0; b < m_.size(); ++b) {
      sequence_.push_back(b);
      const Frame<Int> next = extend(f, b);
      examine(next, sequence_.size(), found);
      descend(next, found);
      sequence_.pop_back();
    }
  }

  void examine(const Frame<Int>& f, std::size_t length, Found& found) {
    ++found.sequences;
    const Int gap = f.denom - f.slope_num;
    if (is_zero(gap)) {
      ++found.unit_slope;
      if (is_zero(f.offset_num)) ++found.unit_identity;
      return;
    }
    if (!is_zero(Int(f.offset_num % gap))) return;
    BigInt x = as_big(f.offset_num) / as_big(gap);
    // The fixed point only counts if the true orbit follows this sequence.
    BigInt v = x;
    for (std::size_t j = 0; j < length; ++j) {
      const auto step = apply(mapping_, v);
      if (step.branch != sequence_[j]) return;
      v = step.next;
    }
    if (found.cycles.count(x)) return;
    std::vector<BigInt> orbit{x};
    for (BigInt y = apply(mapping_, x).next; y != x; y = apply(mapping_, y).next) orbit.push_back(y);
    Cycle c = canonicalize(mapping_, orbit);
    const BigInt key = c.min_element();
    found.cycles.emplace(key, std::move(c));
  }

  const MappingDef& mapping_;
  std::size_t max_period_;
  std::vector<Int> m_;
  std::vector<Int> r_;
  Int d_;
  std::vector<std::size_t> sequence_;
};

bool fits_in_128(const MappingDef& mapping, std::size_t max_period) {
  const long base = std::max<long>(mapping.modulus(), mapping.max_abs_multiplier());
  const BigInt bound = BigInt(static_cast<long>(max_period + 2)) * (mapping.max_abs_offset() + 1) *
                       pow(BigInt(base), max_period + 1);
  return bit_length(bound) <= 120;
}

template <class Int>
Found run_all(const MappingDef& mapping, std::size_t max_period, unsigned threads) {
  const std::size_t d = mapping.branch_count();
  // Work items: all prefixes of length 1 or 2.
  const std::size_t prefix_len = max_period >= 2 ? 2 : 1;
  std::vector<std::vector<std::size_t>> prefixes;
  if (prefix_len == 1) {
    for (std::size_t a = 0; a < d; ++a) prefixes.push_back({a});
  } else {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) prefixes.push_back({a, b});
  }

  Found total;
  std::mutex merge_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Found local;
    Enumerator<Int> e(mapping, max_period);
    for (std::size_t i = next++; i < prefixes.size(); i = next++) {
      // A length-1 prefix {a} is shared by every {a, b}; only {a, 0} examines it.
      const std::size_t examine_from = (prefix_len == 2 && prefixes[i][1] != 0) ? 2 : 1;
      e.run(prefixes[i], examine_from, local);
    }
    std::lock_guard lock(merge_mutex);
    total.sequences += local.sequences;
    total.unit_slope += local.unit_slope;
    total.unit_identity += local.unit_identity;
    total.cycles.merge(local.cycles);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, prefixes.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return total;
}

}  // namespace

OracleResult enumerate_cycles_exact(const MappingDef& mapping, std::size_t max_period, const OracleOptions& options) {
  OracleResult out{CycleCatalog{mapping, {}, {}}};
  if (max_period == 0) return out;
  const BigInt sequences = pow(BigInt(static_cast<long>(mapping.modulus())), max_period);
  if (sequences > BigInt(std::to_string(options.budget))) {
    throw BudgetExceeded("d^max_period = " + to_string(sequences) + " exceeds the budget of " +
                         std::to_string(options.budget) + " sequences");
  }
  Found found = fits_in_128(mapping, max_period) ? run_all<i128>(mapping, max_period, options.threads)
                                                 : run_all<BigInt>(mapping, max_period, options.threads);
  out.sequences_examined = found.sequences;
  out.unit_slope_skipped = found.unit_slope;
  out.unit_slope_identity = found.unit_identity;
  for (auto& [key, cycle] : found.cycles) out.catalog.cycles.push_back(std::move(cycle));
  normalize(out.catalog);
  out.catalog.notes.push_back("exact enumeration of all branch sequences up to period " + std::to_string(max_period));
  if (found.unit_slope != 0) {
    out.catalog.notes.push_back(std::to_string(found.unit_slope) + " unit-slope sequences skipped (" +
                                std::to_string(found.unit_identity) + " with zero offset)");
  }
  return out;
}

CatalogFile to_catalog_file(const CycleCatalog& catalog) {
  CatalogFile out{catalog.mapping, {}, catalog.notes};
  for (const auto& c : catalog.cycles) {
    CatalogEntry e;
    e.elements = c.elements;
    e.period = c.period();
    e.min = c.min_element();
    e.counts = c.counts;
    out.entries.push_back(std::move(e));
  }
  return out;
}

bool VerifyReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const EntryCheck& e) { return e.passed; });
}

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const EntryCheck& e) { return !e.passed; }));
}

namespace {

std::vector<BigInt> rebuild(const MappingDef& mapping, const BigInt& seed, std::size_t period, std::string& error) {
  std::vector<BigInt> orbit{seed};
  BigInt v = apply(mapping, seed).next;
  for (std::size_t i = 1; i < period; ++i) {
    if (v == seed) {
      error = "orbit of " + to_string(seed) + " closes after " + std::to_string(i) + " steps, not " +
              std::to_string(period);
      return {};
    }
    orbit.push_back(v);
    v = apply(mapping, v).next;
  }
  if (v != seed) {
    error = "orbit of " + to_string(seed) + " does not return after " + std::to_string(period) + " steps";
    return {};
  }
  return orbit;
}

}  // namespace

VerifyReport verify_catalog(const MappingDef& mapping, const std::vector<CatalogEntry>& entries) {
  VerifyReport report;
  std::set<BigInt> claimed;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const CatalogEntry& entry = entries[i];
    EntryCheck check;
    check.index = i;
    std::vector<BigInt> raw;
    std::string error;
    if (entry.elements) {
      raw = *entry.elements;
      if (entry.period != 0 && entry.period != raw.size()) {
        error = "stated period " + std::to_string(entry.period) + " but " + std::to_string(raw.size()) +
                " elements listed";
      }
    } else if (entry.seed || entry.least_magnitude || entry.min) {
      const BigInt& member = entry.seed ? *entry.seed : entry.least_magnitude ? *entry.least_magnitude : *entry.min;
      if (entry.period == 0) {
        error = "entry without elements needs a period";
      } else {
        raw = rebuild(mapping, member, entry.period, error);
      }
    } else {
      error = "entry has neither elements nor a seed";
    }

    if (error.empty()) {
      try {
        const Cycle c = canonicalize(mapping, raw);
        check.period = c.period();
        check.min = c.min_element();
        check.least_magnitude = c.least_magnitude();
        check.counts = c.counts;
        if (entry.min && *entry.min != c.min_element()) {
          error = "stated min " + to_string(*entry.min) + " but the cycle minimum is " + to_string(c.min_element());
        } else if (entry.least_magnitude && *entry.least_magnitude != c.least_magnitude()) {
          error = "stated least-magnitude element " + to_string(*entry.least_magnitude) + " but the cycle has " +
                  to_string(c.least_magnitude());
        } else if (entry.counts && *entry.counts != c.counts) {
          error = "stated branch counts differ from the recomputed ones";
        } else {
          for (const auto& v : c.elements) {
            if (!claimed.insert(v).second) {
              error = "element " + to_string(v) + " already belongs to an earlier cycle";
              break;
            }
          }
        }
      } catch (const CycleError& e) {
        error = e.what();
      }
    }
    check.passed = error.empty();
    check.message = check.passed ? "ok" : error;
    report.entries.push_back(std::move(check));
  }
  return report;
}

VerifyReport verify_catalog(const CatalogFile& file) { return verify_catalog(file.mapping, file.entries); }

VerifyReport verify_catalog(const CycleCatalog& catalog) {
  return verify_catalog(catalog.mapping, to_catalog_file(catalog).entries);
}

}  // namespace cyclekit
