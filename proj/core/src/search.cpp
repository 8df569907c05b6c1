#include "cyclekit/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "engine.hpp"

namespace cyclekit {

namespace {

struct I128Hash {
  std::size_t operator()(i128 x) const noexcept {
    const auto u = static_cast<u128>(x);
    const auto lo = static_cast<std::uint64_t>(u);
    const auto hi = static_cast<std::uint64_t>(u >> 64);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

template <class Int>
struct MemoMap;
template <>
struct MemoMap<i128> {
  using type = std::unordered_map<i128, detail::KnownCycle, I128Hash>;
};
template <>
struct MemoMap<BigInt> {
  using type = std::map<BigInt, detail::KnownCycle>;
};

inline i128 to_int(const BigInt& x, i128*) { return to_i128(x); }
inline BigInt to_int(const BigInt& x, BigInt*) { return x; }

struct Partial {
  std::map<BigInt, std::pair<Cycle, std::uint64_t>> cycles;  // by min element
  std::uint64_t entered = 0;
  std::uint64_t step_cutoff = 0;
  std::uint64_t magnitude_cutoff = 0;
};

template <class Int>
class Worker {
 public:
  Worker(const MappingDef& mapping, const DetectLimits& limits, bool use_memo)
      : mapping_(mapping), stepper_(mapping), max_steps_(limits.max_steps), use_memo_(use_memo) {
    max_mag_ = to_int(limits.max_magnitude, static_cast<Int*>(nullptr));
  }

  void run(std::int64_t start) {
    const Int x = Int(static_cast<long>(start));
    const auto raw = use_memo_ ? detail::detect_raw(stepper_, x, max_steps_, max_mag_, memo_fn())
                               : detail::detect_raw(stepper_, x, max_steps_, max_mag_, detail::NoMemo{});
    switch (raw.status) {
      case DetectStatus::StepCutoff:
        ++out_.step_cutoff;
        return;
      case DetectStatus::MagnitudeCutoff:
        ++out_.magnitude_cutoff;
        return;
      case DetectStatus::EnteredCycle:
        break;
    }
    ++out_.entered;
    if (raw.known_id) {
      ++out_.cycles.at(ids_[*raw.known_id]).second;
      return;
    }
    const auto elements = detail::walk_cycle(stepper_, raw.entry, raw.period);
    Cycle c = canonicalize(mapping_, elements);
    const BigInt key = c.min_element();
    auto [it, inserted] = out_.cycles.try_emplace(key, std::move(c), 0);
    ++it->second.second;
    if (inserted && use_memo_) {
      const std::size_t id = ids_.size();
      ids_.push_back(key);
      for (const auto& v : it->second.first.elements) {
        memo_.emplace(to_int(v, static_cast<Int*>(nullptr)), detail::KnownCycle{id, raw.period});
      }
    }
  }

  Partial& result() { return out_; }

 private:
  auto memo_fn() const {
    return [this](const Int& v) -> std::optional<detail::KnownCycle> {
      const auto it = memo_.find(v);
      if (it == memo_.end()) return std::nullopt;
      return it->second;
    };
  }

  const MappingDef& mapping_;
  detail::Stepper<Int> stepper_;
  std::uint64_t max_steps_;
  Int max_mag_;
  bool use_memo_;
  typename MemoMap<Int>::type memo_;
  std::vector<BigInt> ids_;
  Partial out_;
};

template <class Int>
Partial run_range(const MappingDef& mapping, std::int64_t lo, std::int64_t hi, const SearchOptions& options) {
  const auto block = static_cast<u128>(std::max<std::int64_t>(options.block_size, 1));
  const u128 span = static_cast<u128>(static_cast<i128>(hi) - lo) + 1;
  const u128 blocks = (span + block - 1) / block;

  Partial total;
  std::mutex merge_mutex;
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    Worker<Int> w(mapping, options.limits, options.use_memo);
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const i128 first = static_cast<i128>(lo) + static_cast<i128>(b * block);
      const i128 last = std::min<i128>(first + static_cast<i128>(block) - 1, hi);
      for (i128 s = first; s <= last; ++s) w.run(static_cast<std::int64_t>(s));
    }
    Partial& part = w.result();
    std::lock_guard lock(merge_mutex);
    total.entered += part.entered;
    total.step_cutoff += part.step_cutoff;
    total.magnitude_cutoff += part.magnitude_cutoff;
    for (auto& [key, entry] : part.cycles) {
      auto [it, inserted] = total.cycles.try_emplace(key, std::move(entry));
      if (!inserted) it->second.second += entry.second;
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<u128>(threads, blocks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return total;
}

}  // namespace

SearchReport search_range(const MappingDef& mapping, std::int64_t lo, std::int64_t hi, const SearchOptions& options) {
  if (lo > hi) throw std::invalid_argument("empty range: lo > hi");
  if (options.limits.max_steps == 0 || sgn(options.limits.max_magnitude) <= 0) {
    throw std::invalid_argument("search cutoffs must be positive");
  }
  const BigInt widest = std::max(abs(BigInt(static_cast<long>(lo))), abs(BigInt(static_cast<long>(hi))));
  const bool fast = detail::fast_path_ok(mapping, std::max(options.limits.max_magnitude, widest));
  Partial p = fast ? run_range<i128>(mapping, lo, hi, options) : run_range<BigInt>(mapping, lo, hi, options);

  SearchReport report{mapping, lo, hi, options.limits, CycleCatalog{mapping, {}, {}}, {}, p.entered, p.step_cutoff,
                      p.magnitude_cutoff, {}};
  std::vector<std::pair<Cycle, std::uint64_t>> found;
  for (auto& [key, entry] : p.cycles) found.push_back(std::move(entry));
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
  for (auto& [cycle, hits] : found) {
    report.catalog.cycles.push_back(std::move(cycle));
    report.hits.push_back(hits);
  }
  report.catalog.notes.push_back("search over [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                 "], max_steps " + std::to_string(options.limits.max_steps) + ", max_magnitude " +
                                 to_string(options.limits.max_magnitude));
  return report;
}

NodeSearchReport search_node(const MappingDef& mapping, const BigInt& k1, const BigInt& k2,
                             const ExactRatio& constant, const NodeSearchOptions& options) {
  const TwoRatioFamily family = TwoRatioFamily::from_mapping(mapping);
  const std::vector<LogTerm> terms{{k1, family.growth}, {k2, family.division}};
  NodeSearchReport out{SearchReport{mapping, 1, 0, options.search.limits, CycleCatalog{mapping, {}, {}}, {}, 0, 0, 0, {}},
                       k1,
                       k2,
                       Side::PP,
                       BoundResult{Real(), Real(), ExactRatio(), false},
                       BigInt(0),
                       false,
                       false};
  const CertifiedLog ln = log_combination(terms);
  out.side = ln.certain_sign() < 0 ? Side::PP : Side::PG;
  out.bound = bound_C(ln, k1, constant);
  mpfr_get_z(out.bound_floor.get_mpz_t(), out.bound.C.get(), MPFR_RNDD);

  SignPolicy signs = options.signs;
  if (signs == SignPolicy::Auto) {
    if (family.growth == ExactRatio(4, 3) && family.division == ExactRatio(2, 3)) {
      signs = SignPolicy::Positive;
    } else if (family.growth == ExactRatio(3, 2) && family.division == ExactRatio(1, 2)) {
      signs = out.side == Side::PP ? SignPolicy::Positive : SignPolicy::Negative;
    } else {
      signs = SignPolicy::Both;
    }
  }

  std::int64_t reach = 0;
  if (out.bound_floor > options.max_range) {
    reach = options.max_range;
    out.truncated = true;
  } else {
    reach = out.bound_floor.get_si();
  }
  const std::string label = "node (" + to_string(k1) + ", " + to_string(k2) + "): C = " + out.bound.C.scientific(8);
  if (reach < 1) {
    out.empty = true;
    out.report.notes.push_back(label + " < 1, nothing to search");
    return out;
  }

  const std::int64_t lo = signs == SignPolicy::Positive ? 1 : -reach;
  const std::int64_t hi = signs == SignPolicy::Negative ? -1 : reach;
  SearchReport full = search_range(mapping, lo, hi, options.search);
  out.report = SearchReport{mapping, lo, hi, full.limits, CycleCatalog{mapping, {}, full.catalog.notes}, {},
                            full.entered, full.step_cutoff, full.magnitude_cutoff, {label}};
  if (out.truncated) out.report.notes.push_back("range truncated to |m| <= " + std::to_string(options.max_range));
  for (std::size_t i = 0; i < full.catalog.cycles.size(); ++i) {
    const auto split = split_counts(mapping, full.catalog.cycles[i].counts);
    if (BigInt(std::to_string(split.growth)) == k1 && BigInt(std::to_string(split.division)) == k2) {
      out.report.catalog.cycles.push_back(full.catalog.cycles[i]);
      out.report.hits.push_back(full.hits[i]);
    }
  }
  return out;
}

LambdaProfile lambda_profile(const MappingDef& mapping, std::span<const BigInt> starts, std::uint64_t horizon,
                             const TrajectoryLimits& limits) {
  if (horizon == 0) throw std::invalid_argument("horizon must be at least 1");
  LambdaProfile out;
  for (const auto& start : starts) {
    ProfileEntry e;
    e.start = start;
    e.counts.counts.assign(mapping.branch_count(), 0);
    BigInt x = start;
    for (std::uint64_t s = 1; s <= horizon; ++s) {
      if (limits.max_magnitude && abs(x) > *limits.max_magnitude) {
        e.magnitude_cutoff = true;
        break;
      }
      auto step = apply(mapping, x);
      ++e.counts.counts[step.branch];
      x = std::move(step.next);
      if (x == start) {
        e.return_step = s;
        break;
      }
    }
    e.lambda = lambda_exact(mapping, e.counts);
    if (e.return_step) ++out.returned;
    ++out.histogram[e.counts];
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace cyclekit
