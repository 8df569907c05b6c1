#include "cyclekit/cycle.hpp"

#include <algorithm>
#include <set>

#include "engine.hpp"

namespace cyclekit {

const BigInt& Cycle::least_magnitude() const {
  return *std::min_element(elements.begin(), elements.end(), [](const BigInt& a, const BigInt& b) {
    const int c = mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
    return c < 0 || (c == 0 && a < b);
  });
}

bool Cycle::contains(const BigInt& value) const {
  return std::find(elements.begin(), elements.end(), value) != elements.end();
}

bool canonical_less(const Cycle& a, const Cycle& b) {
  if (a.period() != b.period()) return a.period() < b.period();
  return a.min_element() < b.min_element();
}

Cycle canonicalize(const MappingDef& mapping, std::span<const BigInt> raw_elements) {
  if (raw_elements.empty()) throw CycleError("empty cycle");
  std::set<BigInt> seen(raw_elements.begin(), raw_elements.end());
  if (seen.size() != raw_elements.size()) throw CycleError("cycle elements are not pairwise distinct");

  Cycle out;
  out.counts.counts.assign(mapping.branch_count(), 0);
  const std::size_t p = raw_elements.size();
  for (std::size_t j = 0; j < p; ++j) {
    const auto step = apply(mapping, raw_elements[j]);
    if (step.next != raw_elements[(j + 1) % p]) {
      throw CycleError("sequence is not closed under the mapping at position " + std::to_string(j) + ": T(" +
                       to_string(raw_elements[j]) + ") = " + to_string(step.next));
    }
    ++out.counts.counts[step.branch];
  }
  const auto min_it = std::min_element(raw_elements.begin(), raw_elements.end());
  out.elements.assign(min_it, raw_elements.end());
  out.elements.insert(out.elements.end(), raw_elements.begin(), min_it);
  return out;
}

const char* to_string(DetectStatus status) {
  switch (status) {
    case DetectStatus::EnteredCycle:
      return "entered-cycle";
    case DetectStatus::StepCutoff:
      return "cutoff-steps";
    case DetectStatus::MagnitudeCutoff:
      return "cutoff-magnitude";
  }
  return "unknown";
}

namespace {

template <class Int>
DetectResult finish(const MappingDef& mapping, const detail::Stepper<Int>& st, const detail::RawDetect<Int>& raw) {
  DetectResult out;
  out.status = raw.status;
  out.tail_length = raw.tail;
  if (raw.status == DetectStatus::EnteredCycle) {
    const auto elements = detail::walk_cycle(st, raw.entry, raw.period);
    out.cycle = canonicalize(mapping, elements);
  }
  return out;
}

}  // namespace

DetectResult detect_cycle(const MappingDef& mapping, const BigInt& start, const DetectLimits& limits) {
  if (limits.max_steps == 0 || sgn(limits.max_magnitude) <= 0) {
    throw std::invalid_argument("detect_cycle: cutoffs must be positive");
  }
  if (detail::fast_path_ok(mapping, limits.max_magnitude) && fits_i128(start)) {
    const detail::Stepper<i128> st(mapping);
    const auto raw = detail::detect_raw(st, to_i128(start), limits.max_steps, to_i128(limits.max_magnitude),
                                        detail::NoMemo{});
    return finish(mapping, st, raw);
  }
  const detail::Stepper<BigInt> st(mapping);
  const auto raw = detail::detect_raw(st, start, limits.max_steps, limits.max_magnitude, detail::NoMemo{});
  return finish(mapping, st, raw);
}

}  // namespace cyclekit
