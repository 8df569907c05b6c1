#include <gtest/gtest.h>

#include "cyclekit/io.hpp"
#include "cyclekit/search.hpp"

using namespace cyclekit;

namespace {

std::vector<BigInt> big(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

std::vector<BigInt> mins(const SearchReport& r) {
  std::vector<BigInt> out;
  for (const auto& c : r.catalog.cycles) out.push_back(c.min_element());
  return out;
}

}  // namespace

TEST(SearchRange, PositiveStartsOfG) {
  const auto r = search_range(collatz(), 1, 200);
  EXPECT_EQ(mins(r), big({1, 2, 4, 44}));
  EXPECT_EQ(r.catalog.cycles[1].elements, big({2, 3}));
  EXPECT_EQ(r.starts(), 200u);
  std::uint64_t total = 0;
  for (auto h : r.hits) total += h;
  EXPECT_EQ(total, r.entered);
}

TEST(SearchRange, NegativeStartsOfGIncludingZero) {
  const auto r = search_range(collatz(), -200, 0);
  EXPECT_EQ(mins(r), big({-1, 0, -3, -9, -111}));
  EXPECT_EQ(r.catalog.cycles.back().period(), 12u);
}

TEST(SearchRange, ThreeXPlusOneAroundZero) {
  const auto r = search_range(three_x_plus_one(), -150, 150);
  EXPECT_EQ(r.catalog.cycles.size(), 5u);
  EXPECT_EQ(r.magnitude_cutoff + r.step_cutoff, 0u);
  EXPECT_EQ(r.entered, 301u);
  std::vector<std::size_t> periods;
  for (const auto& c : r.catalog.cycles) periods.push_back(c.period());
  EXPECT_EQ(periods, (std::vector<std::size_t>{1, 1, 2, 3, 11}));
}

TEST(SearchRange, RejectsBadArguments) {
  EXPECT_THROW(search_range(collatz(), 5, 4), std::invalid_argument);
  SearchOptions bad;
  bad.limits.max_steps = 0;
  EXPECT_THROW(search_range(collatz(), 1, 4, bad), std::invalid_argument);
}

TEST(SearchRange, IndependentOfThreadsAndMemo) {
  const MappingDef m = MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}}, "matthews");
  SearchOptions base;
  base.limits.max_steps = 100'000;
  base.threads = 1;
  base.use_memo = false;
  base.block_size = 97;
  const auto reference = search_range(m, -3000, 3000, base);
  for (unsigned threads : {1u, 3u, 8u}) {
    for (bool memo : {false, true}) {
      SearchOptions o = base;
      o.threads = threads;
      o.use_memo = memo;
      o.block_size = memo ? 256 : 31;
      const auto r = search_range(m, -3000, 3000, o);
      EXPECT_EQ(mins(r), mins(reference));
      EXPECT_EQ(r.hits, reference.hits);
      EXPECT_EQ(r.entered, reference.entered);
      EXPECT_EQ(r.step_cutoff, reference.step_cutoff);
      EXPECT_EQ(r.magnitude_cutoff, reference.magnitude_cutoff);
    }
  }
}

TEST(SearchRange, AllSeventeenMatthewsCycles) {
  const MappingDef m = MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}}, "matthews");
  SearchOptions o;
  o.limits.max_steps = 100'000;
  const auto r = search_range(m, -6000, 6000, o);
  ASSERT_EQ(r.catalog.cycles.size(), 17u);
  EXPECT_EQ(r.step_cutoff, 0u);
  EXPECT_TRUE(r.catalog.disjoint());
}

TEST(SearchRange, CollatzClosedCycleRegression) {
  SearchOptions o;
  o.limits.max_steps = 10'000;
  const auto r = search_range(collatz(), -10'000, 10'000, o);
  EXPECT_EQ(r.catalog.cycles.size(), 9u);
  EXPECT_EQ(r.starts(), 20'001u);
  // g permutes the integers, so only starts that lie on a cycle enter one.
  std::uint64_t cycle_members = 0;
  for (const auto& c : r.catalog.cycles) cycle_members += c.period();
  EXPECT_EQ(r.entered, cycle_members);
  for (auto h : r.hits) EXPECT_GT(h, 0u);
}

TEST(SearchNode, CollatzNodeWithFiveCycle) {
  const auto r = search_node(collatz(), BigInt(3), BigInt(2), bound_constants::collatz());
  EXPECT_EQ(r.side, Side::PG);
  EXPECT_EQ(r.bound_floor, 16);
  EXPECT_FALSE(r.empty);
  EXPECT_EQ(r.report.lo, 1);
  EXPECT_EQ(r.report.hi, 16);
  ASSERT_EQ(r.report.catalog.cycles.size(), 1u);
  EXPECT_EQ(r.report.catalog.cycles[0].elements, big({4, 5, 7, 9, 6}));
}

TEST(SearchNode, ThreeXPlusOneElevenCycleOnNegativeSide) {
  const auto r = search_node(three_x_plus_one(), BigInt(7), BigInt(4), bound_constants::three_x_plus_one());
  EXPECT_EQ(r.side, Side::PG);
  EXPECT_EQ(r.bound_floor, 44);
  EXPECT_EQ(r.report.lo, -44);
  EXPECT_EQ(r.report.hi, -1);
  ASSERT_EQ(r.report.catalog.cycles.size(), 1u);
  EXPECT_EQ(r.report.catalog.cycles[0].least_magnitude(), -17);
}

TEST(SearchNode, TwelveCycleBelowTheBound) {
  const auto r = search_node(collatz(), BigInt(7), BigInt(5), bound_constants::collatz());
  EXPECT_EQ(r.side, Side::PP);
  EXPECT_EQ(r.bound_floor, 150);
  ASSERT_EQ(r.report.catalog.cycles.size(), 1u);
  EXPECT_EQ(r.report.catalog.cycles[0].min_element(), 44);
}

TEST(SearchNode, NodeWithoutCycles) {
  const auto r = search_node(collatz(), BigInt(2), BigInt(1), bound_constants::collatz());
  EXPECT_FALSE(r.empty);
  EXPECT_TRUE(r.report.catalog.cycles.empty());
}

TEST(SearchNode, BoundBelowOneSearchesNothing) {
  // ln C(1,1) = ln(5/12) - ln ln(4/3) is negative.
  const auto r = search_node(three_x_plus_one(), BigInt(1), BigInt(1), ExactRatio(1, 20));
  EXPECT_TRUE(r.empty);
  EXPECT_EQ(r.report.starts(), 0u);
}

TEST(SearchNode, HugeBoundIsTruncated) {
  NodeSearchOptions o;
  o.max_range = 500;
  const auto r = search_node(collatz(), BigInt(31), BigInt(22), bound_constants::collatz(), o);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.report.hi, 500);
}

TEST(LambdaProfile, HorizonCountsAndReturns) {
  const std::vector<BigInt> starts{BigInt(225)};
  const auto p = lambda_profile(collatz(), starts, 53);
  ASSERT_EQ(p.entries.size(), 1u);
  EXPECT_FALSE(p.entries[0].return_step);
  const auto split = split_counts(collatz(), p.entries[0].counts);
  EXPECT_EQ(split.growth, 31u);
  EXPECT_EQ(split.division, 22u);

  const std::vector<BigInt> neg{BigInt(-42)};
  EXPECT_EQ(lambda_profile(three_x_plus_one(), neg, 11).entries[0].lambda, ExactRatio(2187, 2048));

  const std::vector<BigInt> on_cycle{BigInt(44), BigInt(4), BigInt(8)};
  const auto q = lambda_profile(collatz(), on_cycle, 20);
  EXPECT_EQ(q.returned, 2u);
  EXPECT_EQ(*q.entries[0].return_step, 12u);
  EXPECT_EQ(q.entries[1].lambda, ExactRatio(256, 243));

  const auto one = lambda_profile(collatz(), on_cycle, 1);
  for (const auto& e : one.entries) EXPECT_EQ(e.counts.total(), 1u);
  EXPECT_THROW(lambda_profile(collatz(), on_cycle, 0), std::invalid_argument);
}
