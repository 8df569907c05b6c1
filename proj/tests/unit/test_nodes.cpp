#include <gtest/gtest.h>

#include <cmath>

#include "cyclekit/nodes.hpp"
#include "cyclekit/reference_tables.hpp"

using namespace cyclekit;

namespace {

BranchCounts counts(std::initializer_list<std::uint64_t> c) { return BranchCounts{std::vector<std::uint64_t>(c)}; }

// g counts (k1, k2) with every growth step on branch 1.
BranchCounts g_counts(std::uint64_t k1, std::uint64_t k2) { return counts({k2, k1, 0}); }

MappingDef matthews() { return MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}}, "matthews"); }

std::vector<Node> g_nodes(std::uint64_t depth) {
  NodeStop stop;
  stop.max_main = depth;
  NodeOptions opts;
  opts.constant = bound_constants::collatz();
  return generate_nodes(TwoRatioFamily::collatz(), stop, opts);
}

std::vector<Node> t_nodes(std::uint64_t depth) {
  NodeStop stop;
  stop.max_main = depth;
  NodeOptions opts;
  opts.constant = bound_constants::three_x_plus_one();
  return generate_nodes(TwoRatioFamily::three_x_plus_one(), stop, opts);
}

const Node* find(const std::vector<Node>& nodes, long k1, long k2) {
  for (const auto& n : nodes) {
    if (n.k1 == k1 && n.k2 == k2) return &n;
  }
  return nullptr;
}

std::vector<std::size_t> run_lengths(const std::vector<Node>& nodes) {
  std::vector<std::size_t> out;
  for (const auto& n : nodes) {
    if (n.seed) continue;
    if (out.size() < n.main_index - 1) out.push_back(0);
    ++out.back();
  }
  return out;
}

}  // namespace

TEST(LambdaExact, Values) {
  EXPECT_EQ(lambda_exact(collatz(), g_counts(1, 1)), ExactRatio(8, 9));
  EXPECT_EQ(Real::from(lambda_exact(collatz(), g_counts(31, 22)), 128).fixed(15), "0.997914046257311");
  EXPECT_EQ(lambda_exact(matthews(), counts({1, 1, 1, 1})), ExactRatio(255, 256));
  EXPECT_EQ(lambda_exact(collatz(), g_counts(0, 0)), 1);
  EXPECT_THROW(lambda_exact(collatz(), counts({1, 1})), std::invalid_argument);
}

TEST(LambdaExact, NumeratorAndDenominatorArePrimePowers) {
  for (std::uint64_t k1 = 0; k1 <= 40; ++k1) {
    for (std::uint64_t k2 = 0; k2 <= 40; ++k2) {
      if (k1 + k2 == 0) continue;
      const ExactRatio l = lambda_exact(collatz(), g_counts(k1, k2));
      EXPECT_EQ(l.get_num(), pow(BigInt(2), 2 * k1 + k2));
      EXPECT_EQ(l.get_den(), pow(BigInt(3), k1 + k2));
      EXPECT_NE(l, 1);
    }
  }
}

TEST(LnLambda, Values) {
  const auto a = ln_lambda(collatz(), g_counts(1, 1));
  EXPECT_NEAR(a.value.to_double(), std::log(8.0 / 9.0), 1e-15);
  EXPECT_NEAR(a.value.to_double(), -0.1177830, 1e-7);
  EXPECT_LE(a.error_exponent, -(256 - 8));

  const auto zero = ln_lambda(collatz(), g_counts(0, 0));
  EXPECT_EQ(zero.certain_sign(), 0);
  EXPECT_TRUE(zero.value.is_zero());

  const auto deep = ln_lambda(collatz(), g_counts(9126, 6475));
  EXPECT_GT(deep.value.sign(), 0);
  EXPECT_LT(std::fabs(deep.value.to_double()), 2e-5);
}

TEST(LnLambda, ExactOneGivesExactZero) {
  // ratios 2 and 1/2 cancel
  const auto m = MappingDef::validate(4, {{8, 0}, {2, 2}, {4, 0}, {4, 0}});
  const auto z = ln_lambda(m, counts({1, 1, 0, 0}));
  EXPECT_EQ(z.certain_sign(), 0);
  EXPECT_THROW(bound_C(m, counts({1, 1, 0, 0}), ExactRatio(1, 2)), std::domain_error);
}

TEST(LnLambda, NegativeLambdaIsAnError) {
  const auto m = MappingDef::validate(2, {{1, 0}, {-3, 1}});
  EXPECT_THROW(ln_lambda(m, counts({0, 1})), std::domain_error);
  EXPECT_NO_THROW(ln_lambda(m, counts({0, 2})));
  const auto b = bound_C(m, counts({1, 1}), ExactRatio(1, 2));
  EXPECT_TRUE(b.used_absolute_lambda);
}

TEST(LnLambda, AgreesWithExactValueWithinTheStatedError) {
  for (const auto& row : collatz_reference_nodes()) {
    const auto c = g_counts(row.k1, row.k2);
    const auto ln = ln_lambda(collatz(), c, 256);
    const Real reference = log(lambda_exact(collatz(), c), 1024);
    const Real diff = abs(ln.value - reference);
    EXPECT_TRUE(diff <= power_of_two(ln.error_exponent, 64)) << row.k1 << "," << row.k2;
    EXPECT_LE(ln.error_exponent, -248);
  }
}

TEST(LogCombination, RaisesPrecisionUntilTheSignIsCertain) {
  // (4/3)^k1 (2/3)^k2 at a deep convergent: |ln| ~ 1e-6 needs more than 64 bits of headroom.
  const std::vector<LogTerm> terms{{BigInt("8890582588319357"), ExactRatio(4, 3)},
                                   {BigInt("6307937785604474"), ExactRatio(2, 3)}};
  const auto low = log_combination(terms, 64);
  const auto high = log_combination(terms, 1024);
  EXPECT_EQ(low.certain_sign(), high.certain_sign());
  const Real diff = abs(low.value - high.value);
  EXPECT_TRUE(diff <= power_of_two(low.error_exponent, 64));
}

TEST(BoundC, PublishedValues) {
  EXPECT_NEAR(bound_C(collatz(), g_counts(1, 1), bound_constants::collatz()).ln_C.to_double(), 0.9067673, 1e-5);
  EXPECT_NEAR(bound_C(three_x_plus_one(), counts({1, 1}), bound_constants::three_x_plus_one()).ln_C.to_double(),
              0.3704306, 1e-5);
  EXPECT_NEAR(bound_C(collatz(), g_counts(7, 5), bound_constants::collatz()).ln_C.to_double(), 5.0150589, 1e-5);
}

TEST(BoundC, FrozenHighPrecisionValues) {
  struct Row {
    std::uint64_t k1, k2;
    double ln_C;
  };
  for (const Row& r : {Row{1, 1, 0.9067673466}, Row{3, 2, 2.820751861}, Row{7, 5, 5.015058938},
                       Row{31, 22, 8.373328736}, Row{179, 127, 10.84100195}, Row{9126, 6475, 18.80112543}}) {
    EXPECT_NEAR(bound_C(collatz(), g_counts(r.k1, r.k2), bound_constants::collatz()).ln_C.to_double(), r.ln_C, 1e-8);
  }
  for (const Row& r : {Row{1, 1, 0.3704305864}, Row{7, 4, 3.793599649}, Row{53, 31, 9.266308389},
                       Row{15601, 9126, 19.69400791}}) {
    EXPECT_NEAR(bound_C(three_x_plus_one(), counts({r.k2, r.k1}), bound_constants::three_x_plus_one()).ln_C.to_double(),
                r.ln_C, 1e-8);
  }
}

TEST(BoundC, CIsExpOfLnCAndConstantsAreRecorded) {
  const auto b = bound_C(collatz(), g_counts(3, 2), bound_constants::atkin());
  EXPECT_EQ(b.constant, ExactRatio(63, 248));
  EXPECT_NEAR(std::log(b.C.to_double()), b.ln_C.to_double(), 1e-12);
  EXPECT_GT(b.C.sign(), 0);
  EXPECT_THROW(bound_C(collatz(), g_counts(0, 3), bound_constants::collatz()), std::domain_error);
}

TEST(BoundC, ManyRatioFamiliesCountEveryNonZeroResidue) {
  // k_growth = k2 + k3 + k4 = 3 for counts (1,1,1,1).
  const auto b = bound_C(matthews(), counts({1, 1, 1, 1}), ExactRatio(1, 1));
  const double expected = std::log(3.0 / std::fabs(std::log(255.0 / 256.0)));
  EXPECT_NEAR(b.ln_C.to_double(), expected, 1e-12);
}

TEST(TwoRatioFamily, FromMapping) {
  const auto f = TwoRatioFamily::from_mapping(permutation_variant(3));
  EXPECT_EQ(f.growth, ExactRatio(4, 3));
  EXPECT_EQ(f.division, ExactRatio(2, 3));
  EXPECT_EQ(f.default_constant(), std::optional<ExactRatio>(ExactRatio(7, 24)));
  EXPECT_EQ(TwoRatioFamily::from_mapping(three_x_plus_one()).default_constant(),
            std::optional<ExactRatio>(ExactRatio(5, 12)));
  EXPECT_THROW(TwoRatioFamily::from_mapping(matthews()), std::invalid_argument);
  EXPECT_FALSE(TwoRatioFamily::from_mapping(carnielli_T(3)).default_constant());
}

TEST(GenerateNodes, FirstProductsOfG) {
  const auto nodes = g_nodes(4);
  ASSERT_GE(nodes.size(), 6u);
  EXPECT_EQ(*nodes[2].lambda, ExactRatio(8, 9));
  EXPECT_EQ(*nodes[3].lambda, ExactRatio(32, 27));
  EXPECT_EQ(*nodes[4].lambda, ExactRatio(256, 243));
  EXPECT_EQ(nodes[5].k1, 4);
  EXPECT_EQ(nodes[5].k2, 3);
  EXPECT_EQ(nodes[5].side, Side::PP);
  EXPECT_EQ(nodes[5].lambda_value().fixed(14), "0.93644261545496");
}

TEST(GenerateNodes, FirstProductsOfThreeXPlusOne) {
  const auto nodes = t_nodes(4);
  EXPECT_EQ(*nodes[2].lambda, ExactRatio(3, 4));
  EXPECT_EQ(*nodes[3].lambda, ExactRatio(9, 8));
  EXPECT_EQ(*nodes[4].lambda, ExactRatio(27, 32));
  EXPECT_EQ(*nodes[5].lambda, ExactRatio(243, 256));
  EXPECT_EQ(nodes[5].k1, 5);
  EXPECT_EQ(nodes[5].k2, 3);
}

TEST(GenerateNodes, NumberingAndSides) {
  const auto nodes = g_nodes(9);
  EXPECT_TRUE(nodes[0].seed && nodes[1].seed);
  EXPECT_EQ(nodes[0].main_index, 1u);
  EXPECT_EQ(nodes[1].main_index, 1u);
  EXPECT_EQ(nodes[2].main_index, 2u);
  const Node* n = find(nodes, 179, 127);
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->side, Side::PG);
  EXPECT_EQ(n->main_index, 7u);
  EXPECT_EQ(n->secondary_index, 5u);
  EXPECT_EQ(n->lambda_value().fixed(14), "1.00102276179641");
  for (const auto& node : nodes) EXPECT_EQ(node.side == Side::PP, *node.lambda < 1);
  EXPECT_EQ(run_lengths(nodes), (std::vector<std::size_t>{1, 2, 2, 3, 1, 5, 2, 23}));
  EXPECT_EQ(run_lengths(t_nodes(10)), (std::vector<std::size_t>{1, 1, 2, 2, 3, 1, 5, 2, 23}));
}

TEST(GenerateNodes, StopConditions) {
  EXPECT_EQ(g_nodes(0).size(), 2u);
  EXPECT_EQ(g_nodes(1).size(), 2u);
  EXPECT_EQ(g_nodes(2).size(), 3u);
  NodeStop by_k;
  by_k.max_k = BigInt(53);
  const auto k_nodes = generate_nodes(TwoRatioFamily::collatz(), by_k);
  EXPECT_EQ(k_nodes.back().k(), 53);
  EXPECT_FALSE(k_nodes.back().ln_C);  // no constant requested
  NodeStop by_count;
  by_count.max_products = 7;
  EXPECT_EQ(generate_nodes(TwoRatioFamily::collatz(), by_count).size(), 9u);
  EXPECT_THROW(generate_nodes(TwoRatioFamily::collatz(), NodeStop{}), std::invalid_argument);
}

TEST(GenerateNodes, DeepNodesSwitchToCertifiedLogarithms) {
  NodeStop stop;
  stop.max_products = 60;
  NodeOptions opts;
  opts.exact_k_limit = 1000;
  opts.constant = bound_constants::collatz();
  const auto approx = generate_nodes(TwoRatioFamily::collatz(), stop, opts);
  opts.exact_k_limit = 1'000'000'000;
  const auto exact = generate_nodes(TwoRatioFamily::collatz(), stop, opts);
  ASSERT_EQ(approx.size(), exact.size());
  bool saw_inexact = false;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    EXPECT_EQ(approx[i].k1, exact[i].k1);
    EXPECT_EQ(approx[i].side, exact[i].side);
    EXPECT_EQ(approx[i].main_index, exact[i].main_index);
    EXPECT_EQ(approx[i].secondary_index, exact[i].secondary_index);
    saw_inexact |= !approx[i].lambda;
    if (approx[i].ln_C) {
      EXPECT_NEAR(approx[i].ln_C->to_double(), exact[i].ln_C->to_double(), 1e-12);
    }
  }
  EXPECT_TRUE(saw_inexact);
}

TEST(Properties, NodeValuesStayInsideTheTheoremRange) {
  NodeStop stop;
  stop.max_products = 3000;
  const Real ln2 = log(ExactRatio(2), 128);
  const Real ln3 = log(ExactRatio(3), 128);
  for (const auto& n : generate_nodes(TwoRatioFamily::collatz(), stop)) {
    EXPECT_TRUE(abs(n.ln_lambda.value) < ln2);
  }
  for (const auto& n : generate_nodes(TwoRatioFamily::three_x_plus_one(), stop)) {
    EXPECT_TRUE(abs(n.ln_lambda.value) < ln3);
  }
}

TEST(Properties, SuccessiveMaximaApproachOne) {
  NodeStop stop;
  stop.max_products = 2000;
  for (const auto& family : {TwoRatioFamily::collatz(), TwoRatioFamily::three_x_plus_one()}) {
    const auto nodes = generate_nodes(family, stop);
    std::optional<Real> last_pp;
    std::optional<Real> last_pg;
    for (const auto& n : nodes) {
      auto& last = n.side == Side::PP ? last_pp : last_pg;
      const Real mag = abs(n.ln_lambda.value);
      if (last) {
        EXPECT_TRUE(mag < *last) << family.name << " k1=" << n.k1.get_str();
      }
      last = mag;
    }
  }
}

TEST(Reciprocity, ValuesSidesAndRuns) {
  const auto g = g_nodes(9);
  const auto t = t_nodes(10);
  const auto report = reciprocity_check(g, t);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.pairs.size(), g.size());
  EXPECT_EQ(*report.pairs[2].g->lambda, ExactRatio(8, 9));
  EXPECT_EQ(*report.pairs[2].t->lambda, ExactRatio(9, 8));
  EXPECT_EQ(report.runs.back().g_count, 23u);
  EXPECT_EQ(report.runs.back().t_count, 23u);
  EXPECT_EQ(report.runs.back().g_label, "main 9");
  EXPECT_EQ(report.runs.back().t_label, "main 10");
  // The dropped 3x+1 seed 1/2 has no partner: 2/3 is not its reciprocal.
  EXPECT_NE(ExactRatio(1, 2) * ExactRatio(2, 3), 1);
}

TEST(Reciprocity, MismatchedDepthIsReported) {
  const auto report = reciprocity_check(g_nodes(9), t_nodes(9));
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.unpaired, 23u);
}

TEST(Reference, ThreeXPlusOneTableMatches) {
  const auto checks = compare_with_reference(t_nodes(10), three_x_plus_one_reference_nodes());
  ASSERT_EQ(checks.size(), 23u);
  for (const auto& c : checks) EXPECT_TRUE(c.passed()) << c.row.k1 << "," << c.row.k2;
}

TEST(Reference, CollatzTableMatchesExceptTwoMisprintedLambdas) {
  const auto checks = compare_with_reference(g_nodes(9), collatz_reference_nodes());
  ASSERT_EQ(checks.size(), 22u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.found && c.side_ok && c.k_ok && c.ln_C_ok) << c.row.k1 << "," << c.row.k2;
    const bool misprinted = (c.row.k1 == 8737 && c.row.k2 == 6199) || (c.row.k1 == 9126 && c.row.k2 == 6475);
    EXPECT_EQ(c.lambda_ok, !misprinted) << c.row.k1 << "," << c.row.k2;
    if (misprinted) {
      // The printed digits are off by about 3.3e-13 from the exact quotient.
      EXPECT_GT(c.lambda_diff, 3e-13);
      EXPECT_LT(c.lambda_diff, 4e-13);
    }
  }
}
