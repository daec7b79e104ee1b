#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gridshift/distribution.hpp"
#include "gridshift/error.hpp"
#include "gridshift/recipes.hpp"
#include "oracles.hpp"

using namespace gridshift;

namespace {

std::map<std::string, long> smt_values(const DistributionSet& d) {
  std::map<std::string, long> v;
  for (int c = 1; c <= d.k(); ++c) {
    for (int i = 0; i < d.x(); ++i) {
      for (int j = 0; j < d.y(); ++j) {
        v["v_" + std::to_string(c) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1)] = d.at(c, i, j);
      }
    }
  }
  return v;
}

// Color matrices reordered so color 1 is lexicographically largest.
DistributionSet sorted_colors(const DistributionSet& d) {
  std::vector<std::vector<int>> mats;
  for (int c = 1; c <= d.k(); ++c) {
    std::vector<int> m;
    for (int i = 0; i < d.x(); ++i) {
      for (int j = 0; j < d.y(); ++j) m.push_back(d.at(c, i, j));
    }
    mats.push_back(m);
  }
  std::sort(mats.begin(), mats.end(), std::greater<>());
  DistributionSet out(d.x(), d.y(), d.z(), d.k());
  for (int c = 1; c <= d.k(); ++c) {
    for (int i = 0; i < d.x(); ++i) {
      for (int j = 0; j < d.y(); ++j) out.set(c, i, j, mats[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(i * d.y() + j)]);
    }
  }
  return out;
}

}  // namespace

TEST(Conditions, SelfGapBound) {
  EXPECT_EQ(self_gap_bound(5), 4);
  EXPECT_EQ(self_gap_bound(4), 2);
  EXPECT_EQ(self_gap_bound(2), 0);
}

TEST(Conditions, ReferenceDistributionPasses) {
  const auto d = reference_distribution_25();
  EXPECT_EQ(d.x(), 5);
  EXPECT_EQ(d.k(), 5);
  EXPECT_EQ(d.at(1, 0, 0), 2);
  EXPECT_EQ(d.at(5, 4, 4), 2);
  const auto r = check_necessary(d);
  EXPECT_TRUE(r.passed()) << format_report(r);
  EXPECT_TRUE(oracle::conditions_hold(d));
}

TEST(Conditions, SingleIncrementBreaksTheSum) {
  const auto d = reference_distribution_25();
  for (int c = 1; c <= 5; ++c) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        auto m = d;
        m.set(c, i, j, d.at(c, i, j) + 1);
        const auto r = check_necessary(m);
        ASSERT_FALSE(r[Check::sum].passed());
        EXPECT_EQ(r[Check::sum].violations[0].first, i);
        EXPECT_EQ(r[Check::sum].violations[0].second, j);
      }
    }
  }
}

TEST(Conditions, AllOnesPassesFor16x16) {
  EXPECT_TRUE(check_necessary(DistributionSet::uniform(4, 4, 4, 4, 1)).passed());
}

TEST(Conditions, ReportsEachKind) {
  DistributionSet d(2, 2, 3, 2);
  // Color 1 fills column 0 of both subgrid rows with 3 (self-gap 6 + 6 > 2).
  for (int i = 0; i < 2; ++i) {
    d.set(1, i, 0, 3);
    d.set(2, i, 1, 3);
  }
  const auto r = check_necessary(d);
  EXPECT_TRUE(r[Check::sum].passed());
  EXPECT_FALSE(r[Check::self_gap_columns].passed());
  EXPECT_FALSE(r[Check::scalar_rows].passed());
  const auto& v = r[Check::self_gap_columns].violations[0];
  EXPECT_EQ(v.value, 12);
  EXPECT_EQ(v.bound, 2);
  EXPECT_NE(format_report(r).find(std::string(to_string(Check::self_gap_columns))), std::string::npos);
}

TEST(Conditions, AgreeWithDefinitionsOnRandomSets) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 400; ++t) {
    const int x = 1 + static_cast<int>(rng() % 3), y = 1 + static_cast<int>(rng() % 3), z = 2 + static_cast<int>(rng() % 4),
              k = 1 + static_cast<int>(rng() % 4);
    DistributionSet d(x, y, z, k);
    for (int i = 0; i < x; ++i) {
      for (int j = 0; j < y; ++j) {
        int left = z;
        for (int c = 1; c < k; ++c) {
          const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(left + 1));
          d.set(c, i, j, v);
          left -= v;
        }
        d.set(k, i, j, left + (rng() % 10 == 0 ? 1 : 0));
      }
    }
    EXPECT_EQ(check_necessary(d).passed(), oracle::conditions_hold(d));
  }
}

TEST(Conditions, LayoutVariantRefusesBothShifts) {
  PatternLayout l;
  l.subgrid = 5;
  l.direction = ShiftDirection::both;
  EXPECT_THROW(check_necessary(reference_distribution_25(), l), LayoutError);
  l.direction = ShiftDirection::right;
  EXPECT_TRUE(check_necessary(reference_distribution_25(), l).passed());
  l.subgrid = 4;
  EXPECT_THROW(check_necessary(reference_distribution_25(), l), LayoutError);
}

TEST(Search, FindsExactlyTheCompositionOracleSet) {
  for (auto [x, y, z, k] : {std::tuple{1, 2, 2, 2}, std::tuple{2, 2, 2, 2}, std::tuple{2, 2, 3, 2}, std::tuple{2, 2, 2, 3},
                            std::tuple{1, 3, 3, 3}, std::tuple{2, 3, 3, 2}}) {
    const auto want = oracle::all_distributions(x, y, z, k);
    DistributionSearchOptions o;
    o.limit = SIZE_MAX;
    o.break_color_symmetry = false;
    const auto got = search_distributions(x, y, z, k, o);
    EXPECT_TRUE(got.complete);
    EXPECT_EQ(std::set<DistributionSet>(got.solutions.begin(), got.solutions.end()),
              std::set<DistributionSet>(want.begin(), want.end()));
    EXPECT_EQ(got.solutions.size(), want.size());

    o.break_color_symmetry = true;
    const auto reduced = search_distributions(x, y, z, k, o);
    std::set<DistributionSet> reps;
    for (const auto& d : want) reps.insert(sorted_colors(d));
    EXPECT_EQ(std::set<DistributionSet>(reduced.solutions.begin(), reduced.solutions.end()), reps);
  }
}

TEST(Search, BudgetAndLimit) {
  DistributionSearchOptions o;
  o.node_budget = 10;
  const auto r = search_distributions(5, 5, 5, 5, o);
  EXPECT_TRUE(r.budget_exceeded);
  EXPECT_FALSE(r.complete);
  o.node_budget = 50'000'000;
  const auto one = search_distributions(5, 5, 5, 5, o);
  ASSERT_EQ(one.solutions.size(), 1U);
  EXPECT_TRUE(check_necessary(one.solutions[0]).passed());
  EXPECT_THROW(search_distributions(0, 1, 1, 1), DimensionError);
}

TEST(Search, ThirteenSubgridsOfTwoByTwoHaveNoDistribution) {
  const auto r = search_distributions(2, 2, 13, 5);
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(r.solutions.empty());
}

TEST(Smtlib, ScriptEncodesExactlyTheConditions) {
  const std::string s = export_smtlib(5, 5, 5, 5);
  EXPECT_NE(s.find("(set-logic QF_NIA)"), std::string::npos);
  EXPECT_EQ(oracle::smt_declared(s).size(), 125U);
  EXPECT_TRUE(oracle::smt_satisfied(s, smt_values(reference_distribution_25())));
  auto bad = reference_distribution_25();
  bad.set(2, 3, 1, bad.at(2, 3, 1) + 1);
  EXPECT_FALSE(oracle::smt_satisfied(s, smt_values(bad)));

  std::mt19937_64 rng(1);
  const auto all = oracle::all_distributions(2, 2, 3, 2);
  const std::string small = export_smtlib(2, 2, 3, 2);
  for (const auto& d : all) EXPECT_TRUE(oracle::smt_satisfied(small, smt_values(d)));
  for (int t = 0; t < 200; ++t) {
    DistributionSet d(2, 2, 3, 2);
    for (int c = 1; c <= 2; ++c) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) d.set(c, i, j, static_cast<int>(rng() % 4));
      }
    }
    EXPECT_EQ(oracle::smt_satisfied(small, smt_values(d)), oracle::conditions_hold(d));
  }
}

TEST(Smtlib, SizeThirteenScriptsAreWellFormed) {
  for (auto [x, z] : {std::pair{13, 2}, std::pair{2, 13}}) {
    const std::string s = export_smtlib(x, x, z, 5);
    EXPECT_EQ(oracle::smt_declared(s).size(), static_cast<std::size_t>(x * x * 5));
    std::map<std::string, long> zeros;
    for (const auto& n : oracle::smt_declared(s)) zeros[n] = 0;
    EXPECT_FALSE(oracle::smt_satisfied(s, zeros));  // sums fail
  }
}

TEST(Bound, ExcludedRangeMatchesFormula) {
  for (int k = 1; k <= 7; ++k) {
    for (int n = 1; n <= 50; ++n) EXPECT_EQ(subgrid_bound_holds(n, k), !(k * k < n && n < k * k + k)) << n << ' ' << k;
  }
}

TEST(TextFormat, RoundTrip) {
  const auto d = reference_distribution_25();
  EXPECT_EQ(parse_distribution(to_text(d)), d);
  EXPECT_EQ(parse_distribution(to_text(d), 5), d);
  EXPECT_THROW(parse_distribution("1 2\n3\n"), FormatError);
  EXPECT_THROW(parse_distribution("1 -1\n"), FormatError);
}
