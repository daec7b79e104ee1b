#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "gridshift/encoder.hpp"
#include "gridshift/error.hpp"
#include "gridshift/isomorphism.hpp"
#include "gridshift/sat.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace gridshift;

TEST(Canonical, MatchesOrbitMinimumOn3x3) {
  const auto v = properties::canonical_form_matches_orbits();
  EXPECT_TRUE(v.ok) << v.detail;
}

TEST(Canonical, InvariantUnderRandomGroupElements) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const GridSpec spec(5, 5, 3);
    const auto c = oracle::random_coloring(rng, spec);
    IsoElement g = IsoElement::identity(spec);
    std::shuffle(g.row_perm.begin(), g.row_perm.end(), rng);
    std::shuffle(g.col_perm.begin(), g.col_perm.end(), rng);
    std::shuffle(g.color_perm.begin(), g.color_perm.end(), rng);
    g.transpose = rng() % 2;
    const auto a = canonical_form(c);
    EXPECT_EQ(a.form, canonical_form(apply_isomorphism(c, g)).form);
    EXPECT_EQ(apply_isomorphism(c, a.element), a.form);
  }
}

TEST(Canonical, RectangularGridsIgnoreTranspose) {
  const auto c = parse_coloring("2 3 2\n1 1 2\n2 1 1\n");
  const auto f = canonical_form(c);
  EXPECT_EQ(f.form.rows(), 2);
  EXPECT_FALSE(f.element.transpose);
}

TEST(Canonical, BudgetIsEnforced) {
  const auto c = Coloring::constant(GridSpec(8, 8, 1), 1);
  EXPECT_THROW(canonical_form(c, 3), BudgetExceeded);
}

TEST(Classify, Grid442HasThreeClassesMatchingRepresentatives) {
  const auto en = sat::enumerate(encode_base(GridSpec(4, 4, 2)), SIZE_MAX);
  ASSERT_EQ(en.colorings.size(), 840U);
  const auto cl = classify(en.colorings);
  ASSERT_EQ(cl.classes.size(), 3U);
  std::size_t total = 0;
  for (const auto& k : cl.classes) total += k.members.size();
  EXPECT_EQ(total, 840U);

  // Each known representative falls into a different class.
  const auto figs = fixtures::grid442_representatives();
  std::set<Coloring> hit;
  for (const auto& f : figs) hit.insert(canonical_form(f).form);
  EXPECT_EQ(hit.size(), 3U);
  for (const auto& k : cl.classes) EXPECT_TRUE(hit.contains(k.canonical));

  // The graph-isomorphism oracle agrees on class boundaries.
  for (std::size_t i = 0; i < figs.size(); ++i) {
    for (std::size_t j = 0; j < figs.size(); ++j) EXPECT_EQ(oracle::graphs_isomorphic(figs[i], figs[j]), i == j);
  }
  for (const auto& k : cl.classes) {
    for (std::size_t m = 0; m < k.members.size(); m += 7) {
      EXPECT_TRUE(oracle::graphs_isomorphic(en.colorings[k.members[m]], k.canonical));
    }
  }
}

TEST(Classify, AgreesWithGraphOracleOnRandomPairs) {
  std::mt19937_64 rng(5);
  const GridSpec spec(4, 4, 3);
  int same = 0;
  for (int i = 0; i < 150; ++i) {
    const auto a = oracle::random_coloring(rng, spec);
    auto b = oracle::random_coloring(rng, spec);
    if (i % 2 == 0) {
      IsoElement g = IsoElement::identity(spec);
      std::shuffle(g.row_perm.begin(), g.row_perm.end(), rng);
      std::shuffle(g.color_perm.begin(), g.color_perm.end(), rng);
      g.transpose = true;
      b = apply_isomorphism(a, g);
    }
    const bool iso = isomorphic(a, b);
    EXPECT_EQ(iso, oracle::graphs_isomorphic(a, b));
    same += iso;
  }
  EXPECT_GE(same, 75);
}

TEST(Classify, RejectsMixedSpecsAndReports) {
  EXPECT_THROW(classify({Coloring::constant(GridSpec(2, 2, 2), 1), Coloring::constant(GridSpec(2, 3, 2), 1)}), DimensionError);
  const auto r = classification_report(classify(fixtures::grid442_representatives()));
  EXPECT_EQ(r.rfind("classes 3\n", 0), 0U);
  EXPECT_NE(r.find("class 1 size 1"), std::string::npos);
}

TEST(Graph, RookGraphShape) {
  const auto g = grid_to_graph(fixtures::grid442_representatives()[0]);
  EXPECT_EQ(g.num_vertices(), 16);
  EXPECT_EQ(g.num_edges(), 16U * 6U / 2U);
  EXPECT_EQ(g.colors[5], fixtures::grid442_representatives()[0].at(1, 1));
  EXPECT_THROW(grid_to_graph(Coloring::constant(GridSpec(2, 3, 1), 1)), DimensionError);
}
