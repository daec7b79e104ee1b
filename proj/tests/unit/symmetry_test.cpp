#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "gridshift/encoder.hpp"
#include "gridshift/isomorphism.hpp"
#include "gridshift/sat.hpp"
#include "gridshift/symmetry.hpp"

using namespace gridshift;

namespace {

PatternLayout shift(int z, ShiftDirection d = ShiftDirection::left) {
  PatternLayout l;
  l.subgrid = z;
  l.direction = d;
  return l;
}

SolverStatus status(const CnfFormula& f) { return sat::solve(f, {}).status; }

}  // namespace

TEST(Symmetry, IdentityIsAnAutomorphismAndGarbageIsNot) {
  const auto enc = encode_base(GridSpec(3, 3, 2));
  VarPermutation id(static_cast<std::size_t>(enc.formula.num_vars()) + 1);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_TRUE(is_automorphism(enc.formula, id));
  auto swapped = id;
  std::swap(swapped[1], swapped[3]);  // cell (0,0) color 1 <-> cell (0,1) color 1 only
  EXPECT_FALSE(is_automorphism(enc.formula, swapped));
}

TEST(Symmetry, LiftedGridSymmetriesAreAutomorphisms) {
  const auto enc = encode_base(GridSpec(3, 4, 3));
  IsoElement g = IsoElement::identity(enc.vars.spec());
  g.row_perm = {2, 0, 1};
  g.color_perm = {3, 1, 2};
  const auto p = lift(enc, g);
  ASSERT_TRUE(p.has_value());
  EXPECT_TRUE(is_automorphism(enc.formula, *p));
}

TEST(Symmetry, InconsistentLiftIsRefused) {
  // Swapping columns 0 and 1 inside a left-shift 4-subgrid breaks the classes.
  const auto enc = encode_shift_merged(GridSpec(4, 4, 2), shift(4));
  IsoElement g = IsoElement::identity(enc.vars.spec());
  g.col_perm = {1, 0, 2, 3};
  EXPECT_FALSE(lift(enc, g).has_value());
}

TEST(Symmetry, GeneratorsAreVerified) {
  for (auto enc : {encode_base(GridSpec(4, 4, 2)), encode_shift_merged(GridSpec(10, 10, 3), shift(3)),
                   encode_shift_selector(GridSpec(8, 8, 3), shift(4, ShiftDirection::both))}) {
    const auto gens = structural_symmetries(enc);
    EXPECT_FALSE(gens.empty());
    for (const auto& p : gens) EXPECT_TRUE(is_automorphism(enc.formula, p));
  }
}

TEST(Symmetry, PreservesSatisfiability) {
  struct Case {
    GridSpec spec;
    std::optional<PatternLayout> layout;
  };
  const std::vector<Case> cases = {
      {GridSpec(4, 4, 2), std::nullopt},        {GridSpec(5, 5, 2), std::nullopt},
      {GridSpec(6, 6, 2), shift(2)},            {GridSpec(6, 6, 2), shift(3)},
      {GridSpec(8, 8, 2), shift(4)},            {GridSpec(10, 10, 3), shift(4)},
      {GridSpec(10, 10, 3), shift(5)},          {GridSpec(6, 6, 2), shift(2, ShiftDirection::both)},
      {GridSpec(8, 8, 3), shift(4, ShiftDirection::both)},
  };
  for (const auto& c : cases) {
    auto enc = encode(c.spec, c.layout);
    const auto before = status(enc.formula);
    add_symmetry_breaking(enc);
    EXPECT_EQ(status(enc.formula), before);
  }
}

TEST(Symmetry, EverySolutionOrbitKeepsALeader) {
  // With symmetry breaking the surviving colorings still cover every class.
  auto enc = encode_base(GridSpec(4, 4, 2));
  const auto full = sat::enumerate(enc, SIZE_MAX);
  add_symmetry_breaking(enc);
  const auto reduced = sat::enumerate(enc, SIZE_MAX);
  ASSERT_TRUE(reduced.complete);
  EXPECT_LT(reduced.colorings.size(), full.colorings.size());
  EXPECT_EQ(classify(reduced.colorings).classes.size(), classify(full.colorings).classes.size());
}
