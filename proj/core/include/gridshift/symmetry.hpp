#pragma once

// Lex-leader symmetry breaking for grid encodings. Candidate symmetries are
// generated from the grid structure (color swaps, adjacent row/column or
// whole-block swaps, in-block rotations, transposition), lifted to variable
// permutations, and kept only if they map the clause set onto itself. The
// added clauses preserve satisfiability but not the solution count, so they
// must not be combined with enumeration.

#include <vector>

#include "gridshift/encoder.hpp"
#include "gridshift/grid.hpp"

namespace gridshift {

// perm[v] is the image of variable v (index 0 unused); a permutation of
// 1..num_vars.
using VarPermutation = std::vector<int>;

// Lifts a cell/color map to variables of `enc`. Selector pairs follow the
// subgrid that contains the image of the subgrid's top-left cell; other
// auxiliary variables are fixed. Returns nullopt if merged classes do not
// map onto classes consistently.
std::optional<VarPermutation> lift(const Encoding& enc, const IsoElement& g);

// True iff `perm` maps every clause of `f` to a clause of `f`.
bool is_automorphism(const CnfFormula& f, const VarPermutation& perm);

// Verified structural symmetries of `enc` (identity excluded).
std::vector<VarPermutation> structural_symmetries(const Encoding& enc);

// Adds clauses forcing X <=lex perm(X), comparing cell variables in id
// order. Fresh chain variables are allocated through `enc.vars`.
void add_lex_leader(Encoding& enc, const VarPermutation& perm);

// structural_symmetries + add_lex_leader for each; returns how many
// generators were used.
int add_symmetry_breaking(Encoding& enc);

}  // namespace gridshift
