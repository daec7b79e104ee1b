#pragma once

// Canonical forms of colorings under row permutations, column
// permutations, transposition (square grids) and color permutations.
//
// The canonical form is the lexicographically smallest row-major cell
// sequence over the orbit, with colors relabeled by first appearance; the
// relabeling makes color permutations implicit.

#include <cstddef>
#include <string>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

struct CanonicalForm {
  Coloring form;
  // apply_isomorphism(original, element) == form.
  IsoElement element;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.form == b.form; }
};

inline constexpr std::size_t kDefaultCanonicalBudget = 5'000'000;

// Level-by-level search over output rows. Each search state keeps the
// columns as an ordered partition (columns in one cell agree on every row
// placed so far) plus the colors labeled so far; only states reaching the
// smallest prefix survive a level. Throws BudgetExceeded after
// `node_budget` row expansions.
CanonicalForm canonical_form(const Coloring& c, std::size_t node_budget = kDefaultCanonicalBudget);

// Colorings with the same canonical form are isomorphic and vice versa.
bool isomorphic(const Coloring& a, const Coloring& b, std::size_t node_budget = kDefaultCanonicalBudget);

struct IsoClass {
  Coloring canonical;
  std::vector<std::size_t> members;  // indices into the classified input
};

struct Classification {
  // Ordered by canonical form.
  std::vector<IsoClass> classes;
};

// Throws DimensionError if the colorings do not share one spec.
Classification classify(const std::vector<Coloring>& cs, std::size_t node_budget = kDefaultCanonicalBudget);

// "classes N" then, per class, "class i size s" followed by its canonical
// coloring in the grid text format.
std::string classification_report(const Classification& cl);

// n*n vertices (i, j) numbered i*n + j, joined iff they share a row or a
// column; each vertex carries its cell's color.
struct ColoredGridGraph {
  int n = 0;
  std::vector<int> colors;
  std::vector<std::vector<int>> adjacency;

  [[nodiscard]] int num_vertices() const { return n * n; }
  [[nodiscard]] std::size_t num_edges() const;
};

// Throws DimensionError for non-square grids.
ColoredGridGraph grid_to_graph(const Coloring& c);

}  // namespace gridshift
