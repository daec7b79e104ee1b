#pragma once

// Necessary conditions on per-subgrid color distributions of shift
// colorings, a backtracking search over distributions satisfying them, and
// SMT-LIB export of the same constraint system.
//
// For a grid of x by y subgrids of size z and color c, v(c,i,j) is the
// number of c-cells in subgrid (i,j) divided by z. The conditions, stated
// for block columns and identically for block rows:
//   sum       sum_c v(c,i,j) = z for every subgrid
//   self-gap  sum_i v(c,i,j)^2 - v(c,i,j) <= z-1 (z odd) or z-2 (z even)
//   scalar    sum_i v(c,i,j1) * v(c,i,j2) <= z for columns j1 != j2
// They are necessary only; passing them does not imply a coloring exists.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridshift/grid.hpp"

namespace gridshift {

enum class Check { sum, self_gap_columns, self_gap_rows, scalar_columns, scalar_rows };
std::string_view to_string(Check c);

// Indices are 0-based. For `sum`, (first, second) is the subgrid and color
// is 0; for self-gap checks `first` is the column/row and second is -1; for
// scalar checks they are the two columns/rows.
struct Violation {
  Check check;
  int color = 0;
  int first = 0;
  int second = -1;
  long value = 0;
  long bound = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct CheckResult {
  Check check;
  std::vector<Violation> violations;
  [[nodiscard]] bool passed() const { return violations.empty(); }
};

struct ConstraintReport {
  std::vector<CheckResult> checks;  // one per Check, in enum order
  [[nodiscard]] bool passed() const;
  [[nodiscard]] const CheckResult& operator[](Check c) const { return checks[static_cast<std::size_t>(c)]; }
};

// Right-hand side of the self-gap condition.
inline long self_gap_bound(int z) { return z % 2 == 1 ? z - 1 : z - 2; }

ConstraintReport check_necessary(const DistributionSet& d);

// Same, for distributions tied to a layout. The conditions are derived for
// single-direction shifts only, so a `both` layout is refused with a
// LayoutError, as is a subgrid size that differs from d.z().
ConstraintReport check_necessary(const DistributionSet& d, const PatternLayout& layout);

std::string format_report(const ConstraintReport& r);

struct DistributionSearchOptions {
  std::size_t limit = 1;
  // Require color 1's matrix >=lex color 2's >=lex ...; sound because
  // permuting colors preserves every condition.
  bool break_color_symmetry = true;
  std::size_t node_budget = 50'000'000;
};

struct DistributionSearchResult {
  std::vector<DistributionSet> solutions;
  // True iff the whole space was exhausted (neither limit nor budget hit).
  bool complete = false;
  bool budget_exceeded = false;
  std::size_t nodes = 0;
};

// Depth-first over subgrids in row-major order, choosing a composition of z
// into k parts (each at most the self-gap-feasible maximum) per subgrid, in
// ascending lexicographic order, with every condition checked on the
// partial assignment. Throws DimensionError unless x, y, z, k >= 1.
DistributionSearchResult search_distributions(int x, int y, int z, int k, const DistributionSearchOptions& opts = {});

// SMT-LIB 2 (QF_NIA) script over constants v_c_i_j (1-based) asserting
// 0 <= v <= z and every condition, followed by check-sat and get-model.
std::string export_smtlib(int x, int y, int z, int k);

// False exactly when k^2 < n < k^2 + k, where no k-colored n-subgrid can
// carry a shift pattern.
bool subgrid_bound_holds(int n, int k);

// k blocks of x lines with y integers, blocks separated by a blank line.
std::string to_text(const DistributionSet& d);
// z is taken from the first subgrid's color sum unless given. Throws
// FormatError on ragged blocks or negative entries.
DistributionSet parse_distribution(std::string_view text, std::optional<int> z = std::nullopt);

}  // namespace gridshift
