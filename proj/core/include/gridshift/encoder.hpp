#pragma once

// CNF encodings of rectangle-free k-coloring, with shift streamlining.
//
// Cell (i, j) with color c gets variable i*n*k + j*k + c before any merging
// (0-based i, j; 1-based c). Merged encodings group shift-identified cells
// into classes, number classes by their smallest cell index, and give class
// q with color c the id q*k + c. Auxiliary variables (selector pairs,
// counter registers) follow after all cell ids.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridshift/cnf.hpp"
#include "gridshift/grid.hpp"

namespace gridshift {

class VarMap {
 public:
  // One class per cell.
  explicit VarMap(GridSpec spec);
  // `cell_class[cell]` must number classes 0..q-1 in order of first appearance.
  VarMap(GridSpec spec, std::optional<PatternLayout> layout, std::vector<int> cell_class);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] const std::optional<PatternLayout>& layout() const { return layout_; }

  [[nodiscard]] int num_classes() const { return num_classes_; }
  [[nodiscard]] int num_cell_vars() const { return num_classes_ * spec_.colors; }
  [[nodiscard]] int num_vars() const { return num_cell_vars() + num_aux_; }
  [[nodiscard]] int num_aux() const { return num_aux_; }

  [[nodiscard]] int class_of(int row, int col) const { return cell_class_[static_cast<std::size_t>(row * spec_.cols + col)]; }
  [[nodiscard]] int class_var(int cls, int color) const { return cls * spec_.colors + color; }
  [[nodiscard]] int var(int row, int col, int color) const { return class_var(class_of(row, col), color); }
  // Smallest-index cell of the class, as (row, col).
  [[nodiscard]] std::pair<int, int> representative(int cls) const;
  [[nodiscard]] const std::vector<int>& cell_classes() const { return cell_class_; }

  // Reserves a fresh auxiliary id above every cell id.
  int new_aux() { return num_cell_vars() + ++num_aux_; }

  // Selector (L, R) pairs, one per tiled subgrid in row-major subgrid order.
  std::vector<std::pair<int, int>> selectors;

 private:
  GridSpec spec_;
  std::optional<PatternLayout> layout_;
  std::vector<int> cell_class_;
  std::vector<int> class_rep_;
  int num_classes_ = 0;
  int num_aux_ = 0;
};

struct Encoding {
  CnfFormula formula;
  VarMap vars;
};

enum class ShiftEncoding {
  merged,    // identified cells share one variable
  equal,     // base encoding plus Equal(x, y) binary clauses
  selector,  // per-subgrid (L, R) choice between left and right shift
};

// Exactly-one color per cell plus one negative 4-clause per
// (color, row pair, column pair).
Encoding encode_base(const GridSpec& spec);

// Direction must be left or right. Rectangle clauses are emitted over class
// ids with repeated literals collapsed and duplicate clauses dropped.
Encoding encode_shift_merged(const GridSpec& spec, const PatternLayout& layout);

// Same constraint set as encode_shift_merged, but as the base encoding plus
// Equal(x, y) = (-x | y) & (x | -y) per identified cell pair and color.
Encoding encode_shift_equal(const GridSpec& spec, const PatternLayout& layout);

// Direction must be `both`. Per subgrid, for every non-first row cell
// (p, q) and color l with left source t1 and right source t2 in the first
// row: (-x_pq | x_t1 | L) & (-x_t1 | x_pq | L) & (-x_pq | x_t2 | R) &
// (-x_t2 | x_pq | R), plus XOR(L, R). A true L therefore releases the
// left-shift equalities; decode with selector_directions.
Encoding encode_shift_selector(const GridSpec& spec, const PatternLayout& layout);

// Dispatches on layout presence / direction / requested encoding.
Encoding encode(const GridSpec& spec, const std::optional<PatternLayout>& layout,
                ShiftEncoding kind = ShiftEncoding::merged);

// Pairs of cells (row-major indices) that the layout identifies. Every
// shift-streamlined encoding is built from this list.
std::vector<std::pair<int, int>> shift_identifications(const GridSpec& spec, const PatternLayout& layout);

// For every tiled subgrid and color, constrains the number of that
// color's first-row classes to exactly d(color, i, j), using sequential
// counters (Sinz) for the at-most and at-least halves. Requires an
// encoding built by encode_shift_merged.
void add_distribution_constraints(Encoding& enc, const DistributionSet& d);

// Negation of the true class literal of every class; forbids exactly the
// colorings that decode to `c`.
std::vector<int> blocking_clause(const VarMap& vm, const Coloring& c);
void add_blocking_clause(CnfFormula& f, const VarMap& vm, const Coloring& c);

// Throws DecodeError if some cell has zero or several true colors.
Coloring decode_model(const Model& model, const VarMap& vm);

// Unit literals that force `c` in the given map; used for round-trip checks.
std::vector<int> coloring_literals(const VarMap& vm, const Coloring& c);

// Direction chosen by each subgrid of a selector encoding: right when L is
// true, left otherwise.
std::vector<ShiftDirection> selector_directions(const Model& model, const VarMap& vm);

// Sidecar map: one "var row col color" line (1-based row/col) per cell and
// color, preceded by a "c gridshift-map m n k" comment.
std::string write_map(const VarMap& vm);
VarMap parse_map(std::string_view text);

}  // namespace gridshift
