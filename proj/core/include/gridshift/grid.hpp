#pragma once

// Grid / coloring domain types and the operations every other module
// builds on: the rectangle oracle, shift-layout conformance, the
// isomorphism group action and per-subgrid color distributions.
//
// Conventions: colors are 1-based (1..k). Row/column indices in the C++
// API are 0-based; the text formats and CLI print them 1-based.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridshift {

struct GridSpec {
  int rows = 1;
  int cols = 1;
  int colors = 1;

  GridSpec() = default;
  // Throws DimensionError unless all three are >= 1.
  GridSpec(int m, int n, int k);

  [[nodiscard]] int cells() const { return rows * cols; }
  [[nodiscard]] bool square() const { return rows == cols; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class Coloring {
 public:
  // Throws FormatError if the cell count or any color is out of range.
  Coloring(GridSpec spec, std::vector<int> cells);
  static Coloring constant(GridSpec spec, int color);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] int rows() const { return spec_.rows; }
  [[nodiscard]] int cols() const { return spec_.cols; }
  [[nodiscard]] int colors() const { return spec_.colors; }
  [[nodiscard]] int at(int r, int c) const { return cells_[static_cast<std::size_t>(r * spec_.cols + c)]; }
  [[nodiscard]] std::span<const int> cells() const { return cells_; }

  // Returns a copy with one cell changed; the color must be in range.
  [[nodiscard]] Coloring with_cell(int r, int c, int color) const;

  friend bool operator==(const Coloring&, const Coloring&) = default;
  friend auto operator<=>(const Coloring& a, const Coloring& b) { return a.cells_ <=> b.cells_; }

 private:
  GridSpec spec_;
  std::vector<int> cells_;
};

// Four cells (row1,col1) (row1,col2) (row2,col1) (row2,col2) sharing `color`.
struct RectangleWitness {
  int row1 = 0;
  int row2 = 0;
  int col1 = 0;
  int col2 = 0;
  int color = 0;
  friend bool operator==(const RectangleWitness&, const RectangleWitness&) = default;
};

enum class ShiftDirection { left, right, both };
enum class DiagonalMode { none, diagonal, anti_diagonal, both };

std::string_view to_string(ShiftDirection d);
std::string_view to_string(DiagonalMode d);
ShiftDirection parse_direction(std::string_view s);
DiagonalMode parse_diagonal(std::string_view s);

// Shift streamlining layout. Subgrids of size `subgrid` tile the upper-left
// floor(m/z)*z by floor(n/z)*z region. Right shift: row r of a subgrid is
// its first row rotated right by r, so cell(r, c) == cell(0, (c - r) mod z);
// left shift uses (c + r) mod z. A midgrid applies the same relation one
// level up with whole subgrids as units.
struct PatternLayout {
  int subgrid = 2;
  ShiftDirection direction = ShiftDirection::left;
  std::optional<int> midgrid;
  int partial_rows = 0;
  int partial_cols = 0;
  DiagonalMode diagonal = DiagonalMode::none;

  [[nodiscard]] int subgrid_rows(const GridSpec& s) const { return s.rows / subgrid; }
  [[nodiscard]] int subgrid_cols(const GridSpec& s) const { return s.cols / subgrid; }
  [[nodiscard]] int tiled_rows(const GridSpec& s) const { return subgrid_rows(s) * subgrid; }
  [[nodiscard]] int tiled_cols(const GridSpec& s) const { return subgrid_cols(s) * subgrid; }
  [[nodiscard]] bool divides(const GridSpec& s) const {
    return s.rows % subgrid == 0 && s.cols % subgrid == 0;
  }

  friend bool operator==(const PatternLayout&, const PatternLayout&) = default;
};

// Throws LayoutError when `layout` cannot be applied to `spec`.
void validate(const PatternLayout& layout, const GridSpec& spec);

// Column index of the first-row cell that a cell at subgrid-relative
// (row, col) copies under a single-direction shift of size z.
inline int shift_source(int row, int col, int z, ShiftDirection d) {
  const int off = d == ShiftDirection::right ? col - row : col + row;
  return ((off % z) + z) % z;
}

struct IsoElement {
  std::vector<int> row_perm;    // input row -> output row
  std::vector<int> col_perm;    // input col -> output col
  bool transpose = false;       // applied before the permutations
  std::vector<int> color_perm;  // index = input color - 1, value = output color (1-based)

  static IsoElement identity(const GridSpec& spec);
  // h.after(g) acts as "apply g, then h".
  [[nodiscard]] IsoElement after(const IsoElement& g) const;
  friend bool operator==(const IsoElement&, const IsoElement&) = default;
};

// Bitset per (color,row); a rectangle exists iff two rows of the same
// color share at least two set columns.
std::optional<RectangleWitness> find_monochromatic_rectangle(const Coloring& c);

bool matches_layout(const Coloring& c, const PatternLayout& layout);

Coloring apply_isomorphism(const Coloring& c, const IsoElement& g);

// Throws DimensionError if g does not fit c's spec.
void validate(const IsoElement& g, const GridSpec& spec);

// k matrices of shape x-by-y: entry (c, i, j) is the number of cells of
// color c in subgrid (i, j) divided by z.
class DistributionSet {
 public:
  DistributionSet() = default;
  // All-zero set. Throws DimensionError on non-positive sizes.
  DistributionSet(int x, int y, int z, int k);
  // All entries equal to `value`.
  static DistributionSet uniform(int x, int y, int z, int k, int value);

  [[nodiscard]] int x() const { return x_; }
  [[nodiscard]] int y() const { return y_; }
  [[nodiscard]] int z() const { return z_; }
  [[nodiscard]] int k() const { return k_; }

  // `color` is 1-based, i and j 0-based.
  [[nodiscard]] int at(int color, int i, int j) const { return values_[index(color, i, j)]; }
  void set(int color, int i, int j, int v) { values_[index(color, i, j)] = v; }
  [[nodiscard]] std::span<const int> values() const { return values_; }

  friend bool operator==(const DistributionSet&, const DistributionSet&) = default;
  friend auto operator<=>(const DistributionSet& a, const DistributionSet& b) {
    return a.values_ <=> b.values_;
  }

 private:
  [[nodiscard]] std::size_t index(int color, int i, int j) const {
    return static_cast<std::size_t>(((color - 1) * x_ + i) * y_ + j);
  }
  int x_ = 0, y_ = 0, z_ = 0, k_ = 0;
  std::vector<int> values_;
};

// Requires m and n divisible by the subgrid size. Throws DimensionError
// otherwise, and LayoutError if a count is not a multiple of z (the
// coloring was not a shift coloring after all).
DistributionSet extract_distribution(const Coloring& c, const PatternLayout& layout);
// Same over the floor-tiled upper-left region only; leftover rows and
// columns are ignored.
DistributionSet extract_tiled_distribution(const Coloring& c, const PatternLayout& layout);

// ---- text format: "m n k" then m lines of n colors ----

std::string to_text(const Coloring& c);
Coloring parse_coloring(std::string_view text);
// Reads zero or more colorings back to back (blank lines / '#' comments
// between them are ignored).
std::vector<Coloring> parse_colorings(std::string_view text);
std::ostream& operator<<(std::ostream& os, const Coloring& c);

}  // namespace gridshift
