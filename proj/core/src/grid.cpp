#include "gridshift/grid.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

GridSpec::GridSpec(int m, int n, int k) : rows(m), cols(n), colors(k) {
  if (m < 1 || n < 1 || k < 1) {
    throw DimensionError("grid spec needs rows, cols, colors >= 1, got " + std::to_string(m) +
                         " " + std::to_string(n) + " " + std::to_string(k));
  }
}

Coloring::Coloring(GridSpec spec, std::vector<int> cells) : spec_(spec), cells_(std::move(cells)) {
  if (cells_.size() != static_cast<std::size_t>(spec_.cells())) {
    throw FormatError("coloring has " + std::to_string(cells_.size()) + " cells, expected " +
                      std::to_string(spec_.cells()));
  }
  for (int v : cells_) {
    if (v < 1 || v > spec_.colors) {
      throw FormatError("color " + std::to_string(v) + " outside 1.." + std::to_string(spec_.colors));
    }
  }
}

Coloring Coloring::constant(GridSpec spec, int color) {
  return Coloring(spec, std::vector<int>(static_cast<std::size_t>(spec.cells()), color));
}

Coloring Coloring::with_cell(int r, int c, int color) const {
  auto cells = cells_;
  cells.at(static_cast<std::size_t>(r * spec_.cols + c)) = color;
  return Coloring(spec_, std::move(cells));
}

std::string_view to_string(ShiftDirection d) {
  switch (d) {
    case ShiftDirection::left: return "left";
    case ShiftDirection::right: return "right";
    case ShiftDirection::both: return "both";
  }
  return "?";
}

std::string_view to_string(DiagonalMode d) {
  switch (d) {
    case DiagonalMode::none: return "none";
    case DiagonalMode::diagonal: return "diag";
    case DiagonalMode::anti_diagonal: return "anti";
    case DiagonalMode::both: return "both";
  }
  return "?";
}

ShiftDirection parse_direction(std::string_view s) {
  if (s == "left") return ShiftDirection::left;
  if (s == "right") return ShiftDirection::right;
  if (s == "both" || s == "selector-both") return ShiftDirection::both;
  throw LayoutError("unknown shift direction '" + std::string(s) + "'");
}

DiagonalMode parse_diagonal(std::string_view s) {
  if (s == "none") return DiagonalMode::none;
  if (s == "diag" || s == "diagonal") return DiagonalMode::diagonal;
  if (s == "anti" || s == "anti-diagonal") return DiagonalMode::anti_diagonal;
  if (s == "both") return DiagonalMode::both;
  throw LayoutError("unknown diagonal mode '" + std::string(s) + "'");
}

void validate(const PatternLayout& layout, const GridSpec& spec) {
  const int z = layout.subgrid;
  if (z < 2) throw LayoutError("subgrid size must be >= 2");
  if (z > std::min(spec.rows, spec.cols)) {
    throw LayoutError("subgrid size " + std::to_string(z) + " exceeds the grid");
  }
  if (layout.midgrid) {
    const int mid = *layout.midgrid;
    if (mid < z || mid % z != 0) {
      throw LayoutError("midgrid size must be a positive multiple of the subgrid size");
    }
    if (mid > std::min(spec.rows, spec.cols)) throw LayoutError("midgrid exceeds the grid");
  }
  if (layout.partial_rows < 0 || layout.partial_cols < 0) {
    throw LayoutError("partial rows/cols must be nonnegative");
  }
  if (layout.partial_rows >= z || layout.partial_cols >= z) {
    throw LayoutError("partial rows/cols must be smaller than the subgrid size");
  }
  if (layout.tiled_rows(spec) + layout.partial_rows > spec.rows ||
      layout.tiled_cols(spec) + layout.partial_cols > spec.cols) {
    throw LayoutError("partial rows/cols run past the grid boundary");
  }
  if (layout.direction == ShiftDirection::both &&
      (layout.midgrid || layout.partial_rows || layout.partial_cols ||
       layout.diagonal != DiagonalMode::none)) {
    throw LayoutError("selector (both-direction) layouts support plain subgrid tiling only");
  }
}

IsoElement IsoElement::identity(const GridSpec& spec) {
  IsoElement g;
  g.row_perm.resize(static_cast<std::size_t>(spec.rows));
  g.col_perm.resize(static_cast<std::size_t>(spec.cols));
  g.color_perm.resize(static_cast<std::size_t>(spec.colors));
  std::iota(g.row_perm.begin(), g.row_perm.end(), 0);
  std::iota(g.col_perm.begin(), g.col_perm.end(), 0);
  std::iota(g.color_perm.begin(), g.color_perm.end(), 1);
  return g;
}

IsoElement IsoElement::after(const IsoElement& g) const {
  const IsoElement& h = *this;
  IsoElement out;
  out.transpose = g.transpose != h.transpose;
  auto compose = [](const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> r(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer.at(static_cast<std::size_t>(inner[i]));
    return r;
  };
  if (h.transpose) {
    // g's output rows become h's input columns.
    out.row_perm = compose(h.row_perm, g.col_perm);
    out.col_perm = compose(h.col_perm, g.row_perm);
  } else {
    out.row_perm = compose(h.row_perm, g.row_perm);
    out.col_perm = compose(h.col_perm, g.col_perm);
  }
  out.color_perm.resize(g.color_perm.size());
  for (std::size_t i = 0; i < g.color_perm.size(); ++i) {
    out.color_perm[i] = h.color_perm.at(static_cast<std::size_t>(g.color_perm[i] - 1));
  }
  return out;
}

namespace {

bool is_permutation_of(const std::vector<int>& p, int n, int base) {
  if (p.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : p) {
    const int i = v - base;
    if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) return false;
    seen[static_cast<std::size_t>(i)] = 1;
  }
  return true;
}

}  // namespace

void validate(const IsoElement& g, const GridSpec& spec) {
  if (g.transpose && !spec.square()) throw DimensionError("transpose needs a square grid");
  if (!is_permutation_of(g.row_perm, spec.rows, 0)) throw DimensionError("row_perm is not a permutation of the rows");
  if (!is_permutation_of(g.col_perm, spec.cols, 0)) throw DimensionError("col_perm is not a permutation of the columns");
  if (!is_permutation_of(g.color_perm, spec.colors, 1)) throw DimensionError("color_perm is not a permutation of 1..k");
}

Coloring apply_isomorphism(const Coloring& c, const IsoElement& g) {
  validate(g, c.spec());
  const int m = c.rows();
  const int n = c.cols();
  std::vector<int> out(static_cast<std::size_t>(m * n));
  for (int r = 0; r < m; ++r) {
    for (int col = 0; col < n; ++col) {
      const int rr = g.transpose ? col : r;
      const int cc = g.transpose ? r : col;
      const int orow = g.row_perm[static_cast<std::size_t>(rr)];
      const int ocol = g.col_perm[static_cast<std::size_t>(cc)];
      out[static_cast<std::size_t>(orow * n + ocol)] = g.color_perm[static_cast<std::size_t>(c.at(r, col) - 1)];
    }
  }
  return Coloring(c.spec(), std::move(out));
}

std::optional<RectangleWitness> find_monochromatic_rectangle(const Coloring& c) {
  const int m = c.rows();
  const int n = c.cols();
  if (m < 2 || n < 2) return std::nullopt;
  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(m * words));
  for (int color = 1; color <= c.colors(); ++color) {
    std::fill(bits.begin(), bits.end(), 0);
    for (int r = 0; r < m; ++r) {
      for (int col = 0; col < n; ++col) {
        if (c.at(r, col) == color) {
          bits[static_cast<std::size_t>(r * words + col / 64)] |= std::uint64_t{1} << (col % 64);
        }
      }
    }
    for (int r1 = 0; r1 < m; ++r1) {
      const std::uint64_t* a = &bits[static_cast<std::size_t>(r1 * words)];
      for (int r2 = r1 + 1; r2 < m; ++r2) {
        const std::uint64_t* b = &bits[static_cast<std::size_t>(r2 * words)];
        int count = 0;
        for (int w = 0; w < words && count < 2; ++w) count += std::popcount(a[w] & b[w]);
        if (count < 2) continue;
        int found[2];
        int nf = 0;
        for (int w = 0; w < words && nf < 2; ++w) {
          std::uint64_t x = a[w] & b[w];
          while (x != 0 && nf < 2) {
            found[nf++] = w * 64 + std::countr_zero(x);
            x &= x - 1;
          }
        }
        return RectangleWitness{r1, r2, found[0], found[1], color};
      }
    }
  }
  return std::nullopt;
}

namespace {

bool same_block(const Coloring& c, int r1, int c1, int r2, int c2, int size) {
  for (int r = 0; r < size; ++r) {
    for (int col = 0; col < size; ++col) {
      if (c.at(r1 + r, c1 + col) != c.at(r2 + r, c2 + col)) return false;
    }
  }
  return true;
}

bool subgrid_shifted(const Coloring& c, int top, int left, int z, ShiftDirection d) {
  for (int r = 1; r < z; ++r) {
    for (int col = 0; col < z; ++col) {
      if (c.at(top + r, left + col) != c.at(top, left + shift_source(r, col, z, d))) return false;
    }
  }
  return true;
}

}  // namespace

bool matches_layout(const Coloring& c, const PatternLayout& layout) {
  const GridSpec& spec = c.spec();
  validate(layout, spec);
  const int z = layout.subgrid;
  const int sx = layout.subgrid_rows(spec);
  const int sy = layout.subgrid_cols(spec);

  for (int a = 0; a < sx; ++a) {
    for (int b = 0; b < sy; ++b) {
      if (layout.direction == ShiftDirection::both) {
        if (!subgrid_shifted(c, a * z, b * z, z, ShiftDirection::left) &&
            !subgrid_shifted(c, a * z, b * z, z, ShiftDirection::right)) {
          return false;
        }
      } else if (!subgrid_shifted(c, a * z, b * z, z, layout.direction)) {
        return false;
      }
    }
  }

  if (layout.midgrid) {
    const int w = *layout.midgrid / z;
    const int mx = spec.rows / *layout.midgrid;
    const int my = spec.cols / *layout.midgrid;
    for (int p = 0; p < mx; ++p) {
      for (int q = 0; q < my; ++q) {
        for (int a = 1; a < w; ++a) {
          for (int b = 0; b < w; ++b) {
            const int src = shift_source(a, b, w, layout.direction);
            if (!same_block(c, (p * w + a) * z, (q * w + b) * z, p * w * z, (q * w + src) * z, z)) {
              return false;
            }
          }
        }
      }
    }
  }

  const int row_end = layout.tiled_rows(spec) + layout.partial_rows;
  const int col_end = layout.tiled_cols(spec) + layout.partial_cols;
  for (int r = layout.tiled_rows(spec); r < row_end; ++r) {
    for (int col = 0; col < col_end; ++col) {
      if (c.at(r, col) != c.at(r - z, col)) return false;
    }
  }
  for (int col = layout.tiled_cols(spec); col < col_end; ++col) {
    for (int r = 0; r < row_end; ++r) {
      if (c.at(r, col) != c.at(r, col - z)) return false;
    }
  }

  const int diag = std::min(sx, sy);
  const bool main_diag = layout.diagonal == DiagonalMode::diagonal || layout.diagonal == DiagonalMode::both;
  const bool anti_diag = layout.diagonal == DiagonalMode::anti_diagonal || layout.diagonal == DiagonalMode::both;
  for (int i = 1; i < diag; ++i) {
    if (main_diag && !same_block(c, i * z, i * z, 0, 0, z)) return false;
    if (anti_diag && !same_block(c, i * z, (sy - 1 - i) * z, 0, (sy - 1) * z, z)) return false;
  }
  return true;
}

DistributionSet::DistributionSet(int x, int y, int z, int k) : x_(x), y_(y), z_(z), k_(k) {
  if (x < 1 || y < 1 || z < 1 || k < 1) throw DimensionError("distribution sizes must be >= 1");
  values_.assign(static_cast<std::size_t>(x * y * k), 0);
}

DistributionSet DistributionSet::uniform(int x, int y, int z, int k, int value) {
  DistributionSet d(x, y, z, k);
  std::fill(d.values_.begin(), d.values_.end(), value);
  return d;
}

DistributionSet extract_distribution(const Coloring& c, const PatternLayout& layout) {
  if (layout.subgrid < 1 || !layout.divides(c.spec())) {
    throw DimensionError("grid " + std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                         " is not tiled by subgrids of size " + std::to_string(layout.subgrid));
  }
  return extract_tiled_distribution(c, layout);
}

DistributionSet extract_tiled_distribution(const Coloring& c, const PatternLayout& layout) {
  const int z = layout.subgrid;
  if (z < 1 || z > c.rows() || z > c.cols()) throw DimensionError("no whole subgrid of size " + std::to_string(z) + " fits");
  const int x = c.rows() / z;
  const int y = c.cols() / z;
  DistributionSet d(x, y, z, c.colors());
  std::vector<int> counts(static_cast<std::size_t>(c.colors()));
  for (int i = 0; i < x; ++i) {
    for (int j = 0; j < y; ++j) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int r = 0; r < z; ++r) {
        for (int col = 0; col < z; ++col) ++counts[static_cast<std::size_t>(c.at(i * z + r, j * z + col) - 1)];
      }
      for (int color = 1; color <= c.colors(); ++color) {
        const int n = counts[static_cast<std::size_t>(color - 1)];
        if (n % z != 0) {
          throw LayoutError("subgrid (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") has " +
                            std::to_string(n) + " cells of color " + std::to_string(color) +
                            ", not a multiple of " + std::to_string(z));
        }
        d.set(color, i, j, n / z);
      }
    }
  }
  return d;
}

std::string to_text(const Coloring& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Coloring& c) {
  os << c.rows() << ' ' << c.cols() << ' ' << c.colors() << '\n';
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) {
      if (col) os << ' ';
      os << c.at(r, col);
    }
    os << '\n';
  }
  return os;
}

namespace {

class IntReader {
 public:
  explicit IntReader(std::string_view text) : text_(text) {}

  std::optional<int> next() {
    skip();
    if (pos_ >= text_.size()) return std::nullopt;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    int v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || (ptr != end && !is_space(*ptr) && *ptr != '#')) {
      std::size_t stop = pos_;
      while (stop < text_.size() && !is_space(text_[stop])) ++stop;
      throw FormatError("expected an integer, got '" + std::string(text_.substr(pos_, stop - pos_)) + "'");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  int require(const char* what) {
    auto v = next();
    if (!v) throw FormatError(std::string("unexpected end of input while reading ") + what);
    return *v;
  }

 private:
  static bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; }
  void skip() {
    while (pos_ < text_.size()) {
      if (is_space(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Coloring read_one(IntReader& in, int first) {
  const int m = first;
  const int n = in.require("column count");
  const int k = in.require("color count");
  GridSpec spec;
  try {
    spec = GridSpec(m, n, k);
  } catch (const DimensionError& e) {
    throw FormatError(e.what());
  }
  std::vector<int> cells(static_cast<std::size_t>(m * n));
  for (auto& v : cells) v = in.require("cell color");
  return Coloring(spec, std::move(cells));
}

}  // namespace

std::vector<Coloring> parse_colorings(std::string_view text) {
  IntReader in(text);
  std::vector<Coloring> out;
  while (auto first = in.next()) out.push_back(read_one(in, *first));
  return out;
}

Coloring parse_coloring(std::string_view text) {
  auto all = parse_colorings(text);
  if (all.size() != 1) {
    throw FormatError("expected exactly one coloring, found " + std::to_string(all.size()));
  }
  return std::move(all.front());
}

}  // namespace gridshift
