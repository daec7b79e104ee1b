#include "gridshift/encoder.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "gridshift/error.hpp"

namespace gridshift {

namespace {

std::vector<int> identity_classes(const GridSpec& spec) {
  std::vector<int> cls(static_cast<std::size_t>(spec.cells()));
  std::iota(cls.begin(), cls.end(), 0);
  return cls;
}

}  // namespace

VarMap::VarMap(GridSpec spec) : VarMap(spec, std::nullopt, identity_classes(spec)) {}

VarMap::VarMap(GridSpec spec, std::optional<PatternLayout> layout, std::vector<int> cell_class)
    : spec_(spec), layout_(std::move(layout)), cell_class_(std::move(cell_class)) {
  if (cell_class_.size() != static_cast<std::size_t>(spec_.cells())) {
    throw DimensionError("cell class table does not match the grid");
  }
  for (std::size_t cell = 0; cell < cell_class_.size(); ++cell) {
    const int c = cell_class_[cell];
    if (c == num_classes_) {
      class_rep_.push_back(static_cast<int>(cell));
      ++num_classes_;
    } else if (c < 0 || c > num_classes_) {
      throw DimensionError("cell classes must be numbered in order of first appearance");
    }
  }
}

std::pair<int, int> VarMap::representative(int cls) const {
  const int cell = class_rep_.at(static_cast<std::size_t>(cls));
  return {cell / spec_.cols, cell % spec_.cols};
}

namespace {

void emit_exactly_one(CnfFormula& f, const VarMap& vm) {
  const int k = vm.spec().colors;
  for (int cls = 0; cls < vm.num_classes(); ++cls) {
    std::vector<int> alo;
    alo.reserve(static_cast<std::size_t>(k));
    for (int c = 1; c <= k; ++c) alo.push_back(vm.class_var(cls, c));
    f.add_clause(alo);
    for (int c1 = 1; c1 <= k; ++c1) {
      for (int c2 = c1 + 1; c2 <= k; ++c2) f.add_clause({-vm.class_var(cls, c1), -vm.class_var(cls, c2)});
    }
  }
}

struct ClauseKeyHash {
  std::size_t operator()(const std::array<int, 4>& a) const {
    std::size_t h = 1469598103934665603ULL;
    for (int v : a) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(v))) * 1099511628211ULL;
    return h;
  }
};

// Rectangle clauses over (possibly merged) class ids, with repeated literals
// collapsed and identical clauses emitted once.
void emit_rectangles(CnfFormula& f, const VarMap& vm, bool dedupe) {
  const GridSpec& s = vm.spec();
  std::unordered_set<std::array<int, 4>, ClauseKeyHash> seen;
  for (int color = 1; color <= s.colors; ++color) {
    for (int r1 = 0; r1 < s.rows; ++r1) {
      for (int r2 = r1 + 1; r2 < s.rows; ++r2) {
        for (int c1 = 0; c1 < s.cols; ++c1) {
          for (int c2 = c1 + 1; c2 < s.cols; ++c2) {
            std::array<int, 4> key = {vm.var(r1, c1, color), vm.var(r1, c2, color), vm.var(r2, c1, color),
                                      vm.var(r2, c2, color)};
            if (!dedupe) {
              f.add_clause({-key[0], -key[1], -key[2], -key[3]});
              continue;
            }
            std::sort(key.begin(), key.end());
            std::vector<int> lits;
            for (std::size_t i = 0; i < key.size(); ++i) {
              if (i == 0 || key[i] != key[i - 1]) lits.push_back(-key[i]);
            }
            for (std::size_t i = lits.size(); i < 4; ++i) key[i] = 0;
            for (std::size_t i = 0; i < lits.size(); ++i) key[i] = -lits[i];
            if (!seen.insert(key).second) continue;
            f.add_clause(std::move(lits));
          }
        }
      }
    }
  }
}

void require_single_direction(const PatternLayout& layout) {
  if (layout.direction == ShiftDirection::both) {
    throw LayoutError("this encoding needs a single shift direction (left or right)");
  }
}

int find(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

std::vector<std::pair<int, int>> shift_identifications(const GridSpec& spec, const PatternLayout& layout) {
  validate(layout, spec);
  require_single_direction(layout);
  const int n = spec.cols;
  const int z = layout.subgrid;
  const int sx = layout.subgrid_rows(spec);
  const int sy = layout.subgrid_cols(spec);
  auto cell = [n](int r, int c) { return r * n + c; };
  std::vector<std::pair<int, int>> pairs;

  for (int a = 0; a < sx; ++a) {
    for (int b = 0; b < sy; ++b) {
      for (int r = 1; r < z; ++r) {
        for (int c = 0; c < z; ++c) {
          pairs.emplace_back(cell(a * z + r, b * z + c), cell(a * z, b * z + shift_source(r, c, z, layout.direction)));
        }
      }
    }
  }

  auto same_block = [&](int r1, int c1, int r2, int c2) {
    for (int r = 0; r < z; ++r) {
      for (int c = 0; c < z; ++c) pairs.emplace_back(cell(r1 + r, c1 + c), cell(r2 + r, c2 + c));
    }
  };

  if (layout.midgrid) {
    const int w = *layout.midgrid / z;
    const int mx = spec.rows / *layout.midgrid;
    const int my = spec.cols / *layout.midgrid;
    for (int p = 0; p < mx; ++p) {
      for (int q = 0; q < my; ++q) {
        for (int a = 1; a < w; ++a) {
          for (int b = 0; b < w; ++b) {
            const int src = shift_source(a, b, w, layout.direction);
            same_block((p * w + a) * z, (q * w + b) * z, p * w * z, (q * w + src) * z);
          }
        }
      }
    }
  }

  const int row_end = layout.tiled_rows(spec) + layout.partial_rows;
  const int col_end = layout.tiled_cols(spec) + layout.partial_cols;
  for (int r = layout.tiled_rows(spec); r < row_end; ++r) {
    for (int c = 0; c < col_end; ++c) pairs.emplace_back(cell(r, c), cell(r - z, c));
  }
  for (int c = layout.tiled_cols(spec); c < col_end; ++c) {
    for (int r = 0; r < row_end; ++r) pairs.emplace_back(cell(r, c), cell(r, c - z));
  }

  const int diag = std::min(sx, sy);
  const bool main_diag = layout.diagonal == DiagonalMode::diagonal || layout.diagonal == DiagonalMode::both;
  const bool anti_diag = layout.diagonal == DiagonalMode::anti_diagonal || layout.diagonal == DiagonalMode::both;
  for (int i = 1; i < diag; ++i) {
    if (main_diag) same_block(i * z, i * z, 0, 0);
    if (anti_diag) same_block(i * z, (sy - 1 - i) * z, 0, (sy - 1) * z);
  }
  return pairs;
}

Encoding encode_base(const GridSpec& spec) {
  VarMap vm(spec);
  CnfFormula f(vm.num_vars());
  emit_exactly_one(f, vm);
  emit_rectangles(f, vm, /*dedupe=*/false);
  return {std::move(f), std::move(vm)};
}

Encoding encode_shift_merged(const GridSpec& spec, const PatternLayout& layout) {
  const auto pairs = shift_identifications(spec, layout);
  std::vector<int> parent(static_cast<std::size_t>(spec.cells()));
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : pairs) {
    const int ra = find(parent, a);
    const int rb = find(parent, b);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  // Roots are class minima, so numbering roots in cell order numbers the
  // classes by their representatives.
  std::vector<int> cls(parent.size());
  int next = 0;
  for (std::size_t c = 0; c < parent.size(); ++c) {
    const int root = find(parent, static_cast<int>(c));
    cls[c] = root == static_cast<int>(c) ? next++ : cls[static_cast<std::size_t>(root)];
  }
  VarMap vm(spec, layout, std::move(cls));
  CnfFormula f(vm.num_vars());
  emit_exactly_one(f, vm);
  emit_rectangles(f, vm, /*dedupe=*/true);
  return {std::move(f), std::move(vm)};
}

Encoding encode_shift_equal(const GridSpec& spec, const PatternLayout& layout) {
  const auto pairs = shift_identifications(spec, layout);
  Encoding enc = encode_base(spec);
  enc.vars = VarMap(spec, layout, identity_classes(spec));
  const int k = spec.colors;
  for (auto [a, b] : pairs) {
    if (a == b) continue;
    for (int c = 1; c <= k; ++c) {
      const int x = a * k + c;
      const int y = b * k + c;
      enc.formula.add_clause({-x, y});
      enc.formula.add_clause({x, -y});
    }
  }
  return enc;
}

Encoding encode_shift_selector(const GridSpec& spec, const PatternLayout& layout) {
  validate(layout, spec);
  if (layout.direction != ShiftDirection::both) {
    throw LayoutError("selector encoding needs direction 'both'");
  }
  Encoding enc = encode_base(spec);
  enc.vars = VarMap(spec, layout, identity_classes(spec));
  VarMap& vm = enc.vars;
  CnfFormula& f = enc.formula;
  const int z = layout.subgrid;
  for (int a = 0; a < layout.subgrid_rows(spec); ++a) {
    for (int b = 0; b < layout.subgrid_cols(spec); ++b) {
      const int left_sel = vm.new_aux();
      const int right_sel = vm.new_aux();
      f.reserve_vars(vm.num_vars());
      vm.selectors.emplace_back(left_sel, right_sel);
      const int top = a * z;
      const int lft = b * z;
      for (int p = 1; p < z; ++p) {
        for (int q = 0; q < z; ++q) {
          const int t1 = shift_source(p, q, z, ShiftDirection::left);
          const int t2 = shift_source(p, q, z, ShiftDirection::right);
          for (int l = 1; l <= spec.colors; ++l) {
            const int x = vm.var(top + p, lft + q, l);
            const int xl = vm.var(top, lft + t1, l);
            const int xr = vm.var(top, lft + t2, l);
            f.add_clause({-x, xl, left_sel});
            f.add_clause({-xl, x, left_sel});
            f.add_clause({-x, xr, right_sel});
            f.add_clause({-xr, x, right_sel});
          }
        }
      }
      f.add_clause({left_sel, right_sel});
      f.add_clause({-left_sel, -right_sel});
    }
  }
  return enc;
}

Encoding encode(const GridSpec& spec, const std::optional<PatternLayout>& layout, ShiftEncoding kind) {
  if (!layout) return encode_base(spec);
  if (layout->direction == ShiftDirection::both) return encode_shift_selector(spec, *layout);
  switch (kind) {
    case ShiftEncoding::merged: return encode_shift_merged(spec, *layout);
    case ShiftEncoding::equal: return encode_shift_equal(spec, *layout);
    case ShiftEncoding::selector:
      throw LayoutError("selector encoding needs direction 'both'");
  }
  return encode_shift_merged(spec, *layout);
}

namespace {

// Sinz sequential counter for sum(lits) <= bound.
void at_most(CnfFormula& f, VarMap& vm, const std::vector<int>& lits, int bound) {
  const int n = static_cast<int>(lits.size());
  if (bound >= n) return;
  if (bound <= 0) {
    for (int l : lits) f.add_clause({-l});
    return;
  }
  if (bound == n - 1) {
    std::vector<int> clause;
    for (int l : lits) clause.push_back(-l);
    f.add_clause(std::move(clause));
    return;
  }
  // s[i][j]: at least j+1 of lits[0..i] are true (i < n-1, j < bound).
  std::vector<std::vector<int>> s(static_cast<std::size_t>(n - 1), std::vector<int>(static_cast<std::size_t>(bound)));
  for (auto& row : s) {
    for (auto& v : row) v = vm.new_aux();
  }
  f.reserve_vars(vm.num_vars());
  auto at = [&](int i, int j) { return s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  auto x = [&](int i) { return lits[static_cast<std::size_t>(i)]; };

  f.add_clause({-x(0), at(0, 0)});
  for (int j = 1; j < bound; ++j) f.add_clause({-at(0, j)});
  for (int i = 1; i < n - 1; ++i) {
    f.add_clause({-x(i), at(i, 0)});
    f.add_clause({-at(i - 1, 0), at(i, 0)});
    for (int j = 1; j < bound; ++j) {
      f.add_clause({-x(i), -at(i - 1, j - 1), at(i, j)});
      f.add_clause({-at(i - 1, j), at(i, j)});
    }
    f.add_clause({-x(i), -at(i - 1, bound - 1)});
  }
  f.add_clause({-x(n - 1), -at(n - 2, bound - 1)});
}

void at_least(CnfFormula& f, VarMap& vm, const std::vector<int>& lits, int bound) {
  const int n = static_cast<int>(lits.size());
  if (bound <= 0) return;
  if (bound == 1) {
    f.add_clause(lits);
    return;
  }
  std::vector<int> neg;
  for (int l : lits) neg.push_back(-l);
  at_most(f, vm, neg, n - bound);
}

}  // namespace

void add_distribution_constraints(Encoding& enc, const DistributionSet& d) {
  VarMap& vm = enc.vars;
  if (!vm.layout() || vm.layout()->direction == ShiftDirection::both) {
    throw LayoutError("distribution constraints need a merged single-direction shift encoding");
  }
  const PatternLayout& layout = *vm.layout();
  const GridSpec& spec = vm.spec();
  const int z = layout.subgrid;
  if (d.z() != z || d.k() != spec.colors || d.x() != layout.subgrid_rows(spec) ||
      d.y() != layout.subgrid_cols(spec)) {
    throw DimensionError("distribution shape does not match the encoding's subgrid tiling");
  }
  for (int v : d.values()) {
    if (v < 0 || v > z) throw DimensionError("distribution entry " + std::to_string(v) + " outside 0.." + std::to_string(z));
  }
  // Midgrid and diagonal merging can make two subgrids share first-row classes.
  std::map<std::pair<std::vector<int>, int>, bool> done;
  for (int i = 0; i < d.x(); ++i) {
    for (int j = 0; j < d.y(); ++j) {
      for (int color = 1; color <= spec.colors; ++color) {
        std::vector<int> lits;
        for (int col = 0; col < z; ++col) lits.push_back(vm.var(i * z, j * z + col, color));
        const int want = d.at(color, i, j);
        auto key = std::make_pair(lits, want);
        std::sort(key.first.begin(), key.first.end());
        if (!done.emplace(std::move(key), true).second) continue;
        at_most(enc.formula, vm, lits, want);
        at_least(enc.formula, vm, lits, want);
      }
    }
  }
}

std::vector<int> blocking_clause(const VarMap& vm, const Coloring& c) {
  if (c.spec() != vm.spec()) throw DimensionError("coloring does not match the variable map");
  std::vector<int> clause;
  clause.reserve(static_cast<std::size_t>(vm.num_classes()));
  std::vector<int> class_color(static_cast<std::size_t>(vm.num_classes()), 0);
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) {
      int& seen = class_color[static_cast<std::size_t>(vm.class_of(r, col))];
      if (seen == 0) seen = c.at(r, col);
      else if (seen != c.at(r, col)) throw DecodeError("coloring splits a merged variable class");
    }
  }
  for (int cls = 0; cls < vm.num_classes(); ++cls) {
    clause.push_back(-vm.class_var(cls, class_color[static_cast<std::size_t>(cls)]));
  }
  return clause;
}

void add_blocking_clause(CnfFormula& f, const VarMap& vm, const Coloring& c) {
  f.add_clause(blocking_clause(vm, c));
}

std::vector<int> coloring_literals(const VarMap& vm, const Coloring& c) {
  auto clause = blocking_clause(vm, c);
  for (int& l : clause) l = -l;
  return clause;
}

Coloring decode_model(const Model& model, const VarMap& vm) {
  const GridSpec& s = vm.spec();
  std::vector<int> cls_color(static_cast<std::size_t>(vm.num_classes()), 0);
  for (int cls = 0; cls < vm.num_classes(); ++cls) {
    int chosen = 0;
    for (int c = 1; c <= s.colors; ++c) {
      if (!model.value(vm.class_var(cls, c))) continue;
      if (chosen != 0) {
        auto [r, col] = vm.representative(cls);
        throw DecodeError("cell (" + std::to_string(r + 1) + "," + std::to_string(col + 1) + ") has several colors");
      }
      chosen = c;
    }
    if (chosen == 0) {
      auto [r, col] = vm.representative(cls);
      throw DecodeError("cell (" + std::to_string(r + 1) + "," + std::to_string(col + 1) + ") has no color");
    }
    cls_color[static_cast<std::size_t>(cls)] = chosen;
  }
  std::vector<int> cells(static_cast<std::size_t>(s.cells()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = cls_color[static_cast<std::size_t>(vm.cell_classes()[i])];
  }
  return Coloring(s, std::move(cells));
}

std::vector<ShiftDirection> selector_directions(const Model& model, const VarMap& vm) {
  std::vector<ShiftDirection> out;
  out.reserve(vm.selectors.size());
  for (auto [l, r] : vm.selectors) {
    (void)r;
    out.push_back(model.value(l) ? ShiftDirection::right : ShiftDirection::left);
  }
  return out;
}

std::string write_map(const VarMap& vm) {
  const GridSpec& s = vm.spec();
  std::ostringstream os;
  os << "c gridshift-map " << s.rows << ' ' << s.cols << ' ' << s.colors << '\n';
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) {
      for (int color = 1; color <= s.colors; ++color) {
        os << vm.var(r, c, color) << ' ' << r + 1 << ' ' << c + 1 << ' ' << color << '\n';
      }
    }
  }
  return os.str();
}

VarMap parse_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<GridSpec> spec;
  std::vector<int> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == 'c') {
      std::string c, tag;
      int m = 0, n = 0, k = 0;
      if (ls >> c >> tag && tag == "gridshift-map") {
        if (!(ls >> m >> n >> k)) throw FormatError("malformed map header");
        try {
          spec = GridSpec(m, n, k);
        } catch (const DimensionError& e) {
          throw FormatError(e.what());
        }
        table.assign(static_cast<std::size_t>(m * n * k), 0);
      }
      continue;
    }
    if (!spec) throw FormatError("map file is missing its 'c gridshift-map m n k' header");
    int var = 0, r = 0, col = 0, color = 0;
    if (!(ls >> var >> r >> col >> color) || r < 1 || r > spec->rows || col < 1 || col > spec->cols ||
        color < 1 || color > spec->colors || var < 1) {
      throw FormatError("malformed map line '" + line + "'");
    }
    table[static_cast<std::size_t>(((r - 1) * spec->cols + col - 1) * spec->colors + color - 1)] = var;
  }
  if (!spec) throw FormatError("empty map file");
  const int k = spec->colors;
  std::map<int, int> class_of_var;
  std::vector<int> cls(static_cast<std::size_t>(spec->cells()));
  for (int cell = 0; cell < spec->cells(); ++cell) {
    const int v1 = table[static_cast<std::size_t>(cell * k)];
    if (v1 == 0) throw FormatError("map file does not cover every cell");
    auto [it, fresh] = class_of_var.emplace(v1, static_cast<int>(class_of_var.size()));
    cls[static_cast<std::size_t>(cell)] = it->second;
    for (int color = 1; color <= k; ++color) {
      if (table[static_cast<std::size_t>(cell * k + color - 1)] != it->second * k + color) {
        throw FormatError("map file does not follow the class numbering scheme");
      }
    }
    (void)fresh;
  }
  return VarMap(*spec, std::nullopt, std::move(cls));
}

}  // namespace gridshift
