#include "gridshift/symmetry.hpp"

#include <algorithm>
#include <numeric>

namespace gridshift {

namespace {

std::pair<int, int> image_cell(const IsoElement& g, int r, int c) {
  const int rr = g.transpose ? c : r;
  const int cc = g.transpose ? r : c;
  return {g.row_perm[static_cast<std::size_t>(rr)], g.col_perm[static_cast<std::size_t>(cc)]};
}

std::vector<int> swap_perm(int size, int a, int b, int width) {
  std::vector<int> p(static_cast<std::size_t>(size));
  std::iota(p.begin(), p.end(), 0);
  for (int t = 0; t < width; ++t) std::swap(p[static_cast<std::size_t>(a + t)], p[static_cast<std::size_t>(b + t)]);
  return p;
}

// Maps block-relative row r to (width - r) mod width, fixing the first row.
std::vector<int> reflect_perm(int size, int start, int width) {
  std::vector<int> p(static_cast<std::size_t>(size));
  std::iota(p.begin(), p.end(), 0);
  for (int t = 0; t < width; ++t) p[static_cast<std::size_t>(start + t)] = start + (width - t) % width;
  return p;
}

std::vector<int> rotate_perm(int size, int start, int width) {
  std::vector<int> p(static_cast<std::size_t>(size));
  std::iota(p.begin(), p.end(), 0);
  for (int t = 0; t < width; ++t) p[static_cast<std::size_t>(start + t)] = start + (t + 1) % width;
  return p;
}

// Row-side generators: adjacent block swaps inside the tiled band, adjacent
// swaps among the untiled rows, and a one-step rotation inside each block.
std::vector<std::vector<int>> line_generators(int size, int z, int blocks) {
  std::vector<std::vector<int>> out;
  for (int b = 0; b + 1 < blocks; ++b) out.push_back(swap_perm(size, b * z, (b + 1) * z, z));
  for (int r = blocks * z; r + 1 < size; ++r) out.push_back(swap_perm(size, r, r + 1, 1));
  if (z > 1) {
    for (int b = 0; b < blocks; ++b) out.push_back(rotate_perm(size, b * z, z));
  }
  if (z > 2) {
    for (int b = 0; b < blocks; ++b) out.push_back(reflect_perm(size, b * z, z));
  }
  return out;
}

std::vector<IsoElement> candidates(const Encoding& enc) {
  const GridSpec& spec = enc.vars.spec();
  std::vector<IsoElement> out;
  const IsoElement id = IsoElement::identity(spec);

  for (int c = 0; c + 1 < spec.colors; ++c) {
    IsoElement g = id;
    std::swap(g.color_perm[static_cast<std::size_t>(c)], g.color_perm[static_cast<std::size_t>(c + 1)]);
    out.push_back(std::move(g));
  }

  const auto& layout = enc.vars.layout();
  const int z = layout ? layout->subgrid : 1;
  const int xr = layout ? layout->subgrid_rows(spec) : spec.rows;
  const int yc = layout ? layout->subgrid_cols(spec) : spec.cols;
  for (auto& p : line_generators(spec.rows, z, xr)) {
    IsoElement g = id;
    g.row_perm = std::move(p);
    out.push_back(std::move(g));
  }
  for (auto& p : line_generators(spec.cols, z, yc)) {
    IsoElement g = id;
    g.col_perm = std::move(p);
    out.push_back(std::move(g));
  }
  if (spec.square()) {
    IsoElement g = id;
    g.transpose = true;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<int> sorted(std::vector<int> c) {
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

std::optional<VarPermutation> lift(const Encoding& enc, const IsoElement& g) {
  const VarMap& vm = enc.vars;
  const GridSpec& spec = vm.spec();
  const int k = spec.colors;
  std::vector<int> class_image(static_cast<std::size_t>(vm.num_classes()), -1);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const auto [ir, ic] = image_cell(g, r, c);
      int& slot = class_image[static_cast<std::size_t>(vm.class_of(r, c))];
      const int target = vm.class_of(ir, ic);
      if (slot == -1) slot = target;
      else if (slot != target) return std::nullopt;
    }
  }

  VarPermutation perm(static_cast<std::size_t>(enc.formula.num_vars()) + 1);
  std::iota(perm.begin(), perm.end(), 0);
  for (int cls = 0; cls < vm.num_classes(); ++cls) {
    for (int color = 1; color <= k; ++color) {
      const int out_color = g.color_perm[static_cast<std::size_t>(color - 1)];
      perm[static_cast<std::size_t>(vm.class_var(cls, color))] = vm.class_var(class_image[static_cast<std::size_t>(cls)], out_color);
    }
  }

  if (!vm.selectors.empty()) {
    const auto& layout = *vm.layout();
    const int z = layout.subgrid;
    const int yc = layout.subgrid_cols(spec);
    for (std::size_t s = 0; s < vm.selectors.size(); ++s) {
      const int si = static_cast<int>(s) / yc;
      const int sj = static_cast<int>(s) % yc;
      const auto [ir, ic] = image_cell(g, si * z, sj * z);
      const int bi = ir / z;
      const int bj = ic / z;
      if (bi >= layout.subgrid_rows(spec) || bj >= yc) return std::nullopt;
      // A left subgrid is constant along r + c; if the images of the
      // relative cells (0,1) and (1,0) leave such a line, g turns left
      // shifts into right shifts and the selector pair swaps.
      const auto [ar, ac] = image_cell(g, si * z, sj * z + 1);
      const auto [br, bc] = image_cell(g, si * z + 1, sj * z);
      const bool flips = ((ar + ac - br - bc) % z + z) % z != 0;
      const auto& to = vm.selectors[static_cast<std::size_t>(bi * yc + bj)];
      perm[static_cast<std::size_t>(vm.selectors[s].first)] = flips ? to.second : to.first;
      perm[static_cast<std::size_t>(vm.selectors[s].second)] = flips ? to.first : to.second;
    }
  }

  std::vector<char> hit(perm.size(), 0);
  for (std::size_t v = 1; v < perm.size(); ++v) {
    if (hit[static_cast<std::size_t>(perm[v])]++) return std::nullopt;
  }
  return perm;
}

bool is_automorphism(const CnfFormula& f, const VarPermutation& perm) {
  if (perm.size() != static_cast<std::size_t>(f.num_vars()) + 1) return false;
  std::vector<std::vector<int>> base;
  base.reserve(f.num_clauses());
  for (const auto& c : f.clauses()) base.push_back(sorted(c));
  std::sort(base.begin(), base.end());
  std::vector<int> mapped;
  for (const auto& c : base) {
    mapped.clear();
    for (int l : c) {
      const int v = perm[static_cast<std::size_t>(std::abs(l))];
      mapped.push_back(l > 0 ? v : -v);
    }
    std::sort(mapped.begin(), mapped.end());
    if (!std::binary_search(base.begin(), base.end(), mapped)) return false;
  }
  return true;
}

std::vector<VarPermutation> structural_symmetries(const Encoding& enc) {
  std::vector<VarPermutation> out;
  for (const auto& g : candidates(enc)) {
    auto perm = lift(enc, g);
    if (!perm) continue;
    bool identity = true;
    for (std::size_t v = 0; v < perm->size() && identity; ++v) identity = (*perm)[v] == static_cast<int>(v);
    if (identity || !is_automorphism(enc.formula, *perm)) continue;
    out.push_back(std::move(*perm));
  }
  return out;
}

// Chain encoding: e_i means "cell variables agree on every compared
// position before i". With e_0 = true:
//   e_{i-1} -> (x_i -> y_i)
//   e_{i-1} & x_i -> e_i,  e_{i-1} & -y_i -> e_i
// where y_i = x_{perm(i)}. e_i only ever needs to be true when forced, so
// the constraint is exactly X <=lex perm(X).
void add_lex_leader(Encoding& enc, const VarPermutation& perm) {
  const int limit = enc.vars.num_cell_vars();
  std::vector<std::pair<int, int>> pos;
  std::vector<char> done(perm.size(), 0);
  for (int v = 1; v <= limit; ++v) {
    const int w = perm[static_cast<std::size_t>(v)];
    if (w == v || done[static_cast<std::size_t>(v)]) continue;
    pos.emplace_back(v, w);
    // (v, w) followed later by (w, v) for an involution compares the same
    // pair twice; the second comparison is implied by the first.
    if (perm[static_cast<std::size_t>(w)] == v) done[static_cast<std::size_t>(w)] = 1;
  }
  int prev = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const auto [x, y] = pos[i];
    auto guard = [&](std::vector<int> lits) {
      if (prev != 0) lits.push_back(-prev);
      enc.formula.add_clause(std::move(lits));
    };
    guard({-x, y});
    if (i + 1 == pos.size()) break;
    const int e = enc.vars.new_aux();
    enc.formula.reserve_vars(enc.vars.num_vars());
    guard({-x, e});
    guard({y, e});
    prev = e;
  }
}

int add_symmetry_breaking(Encoding& enc) {
  const auto gens = structural_symmetries(enc);
  for (const auto& p : gens) add_lex_leader(enc, p);
  return static_cast<int>(gens.size());
}

}  // namespace gridshift
