#include "gridshift/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

namespace {

struct Grid {
  int rows;
  int cols;
  int colors;
  std::vector<int> cells;
  [[nodiscard]] int at(int r, int c) const { return cells[static_cast<std::size_t>(r * cols + c)]; }
};

struct State {
  std::vector<int> order;               // input rows in output order
  std::vector<std::vector<int>> cells;  // ordered partition of input columns
  std::vector<int> label;               // color - 1 -> label, 0 if unlabeled
  int next = 1;
  std::vector<char> used;

  [[nodiscard]] std::vector<int> key() const {
    std::vector<int> k;
    for (const auto& cell : cells) {
      k.insert(k.end(), cell.begin(), cell.end());
      k.push_back(-1);
    }
    k.insert(k.end(), label.begin(), label.end());
    for (char u : used) k.push_back(u);
    return k;
  }
};

struct Group {
  int color;
  std::vector<int> cols;
};

// Appends every child of `s` obtained by placing input row `r` next to
// `children`, and writes the (branch-independent) row string to `row`.
void expand(const Grid& g, const State& s, int r, std::vector<int>& row, std::vector<State>& children) {
  struct Partial {
    std::vector<int> label;
    int next;
    std::vector<std::vector<int>> cells;
  };
  std::vector<Partial> partials{{s.label, s.next, {}}};
  row.clear();

  for (const auto& cell : s.cells) {
    std::map<int, std::vector<int>> by_color;
    for (int col : cell) by_color[g.at(r, col)].push_back(col);

    std::vector<Partial> grown;
    bool first = true;
    for (auto& p : partials) {
      std::vector<std::pair<int, Group>> labeled;
      std::vector<Group> fresh;
      for (const auto& [color, cols] : by_color) {
        const int l = p.label[static_cast<std::size_t>(color - 1)];
        if (l) labeled.push_back({l, {color, cols}});
        else fresh.push_back({color, cols});
      }
      std::sort(labeled.begin(), labeled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      // Larger unlabeled groups take the smaller new labels; equal sizes
      // are ambiguous and every order is kept.
      std::stable_sort(fresh.begin(), fresh.end(), [](const Group& a, const Group& b) { return a.cols.size() > b.cols.size(); });

      if (first) {
        for (const auto& [l, grp] : labeled) row.insert(row.end(), grp.cols.size(), l);
        int nl = p.next;
        for (const auto& grp : fresh) row.insert(row.end(), grp.cols.size(), nl++);
        first = false;
      }

      std::vector<std::size_t> idx(fresh.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      do {
        bool sorted_by_size = true;
        for (std::size_t i = 1; i < idx.size() && sorted_by_size; ++i) {
          sorted_by_size = fresh[idx[i - 1]].cols.size() >= fresh[idx[i]].cols.size();
        }
        if (!sorted_by_size) continue;
        Partial q = p;
        for (const auto& [l, grp] : labeled) q.cells.push_back(grp.cols);
        for (std::size_t i : idx) {
          q.label[static_cast<std::size_t>(fresh[i].color - 1)] = q.next++;
          q.cells.push_back(fresh[i].cols);
        }
        grown.push_back(std::move(q));
      } while (std::next_permutation(idx.begin(), idx.end()));
    }
    partials = std::move(grown);
  }

  for (auto& p : partials) {
    State child;
    child.order = s.order;
    child.order.push_back(r);
    child.cells = std::move(p.cells);
    child.label = std::move(p.label);
    child.next = p.next;
    child.used = s.used;
    child.used[static_cast<std::size_t>(r)] = 1;
    children.push_back(std::move(child));
  }
}

struct Search {
  std::vector<int> form;
  State best;
};

Search search(const Grid& g, std::size_t budget, std::size_t& nodes) {
  // Rows with identical content are interchangeable; only the first unused
  // one of each kind is tried.
  std::vector<int> row_kind(static_cast<std::size_t>(g.rows));
  {
    std::map<std::vector<int>, int> kinds;
    for (int r = 0; r < g.rows; ++r) {
      std::vector<int> content(g.cells.begin() + r * g.cols, g.cells.begin() + (r + 1) * g.cols);
      row_kind[static_cast<std::size_t>(r)] = kinds.emplace(std::move(content), r).first->second;
    }
  }

  State init;
  std::vector<int> all(static_cast<std::size_t>(g.cols));
  for (int c = 0; c < g.cols; ++c) all[static_cast<std::size_t>(c)] = c;
  init.cells.push_back(std::move(all));
  init.label.assign(static_cast<std::size_t>(g.colors), 0);
  init.used.assign(static_cast<std::size_t>(g.rows), 0);

  std::vector<State> level{std::move(init)};
  std::vector<int> form;
  std::vector<int> row;
  std::vector<int> best_row;
  for (int depth = 0; depth < g.rows; ++depth) {
    std::vector<State> next;
    best_row.clear();
    for (const auto& s : level) {
      std::set<int> tried;
      for (int r = 0; r < g.rows; ++r) {
        if (s.used[static_cast<std::size_t>(r)] || !tried.insert(row_kind[static_cast<std::size_t>(r)]).second) continue;
        if (++nodes > budget) throw BudgetExceeded("canonical form search exceeded " + std::to_string(budget) + " nodes");
        std::vector<State> children;
        expand(g, s, r, row, children);
        if (best_row.empty() || row < best_row) {
          best_row = row;
          next.clear();
        } else if (row > best_row) {
          continue;
        }
        for (auto& ch : children) next.push_back(std::move(ch));
      }
    }
    std::set<std::vector<int>> seen;
    level.clear();
    for (auto& s : next) {
      if (seen.insert(s.key()).second) level.push_back(std::move(s));
    }
    form.insert(form.end(), best_row.begin(), best_row.end());
  }
  return {std::move(form), std::move(level.front())};
}

IsoElement element_of(const State& s, int rows, int cols, bool transpose) {
  IsoElement e;
  e.transpose = transpose;
  e.row_perm.assign(static_cast<std::size_t>(rows), 0);
  for (std::size_t i = 0; i < s.order.size(); ++i) e.row_perm[static_cast<std::size_t>(s.order[i])] = static_cast<int>(i);
  e.col_perm.assign(static_cast<std::size_t>(cols), 0);
  int pos = 0;
  for (const auto& cell : s.cells) {
    for (int col : cell) e.col_perm[static_cast<std::size_t>(col)] = pos++;
  }
  e.color_perm = s.label;
  int next = s.next;
  for (auto& l : e.color_perm) {
    if (l == 0) l = next++;
  }
  return e;
}

}  // namespace

CanonicalForm canonical_form(const Coloring& c, std::size_t node_budget) {
  const Grid direct{c.rows(), c.cols(), c.colors(), {c.cells().begin(), c.cells().end()}};
  std::size_t nodes = 0;
  Search best = search(direct, node_budget, nodes);
  bool transposed = false;
  if (c.spec().square()) {
    Grid t{c.cols(), c.rows(), c.colors(), std::vector<int>(direct.cells.size())};
    for (int r = 0; r < c.rows(); ++r) {
      for (int col = 0; col < c.cols(); ++col) t.cells[static_cast<std::size_t>(col * t.cols + r)] = c.at(r, col);
    }
    Search alt = search(t, node_budget, nodes);
    if (alt.form < best.form) {
      best = std::move(alt);
      transposed = true;
    }
  }
  IsoElement e = transposed ? element_of(best.best, c.cols(), c.rows(), true) : element_of(best.best, c.rows(), c.cols(), false);
  return {Coloring(c.spec(), std::move(best.form)), std::move(e)};
}

bool isomorphic(const Coloring& a, const Coloring& b, std::size_t node_budget) {
  if (!(a.spec() == b.spec())) return false;
  return canonical_form(a, node_budget).form == canonical_form(b, node_budget).form;
}

Classification classify(const std::vector<Coloring>& cs, std::size_t node_budget) {
  Classification out;
  if (cs.empty()) return out;
  const GridSpec spec = cs.front().spec();
  std::map<Coloring, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!(cs[i].spec() == spec)) throw DimensionError("classify: colorings do not share one grid spec");
    groups[canonical_form(cs[i], node_budget).form].push_back(i);
  }
  for (auto& [form, members] : groups) out.classes.push_back({form, std::move(members)});
  return out;
}

std::string classification_report(const Classification& cl) {
  std::ostringstream os;
  os << "classes " << cl.classes.size() << '\n';
  for (std::size_t i = 0; i < cl.classes.size(); ++i) {
    os << "class " << i + 1 << " size " << cl.classes[i].members.size() << '\n' << to_text(cl.classes[i].canonical);
  }
  return os.str();
}

std::size_t ColoredGridGraph::num_edges() const {
  std::size_t d = 0;
  for (const auto& a : adjacency) d += a.size();
  return d / 2;
}

ColoredGridGraph grid_to_graph(const Coloring& c) {
  if (!c.spec().square()) throw DimensionError("grid_to_graph needs a square grid");
  ColoredGridGraph g;
  g.n = c.rows();
  const int n = g.n;
  g.colors.assign(c.cells().begin(), c.cells().end());
  g.adjacency.resize(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      auto& adj = g.adjacency[static_cast<std::size_t>(a * n + b)];
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          if ((x == a) != (y == b)) adj.push_back(x * n + y);
        }
      }
    }
  }
  return g;
}

}  // namespace gridshift
