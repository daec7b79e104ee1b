#include "gridshift/distribution.hpp"

#include <algorithm>
#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

std::string_view to_string(Check c) {
  switch (c) {
    case Check::sum: return "sum";
    case Check::self_gap_columns: return "self-gap (columns)";
    case Check::self_gap_rows: return "self-gap (rows)";
    case Check::scalar_columns: return "scalar product (column pairs)";
    case Check::scalar_rows: return "scalar product (row pairs)";
  }
  return "?";
}

bool ConstraintReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

ConstraintReport check_necessary(const DistributionSet& d) {
  const int x = d.x(), y = d.y(), z = d.z(), k = d.k();
  ConstraintReport r;
  for (Check c : {Check::sum, Check::self_gap_columns, Check::self_gap_rows, Check::scalar_columns, Check::scalar_rows}) {
    r.checks.push_back({c, {}});
  }
  auto fail = [&](Violation v) { r.checks[static_cast<std::size_t>(v.check)].violations.push_back(v); };
  const long gap = self_gap_bound(z);

  for (int i = 0; i < x; ++i) {
    for (int j = 0; j < y; ++j) {
      long s = 0;
      for (int c = 1; c <= k; ++c) s += d.at(c, i, j);
      if (s != z) fail({Check::sum, 0, i, j, s, z});
    }
  }
  for (int c = 1; c <= k; ++c) {
    for (int j = 0; j < y; ++j) {
      long s = 0;
      for (int i = 0; i < x; ++i) s += static_cast<long>(d.at(c, i, j)) * d.at(c, i, j) - d.at(c, i, j);
      if (s > gap) fail({Check::self_gap_columns, c, j, -1, s, gap});
    }
    for (int i = 0; i < x; ++i) {
      long s = 0;
      for (int j = 0; j < y; ++j) s += static_cast<long>(d.at(c, i, j)) * d.at(c, i, j) - d.at(c, i, j);
      if (s > gap) fail({Check::self_gap_rows, c, i, -1, s, gap});
    }
    for (int j1 = 0; j1 < y; ++j1) {
      for (int j2 = j1 + 1; j2 < y; ++j2) {
        long s = 0;
        for (int i = 0; i < x; ++i) s += static_cast<long>(d.at(c, i, j1)) * d.at(c, i, j2);
        if (s > z) fail({Check::scalar_columns, c, j1, j2, s, z});
      }
    }
    for (int i1 = 0; i1 < x; ++i1) {
      for (int i2 = i1 + 1; i2 < x; ++i2) {
        long s = 0;
        for (int j = 0; j < y; ++j) s += static_cast<long>(d.at(c, i1, j)) * d.at(c, i2, j);
        if (s > z) fail({Check::scalar_rows, c, i1, i2, s, z});
      }
    }
  }
  return r;
}

ConstraintReport check_necessary(const DistributionSet& d, const PatternLayout& layout) {
  if (layout.direction == ShiftDirection::both) {
    throw LayoutError("distribution conditions are only known for single-direction shifts");
  }
  if (layout.subgrid != d.z()) {
    throw LayoutError("layout subgrid size " + std::to_string(layout.subgrid) + " differs from distribution z " + std::to_string(d.z()));
  }
  return check_necessary(d);
}

std::string format_report(const ConstraintReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << to_string(c.check) << ": " << (c.passed() ? "pass" : "FAIL") << '\n';
    for (const auto& v : c.violations) {
      os << "  ";
      switch (v.check) {
        case Check::sum:
          os << "subgrid (" << v.first + 1 << "," << v.second + 1 << ")";
          break;
        case Check::self_gap_columns:
        case Check::self_gap_rows:
          os << "color " << v.color << (v.check == Check::self_gap_columns ? " column " : " row ") << v.first + 1;
          break;
        case Check::scalar_columns:
        case Check::scalar_rows:
          os << "color " << v.color << (v.check == Check::scalar_columns ? " columns " : " rows ") << v.first + 1 << "," << v.second + 1;
          break;
      }
      os << ": " << v.value << (v.check == Check::sum ? " != " : " > ") << v.bound << '\n';
    }
  }
  os << (r.passed() ? "all checks pass" : "some checks fail") << '\n';
  return os.str();
}

namespace {

std::vector<std::vector<int>> compositions(int z, int k, int vmax) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == k - 1) {
      if (left <= vmax) {
        cur[static_cast<std::size_t>(pos)] = left;
        out.push_back(cur);
      }
      return;
    }
    for (int v = 0; v <= std::min(left, vmax); ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, z);
  return out;
}

class DistributionSearch {
 public:
  DistributionSearch(int x, int y, int z, int k, const DistributionSearchOptions& opts)
      : x_(x), y_(y), z_(z), k_(k), opts_(opts), gap_(self_gap_bound(z)), d_(x, y, z, k) {
    int vmax = 0;
    while (static_cast<long>(vmax + 1) * vmax <= gap_ && vmax < z) ++vmax;
    parts_ = compositions(z, k, vmax);
    const auto ku = static_cast<std::size_t>(k);
    col_gap_.assign(ku * static_cast<std::size_t>(y), 0);
    row_gap_.assign(ku * static_cast<std::size_t>(x), 0);
    col_dot_.assign(ku * static_cast<std::size_t>(y * y), 0);
    row_dot_.assign(ku * static_cast<std::size_t>(x * x), 0);
    decided_.assign(ku, 0);
  }

  DistributionSearchResult run() {
    if (parts_.empty()) {
      result_.complete = true;
      return std::move(result_);
    }
    try {
      const bool exhausted = place(0);
      result_.complete = exhausted;
    } catch (const BudgetExceeded&) {
      result_.budget_exceeded = true;
      result_.complete = false;
    }
    return std::move(result_);
  }

 private:
  long& col_gap(int c, int j) { return col_gap_[static_cast<std::size_t>((c - 1) * y_ + j)]; }
  long& row_gap(int c, int i) { return row_gap_[static_cast<std::size_t>((c - 1) * x_ + i)]; }
  long& col_dot(int c, int j1, int j2) { return col_dot_[static_cast<std::size_t>(((c - 1) * y_ + j1) * y_ + j2)]; }
  long& row_dot(int c, int i1, int i2) { return row_dot_[static_cast<std::size_t>(((c - 1) * x_ + i1) * x_ + i2)]; }

  // Returns false when the search stopped early because the limit was hit.
  bool place(int cell) {
    if (cell == x_ * y_) {
      result_.solutions.push_back(d_);
      return result_.solutions.size() < opts_.limit;
    }
    const int i = cell / y_;
    const int j = cell % y_;
    for (const auto& p : parts_) {
      if (++result_.nodes > opts_.node_budget) throw BudgetExceeded("distribution search budget exhausted");
      // Color order: an undecided adjacent pair (c, c+1) needs v_c >= v_{c+1}.
      std::vector<char> saved;
      if (opts_.break_color_symmetry) {
        bool ok = true;
        for (int c = 0; c + 1 < k_ && ok; ++c) {
          if (!decided_[static_cast<std::size_t>(c)] && p[static_cast<std::size_t>(c)] < p[static_cast<std::size_t>(c + 1)]) ok = false;
        }
        if (!ok) continue;
      }
      if (!apply(i, j, p, +1)) {
        apply(i, j, p, -1);
        continue;
      }
      if (opts_.break_color_symmetry) {
        saved = decided_;
        for (int c = 0; c + 1 < k_; ++c) {
          if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(c + 1)]) decided_[static_cast<std::size_t>(c)] = 1;
        }
      }
      const bool go_on = place(cell + 1);
      if (opts_.break_color_symmetry) decided_ = std::move(saved);
      apply(i, j, p, -1);
      if (!go_on) return false;
    }
    return true;
  }

  // Adds (sign = +1) or removes (-1) subgrid (i, j)'s contribution; on
  // adding, reports whether every partial condition still holds.
  bool apply(int i, int j, const std::vector<int>& p, int sign) {
    bool ok = true;
    for (int c = 1; c <= k_; ++c) {
      const long v = p[static_cast<std::size_t>(c - 1)];
      d_.set(c, i, j, sign > 0 ? static_cast<int>(v) : 0);
      const long g = sign * (v * v - v);
      ok &= (col_gap(c, j) += g) <= gap_;
      ok &= (row_gap(c, i) += g) <= gap_;
      if (v == 0) continue;
      for (int j2 = 0; j2 < j; ++j2) ok &= (col_dot(c, j2, j) += sign * v * d_.at(c, i, j2)) <= z_;
      for (int i2 = 0; i2 < i; ++i2) ok &= (row_dot(c, i2, i) += sign * v * d_.at(c, i2, j)) <= z_;
    }
    return ok;
  }

  int x_, y_, z_, k_;
  DistributionSearchOptions opts_;
  long gap_;
  DistributionSet d_;
  std::vector<std::vector<int>> parts_;
  std::vector<long> col_gap_, row_gap_, col_dot_, row_dot_;
  std::vector<char> decided_;
  DistributionSearchResult result_;
};

std::string name(int c, int i, int j) {
  return "v_" + std::to_string(c) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string sum_of(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms.front();
  std::string s = "(+";
  for (const auto& t : terms) s += " " + t;
  return s + ")";
}

}  // namespace

DistributionSearchResult search_distributions(int x, int y, int z, int k, const DistributionSearchOptions& opts) {
  if (x < 1 || y < 1 || z < 1 || k < 1) throw DimensionError("search_distributions needs x, y, z, k >= 1");
  return DistributionSearch(x, y, z, k, opts).run();
}

std::string export_smtlib(int x, int y, int z, int k) {
  if (x < 1 || y < 1 || z < 1 || k < 1) throw DimensionError("export_smtlib needs x, y, z, k >= 1");
  std::ostringstream os;
  const long gap = self_gap_bound(z);
  os << "; color distribution feasibility: " << x << "x" << y << " subgrids, z=" << z << ", k=" << k << '\n';
  os << "(set-logic QF_NIA)\n";
  for (int c = 1; c <= k; ++c) {
    for (int i = 0; i < x; ++i) {
      for (int j = 0; j < y; ++j) os << "(declare-const " << name(c, i, j) << " Int)\n";
    }
  }
  for (int c = 1; c <= k; ++c) {
    for (int i = 0; i < x; ++i) {
      for (int j = 0; j < y; ++j) os << "(assert (and (>= " << name(c, i, j) << " 0) (<= " << name(c, i, j) << ' ' << z << ")))\n";
    }
  }
  for (int i = 0; i < x; ++i) {
    for (int j = 0; j < y; ++j) {
      std::vector<std::string> t;
      for (int c = 1; c <= k; ++c) t.push_back(name(c, i, j));
      os << "(assert (= " << sum_of(t) << ' ' << z << "))\n";
    }
  }
  auto self_term = [](const std::string& v) { return "(- (* " + v + ' ' + v + ") " + v + ")"; };
  for (int c = 1; c <= k; ++c) {
    for (int j = 0; j < y; ++j) {
      std::vector<std::string> t;
      for (int i = 0; i < x; ++i) t.push_back(self_term(name(c, i, j)));
      os << "(assert (<= " << sum_of(t) << ' ' << gap << "))\n";
    }
    for (int i = 0; i < x; ++i) {
      std::vector<std::string> t;
      for (int j = 0; j < y; ++j) t.push_back(self_term(name(c, i, j)));
      os << "(assert (<= " << sum_of(t) << ' ' << gap << "))\n";
    }
    for (int j1 = 0; j1 < y; ++j1) {
      for (int j2 = j1 + 1; j2 < y; ++j2) {
        std::vector<std::string> t;
        for (int i = 0; i < x; ++i) t.push_back("(* " + name(c, i, j1) + ' ' + name(c, i, j2) + ")");
        os << "(assert (<= " << sum_of(t) << ' ' << z << "))\n";
      }
    }
    for (int i1 = 0; i1 < x; ++i1) {
      for (int i2 = i1 + 1; i2 < x; ++i2) {
        std::vector<std::string> t;
        for (int j = 0; j < y; ++j) t.push_back("(* " + name(c, i1, j) + ' ' + name(c, i2, j) + ")");
        os << "(assert (<= " << sum_of(t) << ' ' << z << "))\n";
      }
    }
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

bool subgrid_bound_holds(int n, int k) {
  const long kk = static_cast<long>(k) * k;
  return n <= kk || n >= kk + k;
}

std::string to_text(const DistributionSet& d) {
  std::ostringstream os;
  for (int c = 1; c <= d.k(); ++c) {
    if (c > 1) os << '\n';
    for (int i = 0; i < d.x(); ++i) {
      for (int j = 0; j < d.y(); ++j) os << (j ? " " : "") << d.at(c, i, j);
      os << '\n';
    }
  }
  return os.str();
}

DistributionSet parse_distribution(std::string_view text, std::optional<int> z) {
  std::vector<std::vector<std::vector<int>>> blocks;
  std::vector<std::vector<int>> cur;
  std::istringstream is{std::string(text)};
  std::string line;
  auto flush = [&] {
    if (!cur.empty()) blocks.push_back(std::move(cur));
    cur.clear();
  };
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<int> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw FormatError("bad distribution entry '" + tok + "'");
        if (v < 0) throw FormatError("negative distribution entry");
        row.push_back(v);
      } catch (const std::logic_error&) {
        throw FormatError("bad distribution entry '" + tok + "'");
      }
    }
    if (row.empty()) flush();
    else cur.push_back(std::move(row));
  }
  flush();
  if (blocks.empty()) throw FormatError("empty distribution");
  const std::size_t x = blocks.front().size();
  const std::size_t y = blocks.front().front().size();
  for (const auto& b : blocks) {
    if (b.size() != x) throw FormatError("distribution blocks have different row counts");
    for (const auto& r : b) {
      if (r.size() != y) throw FormatError("distribution rows have different lengths");
    }
  }
  int zz = 0;
  if (z) {
    zz = *z;
  } else {
    for (const auto& b : blocks) zz += b[0][0];
  }
  if (zz < 1) throw FormatError("cannot infer a positive subgrid size from the distribution");
  DistributionSet d(static_cast<int>(x), static_cast<int>(y), zz, static_cast<int>(blocks.size()));
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    for (std::size_t i = 0; i < x; ++i) {
      for (std::size_t j = 0; j < y; ++j) d.set(static_cast<int>(c) + 1, static_cast<int>(i), static_cast<int>(j), blocks[c][i][j]);
    }
  }
  return d;
}

}  // namespace gridshift
