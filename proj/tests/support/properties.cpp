#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "gridshift/cnf.hpp"
#include "gridshift/encoder.hpp"
#include "gridshift/isomorphism.hpp"
#include "gridshift/sat.hpp"
#include "oracles.hpp"

namespace properties {

namespace gs = gridshift;

namespace {

std::string spec_name(const gs::GridSpec& s) {
  return "G(" + std::to_string(s.rows) + "," + std::to_string(s.cols) + "," + std::to_string(s.colors) + ")";
}

// One-hot assignment of the base encoding's variables for `c`.
std::vector<bool> one_hot(const gs::VarMap& vm, const gs::Coloring& c) {
  std::vector<bool> a(static_cast<std::size_t>(vm.num_vars()) + 1, false);
  for (int r = 0; r < c.rows(); ++r) {
    for (int col = 0; col < c.cols(); ++col) a[static_cast<std::size_t>(vm.var(r, col, c.at(r, col)))] = true;
  }
  return a;
}

Verdict fail(std::string msg) { return {false, std::move(msg)}; }

}  // namespace

Verdict base_encoding_matches_exhaustive() {
  std::size_t specs = 0, colorings = 0, enumerated = 0;
  for (int k = 1; k <= 3; ++k) {
    for (int m = 1; m <= 12; ++m) {
      for (int n = 1; m * n <= 12; ++n) {
        const gs::GridSpec spec(m, n, k);
        const auto enc = gs::encode_base(spec);
        if (enc.formula.num_clauses() != oracle::base_clause_count(spec)) return fail(spec_name(spec) + ": clause count");
        std::set<gs::Coloring> free;
        for (const auto& c : oracle::all_colorings(spec)) {
          const bool ok = !oracle::has_rectangle(c);
          if (oracle::evaluate(enc.formula, one_hot(enc.vars, c)) != ok) return fail(spec_name(spec) + ": encoding disagrees on a coloring");
          if (ok) free.insert(c);
          ++colorings;
        }
        // Non-one-hot assignments: an empty cell and a doubly colored cell.
        {
          auto a = one_hot(enc.vars, gs::Coloring::constant(spec, 1));
          a[static_cast<std::size_t>(enc.vars.var(0, 0, 1))] = false;
          if (oracle::evaluate(enc.formula, a)) return fail(spec_name(spec) + ": uncolored cell accepted");
          if (k > 1) {
            a[static_cast<std::size_t>(enc.vars.var(0, 0, 1))] = true;
            a[static_cast<std::size_t>(enc.vars.var(0, 0, 2))] = true;
            if (oracle::evaluate(enc.formula, a)) return fail(spec_name(spec) + ": doubly colored cell accepted");
          }
        }
        if (free.size() <= 3000) {
          const auto en = gs::sat::enumerate(enc, SIZE_MAX);
          const std::set<gs::Coloring> got(en.colorings.begin(), en.colorings.end());
          if (!en.complete || got.size() != en.colorings.size() || got != free) {
            return fail(spec_name(spec) + ": enumeration found " + std::to_string(en.colorings.size()) + ", oracle " +
                        std::to_string(free.size()));
          }
          ++enumerated;
        }
        ++specs;
      }
    }
  }
  std::ostringstream os;
  os << specs << " specs, " << colorings << " colorings evaluated, " << enumerated << " specs enumerated";
  return {true, os.str()};
}

Verdict canonical_form_matches_orbits() {
  const gs::GridSpec spec(3, 3, 2);
  std::set<gs::Coloring> classes;
  std::size_t n = 0;
  for (const auto& c : oracle::all_colorings(spec)) {
    const auto cf = gs::canonical_form(c);
    if (cf.form != oracle::orbit_minimum(c)) return fail("canonical form differs from the orbit minimum");
    if (gs::apply_isomorphism(c, cf.element) != cf.form) return fail("returned element does not map to the form");
    classes.insert(cf.form);
    ++n;
  }
  // Every orbit member must share the form.
  for (const auto& rep : classes) {
    for (const auto& img : oracle::orbit(rep)) {
      if (gs::canonical_form(img).form != rep) return fail("orbit member has a different canonical form");
    }
  }
  return {true, std::to_string(n) + " colorings, " + std::to_string(classes.size()) + " orbits"};
}

Verdict cdcl_matches_truth_table(int formulas, int max_vars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int sat = 0, unsat = 0;
  for (int i = 0; i < formulas; ++i) {
    const auto f = oracle::random_formula(rng, max_vars, 4);
    const auto expect = oracle::exhaustive_sat(f);
    if (f.num_vars() <= 14 && oracle::truth_table_sat(f).has_value() != expect.has_value()) {
      return fail("the two oracles disagree on formula " + std::to_string(i));
    }
    gs::sat::CdclSolver s(f);
    const auto st = s.solve();
    if (st == gs::SolverStatus::unknown) return fail("cdcl timed out on formula " + std::to_string(i));
    if ((st == gs::SolverStatus::sat) != expect.has_value()) {
      return fail("formula " + std::to_string(i) + ": cdcl says " + std::string(gs::to_string(st)));
    }
    if (st == gs::SolverStatus::sat) {
      if (!gs::satisfies(f, s.model())) return fail("formula " + std::to_string(i) + ": model does not satisfy");
      ++sat;
    } else {
      ++unsat;
    }
  }
  return {true, std::to_string(formulas) + " formulas (" + std::to_string(sat) + " sat, " + std::to_string(unsat) + " unsat)"};
}

Verdict rectangle_checker_matches(int colorings, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(1, 9), colors(1, 5);
  int with = 0;
  for (int i = 0; i < colorings; ++i) {
    const gs::GridSpec spec(side(rng), side(rng), colors(rng));
    const auto c = oracle::random_coloring(rng, spec);
    const bool expect = oracle::has_rectangle(c);
    const auto w = gs::find_monochromatic_rectangle(c);
    if (w.has_value() != expect) return fail("disagreement on a " + spec_name(spec) + " coloring");
    if (w) {
      const int v = w->color;
      if (w->row1 >= w->row2 || w->col1 >= w->col2 || c.at(w->row1, w->col1) != v || c.at(w->row1, w->col2) != v ||
          c.at(w->row2, w->col1) != v || c.at(w->row2, w->col2) != v) {
        return fail("witness is not a monochromatic rectangle");
      }
      ++with;
    }
  }
  return {true, std::to_string(colorings) + " colorings (" + std::to_string(with) + " with rectangles)"};
}

Verdict clause_counts_match(int specs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(2, 12), colors(1, 5);
  for (int i = 0; i < specs; ++i) {
    const gs::GridSpec spec(side(rng), side(rng), colors(rng));
    const std::size_t base = oracle::base_clause_count(spec);
    if (gs::encode_base(spec).formula.num_clauses() != base) return fail(spec_name(spec) + ": base clause count");

    const int z = std::uniform_int_distribution<int>(2, std::min(spec.rows, spec.cols))(rng);
    const auto k = static_cast<std::size_t>(spec.colors);
    const std::size_t pairs = oracle::tiled_shift_pairs(spec, z);
    gs::PatternLayout l;
    l.subgrid = z;
    l.direction = std::bernoulli_distribution(0.5)(rng) ? gs::ShiftDirection::left : gs::ShiftDirection::right;
    if (gs::shift_identifications(spec, l).size() != pairs) return fail(spec_name(spec) + ": identification count");
    if (gs::encode_shift_equal(spec, l).formula.num_clauses() != base + 2 * k * pairs) {
      return fail(spec_name(spec) + " z=" + std::to_string(z) + ": equal-encoding clause count");
    }
    const auto merged = gs::encode_shift_merged(spec, l);
    if (static_cast<std::size_t>(merged.vars.num_classes()) != static_cast<std::size_t>(spec.cells()) - pairs) {
      return fail(spec_name(spec) + ": merged class count");
    }
    l.direction = gs::ShiftDirection::both;
    const auto blocks = static_cast<std::size_t>((spec.rows / z) * (spec.cols / z));
    const auto sel = gs::encode_shift_selector(spec, l);
    if (sel.formula.num_clauses() != base + blocks * (4 * k * static_cast<std::size_t>(z * (z - 1)) + 2)) {
      return fail(spec_name(spec) + " z=" + std::to_string(z) + ": selector clause count");
    }
    if (sel.formula.num_vars() != spec.cells() * spec.colors + static_cast<int>(2 * blocks)) {
      return fail(spec_name(spec) + ": selector variable count");
    }
  }
  return {true, std::to_string(specs) + " random specs"};
}

Verdict dimacs_roundtrip(int formulas, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < formulas; ++i) {
    const auto f = oracle::random_formula(rng, 40, 6);
    if (gs::parse_dimacs(gs::write_dimacs(f)) != f) return fail("random formula " + std::to_string(i));
  }
  std::uniform_int_distribution<int> side(2, 8), colors(1, 4);
  for (int i = 0; i < 20; ++i) {
    const gs::GridSpec spec(side(rng), side(rng), colors(rng));
    gs::PatternLayout l;
    l.subgrid = std::uniform_int_distribution<int>(2, std::min(spec.rows, spec.cols))(rng);
    const auto enc = gs::encode_shift_merged(spec, l);
    if (gs::parse_dimacs(gs::write_dimacs(enc.formula)) != enc.formula) return fail(spec_name(spec) + ": encoding");
    const auto vm = gs::parse_map(gs::write_map(enc.vars));
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        for (int color = 1; color <= spec.colors; ++color) {
          if (vm.var(r, c, color) != enc.vars.var(r, c, color)) return fail(spec_name(spec) + ": map");
        }
      }
    }
  }
  return {true, std::to_string(formulas) + " random formulas, 20 shift encodings with maps"};
}

Verdict blocking_clauses_sound(int random_cases, std::uint64_t seed) {
  struct Case {
    gs::GridSpec spec;
    int z;  // 0: no layout
    gs::ShiftDirection dir;
  };
  std::vector<Case> cases = {
      {gs::GridSpec(3, 3, 2), 0, gs::ShiftDirection::left},  {gs::GridSpec(2, 5, 2), 0, gs::ShiftDirection::left},
      {gs::GridSpec(3, 4, 2), 0, gs::ShiftDirection::left},  {gs::GridSpec(4, 4, 2), 2, gs::ShiftDirection::left},
      {gs::GridSpec(4, 4, 2), 2, gs::ShiftDirection::right}, {gs::GridSpec(3, 6, 2), 3, gs::ShiftDirection::left},
      {gs::GridSpec(4, 4, 3), 4, gs::ShiftDirection::right}, {gs::GridSpec(5, 4, 2), 2, gs::ShiftDirection::left},
  };
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  for (int t = 0; t < random_cases; ++t) {
    const int m = pick(2, 4), n = pick(2, 4);
    const int z = rng() % 2 ? 0 : pick(2, std::min(m, n));
    cases.push_back({gs::GridSpec(m, n, 2), z, rng() % 2 ? gs::ShiftDirection::left : gs::ShiftDirection::right});
  }
  std::size_t total = 0;
  for (const auto& cs : cases) {
    std::optional<gs::PatternLayout> l;
    if (cs.z) {
      l.emplace();
      l->subgrid = cs.z;
      l->direction = cs.dir;
    }
    const auto enc = gs::encode(cs.spec, l);
    const auto en = gs::sat::enumerate(enc, SIZE_MAX);
    const std::set<gs::Coloring> got(en.colorings.begin(), en.colorings.end());
    std::set<gs::Coloring> want;
    oracle::for_each_rectangle_free(cs.spec, [&](const gs::Coloring& c) {
      if (!cs.z || oracle::is_shifted(c, cs.z, cs.dir)) want.insert(c);
    });
    if (!en.complete || got.size() != en.colorings.size() || got != want) {
      return fail(spec_name(cs.spec) + ": enumerated " + std::to_string(en.colorings.size()) + ", oracle " + std::to_string(want.size()));
    }
    // Each blocking clause is falsified by its own coloring only.
    for (const auto& c : en.colorings) {
      const auto block = gs::blocking_clause(enc.vars, c);
      for (const auto& d : en.colorings) {
        gs::Model m(enc.vars.num_vars());
        for (int lit : gs::coloring_literals(enc.vars, d)) {
          if (lit > 0) m.set(lit, true);
        }
        const bool sat = std::any_of(block.begin(), block.end(), [&](int lit) { return m.satisfies(lit); });
        if (sat == (c == d)) return fail(spec_name(cs.spec) + ": blocking clause misbehaves");
      }
    }
    total += en.colorings.size();
  }
  return {true, std::to_string(cases.size()) + " instances (" + std::to_string(random_cases) + " random), " + std::to_string(total) +
                    " colorings"};
}

}  // namespace properties
