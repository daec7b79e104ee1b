#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "gridshift/encoder.hpp"
#include "gridshift/error.hpp"
#include "gridshift/sat.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace gridshift;
using namespace std::chrono_literals;

namespace {

// n+1 pigeons into n holes.
CnfFormula pigeonhole(int n) {
  auto v = [n](int p, int h) { return p * n + h + 1; };
  CnfFormula f((n + 1) * n);
  for (int p = 0; p <= n; ++p) {
    std::vector<int> cl;
    for (int h = 0; h < n; ++h) cl.push_back(v(p, h));
    f.add_clause(cl);
  }
  for (int h = 0; h < n; ++h) {
    for (int p = 0; p <= n; ++p) {
      for (int q = p + 1; q <= n; ++q) f.add_clause({-v(p, h), -v(q, h)});
    }
  }
  return f;
}

}  // namespace

TEST(Cdcl, PigeonholeIsUnsat) {
  for (int n = 1; n <= 7; ++n) {
    sat::CdclSolver s(pigeonhole(n));
    EXPECT_EQ(s.solve(), SolverStatus::unsat) << n;
  }
}

TEST(Cdcl, MatchesExhaustiveSearch) {
  const auto v = properties::cdcl_matches_truth_table(200, 30, 11);
  EXPECT_TRUE(v.ok) << v.detail;
}

TEST(Cdcl, IncrementalClauses) {
  CnfFormula f(3);
  f.add_clause({1, 2, 3});
  sat::CdclSolver s(f);
  ASSERT_EQ(s.solve(), SolverStatus::sat);
  const std::vector<int> a{-1}, b{-2}, c{-3};
  s.add_clause(a);
  s.add_clause(b);
  ASSERT_EQ(s.solve(), SolverStatus::sat);
  EXPECT_TRUE(s.model().value(3));
  s.add_clause(c);
  EXPECT_EQ(s.solve(), SolverStatus::unsat);
}

TEST(Cdcl, InitialPolarityIsFalse) {
  CnfFormula f(4);
  f.add_clause({1, 2, 3, 4});
  sat::CdclSolver s(f);
  ASSERT_EQ(s.solve(), SolverStatus::sat);
  int trues = 0;
  for (int v = 1; v <= 4; ++v) trues += s.model().value(v);
  EXPECT_EQ(trues, 1);
}

TEST(Cdcl, TimeoutGivesUnknown) {
  sat::SolveConfig cfg;
  cfg.timeout = 0.05s;
  const auto r = sat::solve(pigeonhole(11), cfg);
  EXPECT_EQ(r.status, SolverStatus::unknown);
  EXPECT_FALSE(r.model.has_value());
}

TEST(LocalSearch, SolvesEasyInstancesAndNeverClaimsUnsat) {
  PatternLayout l;
  l.subgrid = 4;
  const auto enc = encode(GridSpec(10, 10, 3), l);
  sat::SolveConfig cfg;
  cfg.mode = sat::Mode::local_search;
  cfg.timeout = 20s;
  const auto r = sat::solve(enc.formula, cfg);
  ASSERT_EQ(r.status, SolverStatus::sat);
  EXPECT_TRUE(satisfies(enc.formula, *r.model));
  EXPECT_FALSE(find_monochromatic_rectangle(decode_model(*r.model, enc.vars)).has_value());

  cfg.timeout = 0.2s;
  const auto u = sat::local_search(pigeonhole(6), cfg);
  EXPECT_EQ(u.status, SolverStatus::unknown);
  ASSERT_TRUE(u.best_unsat.has_value());
  EXPECT_GE(*u.best_unsat, 1U);
  EXPECT_FALSE(u.best_unsat_trace.empty());
}

TEST(LocalSearch, SameSeedSameRun) {
  const auto enc = encode_base(GridSpec(7, 7, 2));
  sat::SolveConfig cfg;
  cfg.mode = sat::Mode::local_search;
  cfg.seed = 42;
  cfg.max_flips = 20000;
  const auto a = sat::local_search(enc.formula, cfg);
  const auto b = sat::local_search(enc.formula, cfg);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.best_unsat_trace, b.best_unsat_trace);
}

TEST(Portfolio, ReturnsVerifiedModelsAndCompleteUnsat) {
  sat::SolveConfig cfg;
  cfg.mode = sat::Mode::portfolio;
  cfg.portfolio_workers = 2;
  const auto u = sat::solve(pigeonhole(6), cfg);
  EXPECT_EQ(u.status, SolverStatus::unsat);
  const auto enc = encode_base(GridSpec(6, 6, 3));
  const auto s = sat::solve(enc.formula, cfg);
  ASSERT_EQ(s.status, SolverStatus::sat);
  EXPECT_TRUE(satisfies(enc.formula, *s.model));
  EXPECT_EQ(s.engine.rfind("portfolio/", 0), 0U);
}

TEST(SolveConfig, Validation) {
  sat::SolveConfig cfg;
  cfg.timeout = 0s;
  EXPECT_THROW(sat::validate(cfg), Error);
  cfg.timeout = 1s;
  cfg.max_flips = 0;
  EXPECT_THROW(sat::validate(cfg), Error);
  EXPECT_EQ(sat::parse_mode("walksat"), sat::Mode::local_search);
  EXPECT_THROW(sat::parse_mode("magic"), Error);
}

TEST(Enumerate, CountsAndLimit) {
  const auto enc = encode_base(GridSpec(4, 4, 2));
  const auto all = sat::enumerate(enc, SIZE_MAX);
  EXPECT_TRUE(all.complete);
  EXPECT_EQ(all.colorings.size(), 840U);
  std::size_t streamed = 0;
  const auto some = sat::enumerate(enc, 10, {}, [&](const Coloring&) { ++streamed; });
  EXPECT_FALSE(some.complete);
  EXPECT_EQ(some.colorings.size(), 10U);
  EXPECT_EQ(streamed, 10U);
}

TEST(External, RunsACommandSpeakingDimacs) {
  namespace fs = std::filesystem;
  const fs::path script = fs::temp_directory_path() / "gridshift-fake-solver.sh";
  {
    std::ofstream os(script);
    os << "#!/bin/sh\necho 's SATISFIABLE'\necho 'v 1 -2 0'\n";
  }
  fs::permissions(script, fs::perms::owner_all);
  CnfFormula f(2);
  f.add_clause({1});
  f.add_clause({-2});
  const auto r = sat::solve_external(f, script.string());
  EXPECT_EQ(r.status, SolverStatus::sat);
  ASSERT_TRUE(r.model.has_value());
  EXPECT_TRUE(r.model->value(1));
  CnfFormula g(2);
  g.add_clause({2});
  // The fake solver's model falsifies this formula; the result is rejected.
  EXPECT_THROW(sat::solve_external(g, script.string()), Error);
  fs::remove(script);
}
