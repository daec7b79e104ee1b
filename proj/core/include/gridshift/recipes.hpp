#pragma once

// Built-in experiment book: each recipe is a list of steps with an expected
// outcome, runnable from the CLI ("repro <name>") and the acceptance suite.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gridshift/encoder.hpp"
#include "gridshift/grid.hpp"
#include "gridshift/sat.hpp"

namespace gridshift {

enum class StepKind {
  solve,               // expect sat or unsat; sat models are verified
  enumerate,           // expect an exact coloring count and class count
  check_distribution,  // expect the necessary conditions to pass or fail
  bound_formula,       // compare subgrid_bound_holds with the excluded range
  smtlib_export,       // emit a script and sanity-check its shape
  search_distribution, // bounded search for a distribution (x, y, z, k)
};

struct RecipeStep {
  std::string label;
  StepKind kind = StepKind::solve;

  GridSpec spec;
  std::optional<PatternLayout> layout;
  ShiftEncoding encoding = ShiftEncoding::merged;
  std::optional<DistributionSet> distribution;
  // Lex-leader clauses over verified grid symmetries; satisfiability is
  // preserved but solution counts are not.
  bool symmetry_breaking = false;
  sat::Mode engine = sat::Mode::cdcl;
  std::chrono::duration<double> timeout = std::chrono::seconds(60);

  std::optional<SolverStatus> expected_status;
  std::optional<std::size_t> expected_count;
  std::optional<std::size_t> expected_classes;
  bool expected_pass = true;
  // check_distribution: also raise every entry by one in turn and require
  // the sum check to fail each time.
  bool mutate_entries = false;
  // enumerate: stop after this many colorings.
  std::size_t limit = SIZE_MAX;
  // solve: append k rows of stripes below a k^2 x k^2 solution (row t,
  // block j gets color (t + j) mod k + 1) and verify the larger grid.
  bool extend_stripes = false;
  // search_distribution: node budget.
  std::size_t node_budget = 1'000'000;
  // bound_formula: range of n and k compared.
  int max_n = 0;
  int max_k = 0;
  // smtlib_export: shape of the distribution system.
  int x = 0, y = 0, z = 0, k = 0;
};

struct ExperimentRecipe {
  std::string name;
  std::string description;
  int criterion = 0;  // acceptance criterion number
  // Non-gating recipes only need the pipeline to run to completion.
  bool gating = true;
  std::vector<RecipeStep> steps;
};

const std::vector<ExperimentRecipe>& recipe_book();
// Throws Error for unknown names.
const ExperimentRecipe& find_recipe(std::string_view name);

struct RecipeRunOptions {
  std::uint64_t seed = 0;
  // Replaces every step's timeout when set.
  std::optional<std::chrono::duration<double>> timeout;
  std::ostream* log = nullptr;
};

struct StepResult {
  std::string label;
  bool matched = false;
  bool timed_out = false;
  std::string detail;
  double seconds = 0;
};

struct RecipeResult {
  std::string name;
  bool gating = true;
  std::vector<StepResult> steps;
  std::string summary;
  // Every step matched its expectation (non-gating: every step ran).
  bool passed = false;
  bool timed_out = false;
};

RecipeResult run_recipe(const ExperimentRecipe& r, const RecipeRunOptions& opts = {});

// The five matrices of the reference 25x25, 5-subgrid color distribution.
DistributionSet reference_distribution_25();

// Appends the stripe rows described above; requires a k^2 x k^2 coloring.
Coloring extend_with_stripes(const Coloring& c);

// Builds the encoding a solve step describes, including distribution
// constraints and symmetry breaking.
Encoding build_instance(const RecipeStep& step);

}  // namespace gridshift
