#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridshift {

// Clause database with DIMACS-style literals (nonzero ints, sign is
// polarity). Clauses added through add_clause are normalized: repeated
// literals collapse, empty and tautological clauses are rejected.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}

  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] std::size_t num_clauses() const { return clauses_.size(); }
  [[nodiscard]] const std::vector<std::vector<int>>& clauses() const { return clauses_; }

  // Grows the variable range; never shrinks it.
  void reserve_vars(int n) {
    if (n > num_vars_) num_vars_ = n;
  }
  int new_var() { return ++num_vars_; }

  // Throws gridshift::Error on an empty, tautological or out-of-range clause.
  void add_clause(std::vector<int> lits);
  void add_clause(std::initializer_list<int> lits) { add_clause(std::vector<int>(lits)); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_vars_ = 0;
  std::vector<std::vector<int>> clauses_;
};

// Truth assignment indexed by variable (index 0 unused).
class Model {
 public:
  Model() = default;
  explicit Model(int num_vars) : values_(static_cast<std::size_t>(num_vars) + 1, false) {}

  [[nodiscard]] int num_vars() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
  [[nodiscard]] bool value(int var) const {
    return var > 0 && static_cast<std::size_t>(var) < values_.size() && values_[static_cast<std::size_t>(var)];
  }
  [[nodiscard]] bool satisfies(int lit) const { return lit > 0 ? value(lit) : !value(-lit); }
  void set(int var, bool v);

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::vector<bool> values_;
};

// Evaluates every clause; independent of any solver state.
bool satisfies(const CnfFormula& f, const Model& m);
std::size_t count_unsatisfied(const CnfFormula& f, const Model& m);

std::string write_dimacs(const CnfFormula& f);
// Accepts 'c' comment lines and a single "p cnf V C" header. Throws
// FormatError on a malformed header, literal out of range, or clause-count
// mismatch.
CnfFormula parse_dimacs(std::string_view text);

// Reads solver "v ..." lines (terminated by 0). Variables never mentioned
// are false.
Model read_dimacs_model(std::string_view text);

enum class SolverStatus { sat, unsat, unknown };
std::string_view to_string(SolverStatus s);

struct SolverOutput {
  SolverStatus status = SolverStatus::unknown;
  std::optional<Model> model;
};

// Parses full competition-format solver output ("s SATISFIABLE" plus "v" lines).
SolverOutput parse_solver_output(std::string_view text);

}  // namespace gridshift
