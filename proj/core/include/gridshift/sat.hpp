#pragma once

// Embedded solvers: a MiniSat-style CDCL engine, a WalkSAT/SKC local
// search, a portfolio that races them, and blocking-clause enumeration.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridshift/cnf.hpp"
#include "gridshift/encoder.hpp"
#include "gridshift/grid.hpp"

namespace gridshift::sat {

enum class Mode { cdcl, local_search, portfolio };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

struct SolveConfig {
  std::uint64_t seed = 0;
  std::chrono::duration<double> timeout = std::chrono::seconds(60);
  Mode mode = Mode::cdcl;

  // Local search.
  std::uint64_t max_flips = 2'000'000'000;
  double noise = 0.5;

  // CDCL: restart after restart_first conflicts, then grow geometrically.
  double restart_first = 100;
  double restart_factor = 1.5;
  std::size_t reduce_threshold = 10'000;

  // Portfolio: this many local-search workers plus one CDCL worker.
  int portfolio_workers = 3;

  // Optional external cancellation; polled alongside the timeout.
  const std::atomic<bool>* stop = nullptr;
};

// Throws gridshift::Error if timeout <= 0 or max_flips == 0.
void validate(const SolveConfig& cfg);

struct SolveStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t flips = 0;
  double seconds = 0;
  friend bool operator==(const SolveStats&, const SolveStats&) = default;
};

struct SolveOutcome {
  SolverStatus status = SolverStatus::unknown;
  std::optional<Model> model;
  // Local search only: fewest unsatisfied clauses seen, and its history
  // (one entry per improvement).
  std::optional<std::size_t> best_unsat;
  std::vector<std::size_t> best_unsat_trace;
  SolveStats stats;
  std::string engine;
};

// Status sat implies a model that satisfies `f`; unsat only ever comes from
// the complete engine; timeouts give unknown.
SolveOutcome solve(const CnfFormula& f, const SolveConfig& cfg);

// Complete solver with two-watched-literal propagation, first-UIP learning
// with recursive minimization, VSIDS branching, phase saving (initial
// polarity false) and geometric restarts. Clauses may be added between
// solve() calls.
class CdclSolver {
 public:
  explicit CdclSolver(const CnfFormula& f, const SolveConfig& cfg = {});
  ~CdclSolver();
  CdclSolver(CdclSolver&&) noexcept;
  CdclSolver& operator=(CdclSolver&&) noexcept;

  // Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::span<const int> lits);
  SolverStatus solve();
  // Valid after solve() returned sat.
  [[nodiscard]] Model model() const;
  [[nodiscard]] const SolveStats& stats() const;
  [[nodiscard]] int num_vars() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// WalkSAT/SKC: pick a random falsified clause, flip a zero-break variable if
// any, otherwise a random one with probability `noise`, otherwise a
// minimum-break one. Restarts from a fresh random assignment every
// max_flips/10 flips. Never reports unsat.
SolveOutcome local_search(const CnfFormula& f, const SolveConfig& cfg);

struct Enumeration {
  std::vector<Coloring> colorings;
  // True iff the loop ended on unsat, i.e. `colorings` is every coloring
  // the encoding admits.
  bool complete = false;
  bool timed_out = false;
  SolveStats stats;
};

// Solve, decode, block, repeat; stops at unsat, `limit`, or timeout.
// `on_found` sees each coloring as soon as it is decoded.
Enumeration enumerate(const Encoding& enc, std::size_t limit, const SolveConfig& cfg = {},
                      const std::function<void(const Coloring&)>& on_found = {});

// Runs `command <dimacs-file>` and parses "s ..." / "v ..." lines.
SolveOutcome solve_external(const CnfFormula& f, const std::string& command);

}  // namespace gridshift::sat
