#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "gridshift/error.hpp"
#include "gridshift/sat.hpp"

namespace gridshift::sat {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::cdcl: return "cdcl";
    case Mode::local_search: return "walksat";
    case Mode::portfolio: return "portfolio";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "cdcl") return Mode::cdcl;
  if (s == "walksat" || s == "local-search") return Mode::local_search;
  if (s == "portfolio") return Mode::portfolio;
  throw Error("unknown engine '" + std::string(s) + "'");
}

void validate(const SolveConfig& cfg) {
  if (!(cfg.timeout.count() > 0)) throw Error("timeout must be positive");
  if (cfg.max_flips == 0) throw Error("max_flips must be positive");
  if (cfg.portfolio_workers < 0) throw Error("portfolio_workers must be nonnegative");
}

namespace {

SolveOutcome run_cdcl(const CnfFormula& f, const SolveConfig& cfg) {
  CdclSolver solver(f, cfg);
  SolveOutcome out;
  out.engine = "cdcl";
  out.status = solver.solve();
  if (out.status == SolverStatus::sat) out.model = solver.model();
  out.stats = solver.stats();
  return out;
}

// Local-search workers get distinct seeds and a spread of noise levels; the
// CDCL worker keeps the caller's seed. First decisive answer wins and raises
// the shared stop flag.
SolveOutcome run_portfolio(const CnfFormula& f, const SolveConfig& cfg) {
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<SolveOutcome> winner;
  std::vector<SolveOutcome> losers;

  auto finish = [&](SolveOutcome r) {
    std::lock_guard lock(mu);
    if (r.status != SolverStatus::unknown && !winner) {
      winner = std::move(r);
      stop.store(true);
    } else {
      losers.push_back(std::move(r));
    }
  };

  // Workers poll their own stop flag; a relay thread would add latency, so
  // the external flag is folded in by the watcher below.
  std::vector<std::jthread> workers;
  const int ls_workers = cfg.portfolio_workers;
  for (int w = 0; w < ls_workers; ++w) {
    SolveConfig wc = cfg;
    wc.seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(w) + 1;
    wc.noise = ls_workers > 1 ? 0.35 + 0.3 * w / (ls_workers - 1) : cfg.noise;
    wc.stop = &stop;
    workers.emplace_back([&f, wc, &finish] { finish(local_search(f, wc)); });
  }
  {
    SolveConfig wc = cfg;
    wc.stop = &stop;
    workers.emplace_back([&f, wc, &finish] { finish(run_cdcl(f, wc)); });
  }
  std::jthread watcher;
  if (cfg.stop) {
    watcher = std::jthread([&stop, ext = cfg.stop](std::stop_token tok) {
      while (!tok.stop_requested() && !stop.load()) {
        if (ext->load()) {
          stop.store(true);
          break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    });
  }
  for (auto& t : workers) t.join();
  if (watcher.joinable()) {
    watcher.request_stop();
    watcher.join();
  }

  SolveOutcome out;
  if (winner) {
    out = std::move(*winner);
    out.engine = "portfolio/" + out.engine;
  } else {
    out.engine = "portfolio";
  }
  for (const auto& r : losers) {
    if (r.best_unsat && (!out.best_unsat || *r.best_unsat < *out.best_unsat)) out.best_unsat = r.best_unsat;
    out.stats.flips += r.stats.flips;
    out.stats.conflicts += r.stats.conflicts;
  }
  return out;
}

}  // namespace

SolveOutcome solve(const CnfFormula& f, const SolveConfig& cfg) {
  validate(cfg);
  switch (cfg.mode) {
    case Mode::cdcl: return run_cdcl(f, cfg);
    case Mode::local_search: return local_search(f, cfg);
    case Mode::portfolio: return run_portfolio(f, cfg);
  }
  return {};
}

Enumeration enumerate(const Encoding& enc, std::size_t limit, const SolveConfig& cfg,
                      const std::function<void(const Coloring&)>& on_found) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  Enumeration out;
  CdclSolver solver(enc.formula, cfg);
  while (out.colorings.size() < limit) {
    const SolverStatus st = solver.solve();
    if (st == SolverStatus::unsat) {
      out.complete = true;
      break;
    }
    if (st == SolverStatus::unknown) {
      out.timed_out = true;
      break;
    }
    Coloring c = decode_model(solver.model(), enc.vars);
    const auto block = blocking_clause(enc.vars, c);
    if (on_found) on_found(c);
    out.colorings.push_back(std::move(c));
    if (!solver.add_clause(block)) {
      out.complete = true;
      break;
    }
    if (std::chrono::steady_clock::now() - start >= cfg.timeout) {
      out.timed_out = true;
      break;
    }
  }
  out.stats = solver.stats();
  return out;
}

SolveOutcome solve_external(const CnfFormula& f, const std::string& command) {
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path path = fs::temp_directory_path() / ("gridshift-" + std::to_string(rd()) + ".cnf");
  {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << write_dimacs(f);
  }
  const auto start = std::chrono::steady_clock::now();
  const std::string cmd = command + " '" + path.string() + "'";
  std::string text;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
    ::pclose(pipe);
  } else {
    fs::remove(path);
    throw Error("cannot run external solver '" + command + "'");
  }
  fs::remove(path);
  SolverOutput parsed = parse_solver_output(text);
  SolveOutcome out;
  out.engine = "external";
  out.status = parsed.status;
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (parsed.model) {
    Model m(f.num_vars());
    for (int v = 1; v <= f.num_vars(); ++v) m.set(v, parsed.model->value(v));
    if (!satisfies(f, m)) throw Error("external solver returned a model that falsifies the formula");
    out.model = std::move(m);
  }
  return out;
}

}  // namespace gridshift::sat
