#include "gridshift/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "gridshift/error.hpp"

namespace gridshift {

void CnfFormula::add_clause(std::vector<int> lits) {
  if (lits.empty()) throw Error("empty clause");
  std::vector<int> out;
  out.reserve(lits.size());
  for (int l : lits) {
    if (l == 0 || std::abs(l) > num_vars_) {
      throw Error("literal " + std::to_string(l) + " outside 1.." + std::to_string(num_vars_));
    }
    if (std::find(out.begin(), out.end(), -l) != out.end()) throw Error("tautological clause");
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  clauses_.push_back(std::move(out));
}

void Model::set(int var, bool v) {
  if (var <= 0) throw Error("model variable must be positive");
  if (static_cast<std::size_t>(var) >= values_.size()) values_.resize(static_cast<std::size_t>(var) + 1, false);
  values_[static_cast<std::size_t>(var)] = v;
}

bool satisfies(const CnfFormula& f, const Model& m) { return count_unsatisfied(f, m) == 0; }

std::size_t count_unsatisfied(const CnfFormula& f, const Model& m) {
  std::size_t bad = 0;
  for (const auto& clause : f.clauses()) {
    if (std::none_of(clause.begin(), clause.end(), [&](int l) { return m.satisfies(l); })) ++bad;
  }
  return bad;
}

std::string write_dimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + " " + std::to_string(f.num_clauses()) + "\n";
  for (const auto& clause : f.clauses()) {
    for (int l : clause) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw FormatError("expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  std::optional<CnfFormula> f;
  long long expected = 0;
  std::vector<int> pending;
  for (auto line : split_lines(text)) {
    auto toks = tokens(line);
    if (toks.empty() || toks[0].starts_with('c') || toks[0] == "%") continue;
    if (toks[0] == "p") {
      if (f) throw FormatError("duplicate DIMACS header");
      if (toks.size() != 4 || toks[1] != "cnf") throw FormatError("malformed DIMACS header '" + std::string(line) + "'");
      const long long vars = to_int(toks[2]);
      expected = to_int(toks[3]);
      if (vars < 0 || expected < 0 || vars > 100'000'000) throw FormatError("malformed DIMACS header counts");
      f.emplace(static_cast<int>(vars));
      continue;
    }
    if (!f) throw FormatError("clause before DIMACS header");
    for (auto tok : toks) {
      const long long lit = to_int(tok);
      if (lit == 0) {
        if (pending.empty()) throw FormatError("empty clause in DIMACS input");
        f->add_clause(std::move(pending));
        pending.clear();
        continue;
      }
      if (std::llabs(lit) > f->num_vars()) {
        throw FormatError("literal " + std::string(tok) + " exceeds declared variable count");
      }
      pending.push_back(static_cast<int>(lit));
    }
  }
  if (!f) throw FormatError("missing DIMACS header");
  if (!pending.empty()) throw FormatError("last clause is not terminated by 0");
  if (static_cast<long long>(f->num_clauses()) != expected) {
    throw FormatError("header declares " + std::to_string(expected) + " clauses, found " +
                      std::to_string(f->num_clauses()));
  }
  return *f;
}

namespace {

void read_v_line(std::string_view line, Model& m, bool& terminated) {
  auto toks = tokens(line);
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const long long lit = to_int(toks[i]);
    if (lit == 0) {
      terminated = true;
      return;
    }
    if (std::llabs(lit) > 100'000'000) throw FormatError("model literal out of range");
    m.set(static_cast<int>(std::llabs(lit)), lit > 0);
  }
}

}  // namespace

Model read_dimacs_model(std::string_view text) {
  Model m;
  bool terminated = false;
  for (auto line : split_lines(text)) {
    if (line.starts_with("v ") || line == "v") read_v_line(line, m, terminated);
  }
  if (!terminated) throw FormatError("model is missing its terminating 0");
  return m;
}

std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::sat: return "sat";
    case SolverStatus::unsat: return "unsat";
    case SolverStatus::unknown: return "unknown";
  }
  return "?";
}

SolverOutput parse_solver_output(std::string_view text) {
  SolverOutput out;
  bool saw_v = false;
  for (auto line : split_lines(text)) {
    if (line.starts_with("s ")) {
      auto status = tokens(line);
      if (status.size() >= 2 && status[1] == "SATISFIABLE") out.status = SolverStatus::sat;
      else if (status.size() >= 2 && status[1] == "UNSATISFIABLE") out.status = SolverStatus::unsat;
      else out.status = SolverStatus::unknown;
    } else if (line.starts_with("v ") || line == "v") {
      saw_v = true;
    }
  }
  if (out.status == SolverStatus::sat) {
    if (!saw_v) throw FormatError("solver reported SATISFIABLE without a model");
    out.model = read_dimacs_model(text);
  }
  return out;
}

}  // namespace gridshift
