#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "gridshift/error.hpp"
#include "gridshift/sat.hpp"

namespace gridshift::sat {

namespace {

using Lit = std::uint32_t;
using CRef = std::uint32_t;

constexpr CRef kNoReason = 0xFFFFFFFFu;
constexpr Lit kUndefLit = 0xFFFFFFFFu;

inline Lit make_lit(int var, bool neg) { return static_cast<Lit>(var) * 2 + (neg ? 1 : 0); }
inline Lit from_dimacs(int l) { return make_lit(std::abs(l) - 1, l < 0); }
inline int var_of(Lit l) { return static_cast<int>(l >> 1); }
inline bool sign_of(Lit l) { return (l & 1) != 0; }
inline Lit neg(Lit l) { return l ^ 1; }

struct Watch {
  CRef cref;
  Lit blocker;
};

// Max-heap of variables keyed by activity; ties go to the smaller index.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}

  void grow(int n) { index_.resize(static_cast<std::size_t>(n), -1); }
  [[nodiscard]] bool empty() const { return heap_.empty(); }
  [[nodiscard]] bool contains(int v) const { return index_[static_cast<std::size_t>(v)] >= 0; }

  void insert(int v) {
    if (contains(v)) return;
    index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(static_cast<int>(heap_.size()) - 1);
  }
  void increased(int v) {
    if (contains(v)) up(index_[static_cast<std::size_t>(v)]);
  }
  int pop() {
    const int top = heap_.front();
    heap_.front() = heap_.back();
    index_[static_cast<std::size_t>(heap_.front())] = 0;
    heap_.pop_back();
    index_[static_cast<std::size_t>(top)] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  [[nodiscard]] bool before(int a, int b) const {
    const double x = act_[static_cast<std::size_t>(a)];
    const double y = act_[static_cast<std::size_t>(b)];
    return x > y || (x == y && a < b);
  }
  void place(int i, int v) {
    heap_[static_cast<std::size_t>(i)] = v;
    index_[static_cast<std::size_t>(v)] = i;
  }
  void up(int i) {
    const int v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!before(v, heap_[static_cast<std::size_t>(parent)])) break;
      place(i, heap_[static_cast<std::size_t>(parent)]);
      i = parent;
    }
    place(i, v);
  }
  void down(int i) {
    const int v = heap_[static_cast<std::size_t>(i)];
    const int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int child = 2 * i + 1;
      if (child + 1 < n && before(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)])) ++child;
      if (!before(heap_[static_cast<std::size_t>(child)], v)) break;
      place(i, heap_[static_cast<std::size_t>(child)]);
      i = child;
    }
    place(i, v);
  }

  const std::vector<double>& act_;
  std::vector<int> heap_;
  std::vector<int> index_;
};

}  // namespace

struct CdclSolver::Impl {
  // Clause arena layout: [size][flags][activity bits][lits...].
  static constexpr std::uint32_t kLearnt = 1;
  static constexpr std::uint32_t kDeleted = 2;
  static constexpr std::uint32_t kHeader = 3;

  SolveConfig cfg;
  int nvars = 0;
  bool ok = true;

  std::vector<std::uint32_t> arena;
  std::vector<CRef> originals;
  std::vector<CRef> learnts;
  std::vector<std::vector<Watch>> watches;

  std::vector<std::int8_t> value;  // per var: 1 true, -1 false, 0 unassigned
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  VarHeap heap{activity};
  double var_inc = 1.0;
  double var_decay = 0.95;
  double cla_inc = 1.0;
  double cla_decay = 0.999;
  std::vector<char> polarity;  // saved phase: 1 = negative

  std::vector<char> seen;
  std::vector<Lit> analyze_stack;
  std::vector<Lit> analyze_clear;

  std::size_t max_learnts = 10'000;
  SolveStats stats;
  std::chrono::steady_clock::time_point deadline;
  std::vector<std::int8_t> model_values;

  // --- clause access ---
  std::uint32_t size(CRef c) const { return arena[c]; }
  bool learnt(CRef c) const { return (arena[c + 1] & kLearnt) != 0; }
  Lit* lits(CRef c) { return &arena[c + kHeader]; }
  float act(CRef c) const { return std::bit_cast<float>(arena[c + 2]); }
  void set_act(CRef c, float a) { arena[c + 2] = std::bit_cast<std::uint32_t>(a); }

  CRef alloc(const std::vector<Lit>& ls, bool is_learnt) {
    const CRef c = static_cast<CRef>(arena.size());
    arena.push_back(static_cast<std::uint32_t>(ls.size()));
    arena.push_back(is_learnt ? kLearnt : 0);
    arena.push_back(std::bit_cast<std::uint32_t>(0.0f));
    arena.insert(arena.end(), ls.begin(), ls.end());
    return c;
  }

  void attach(CRef c) {
    Lit* l = lits(c);
    watches[l[0]].push_back({c, l[1]});
    watches[l[1]].push_back({c, l[0]});
  }

  // --- assignment ---
  int lit_value(Lit l) const {
    const int v = value[static_cast<std::size_t>(var_of(l))];
    return sign_of(l) ? -v : v;
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(Lit l, CRef from) {
    const int v = var_of(l);
    value[static_cast<std::size_t>(v)] = sign_of(l) ? -1 : 1;
    level[static_cast<std::size_t>(v)] = decision_level();
    reason[static_cast<std::size_t>(v)] = from;
    trail.push_back(l);
  }

  void new_vars(int n) {
    nvars = n;
    watches.resize(static_cast<std::size_t>(2 * n));
    value.resize(static_cast<std::size_t>(n), 0);
    level.resize(static_cast<std::size_t>(n), 0);
    reason.resize(static_cast<std::size_t>(n), kNoReason);
    activity.resize(static_cast<std::size_t>(n), 0.0);
    polarity.resize(static_cast<std::size_t>(n), 1);
    seen.resize(static_cast<std::size_t>(n), 0);
    heap.grow(n);
    // A tiny seeded perturbation diversifies workers without changing the
    // deterministic behavior for a given seed.
    std::mt19937_64 rng(cfg.seed);
    if (cfg.seed != 0) {
      std::uniform_real_distribution<double> d(0.0, 1e-5);
      for (auto& a : activity) a = d(rng);
    }
    for (int v = 0; v < n; ++v) heap.insert(v);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail.size(); i-- > static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(lvl)]);) {
      const int v = var_of(trail[i]);
      value[static_cast<std::size_t>(v)] = 0;
      reason[static_cast<std::size_t>(v)] = kNoReason;
      polarity[static_cast<std::size_t>(v)] = sign_of(trail[i]) ? 1 : 0;
      heap.insert(v);
    }
    trail.resize(static_cast<std::size_t>(trail_lim[static_cast<std::size_t>(lvl)]));
    trail_lim.resize(static_cast<std::size_t>(lvl));
    qhead = trail.size();
  }

  bool add_clause(std::span<const int> in) {
    if (!ok) return false;
    cancel_until(0);
    std::vector<Lit> ls;
    ls.reserve(in.size());
    for (int l : in) {
      if (l == 0 || std::abs(l) > nvars) throw Error("clause literal out of range");
      ls.push_back(from_dimacs(l));
    }
    std::sort(ls.begin(), ls.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const Lit l = ls[i];
      if (i > 0 && l == ls[i - 1]) continue;
      if (lit_value(l) > 0 || (i > 0 && l == neg(ls[i - 1]))) return true;
      if (lit_value(l) < 0) continue;
      out.push_back(l);
    }
    if (out.empty()) return ok = false;
    if (out.size() == 1) {
      enqueue(out[0], kNoReason);
      return ok = (propagate() == kNoReason);
    }
    const CRef c = alloc(out, false);
    originals.push_back(c);
    attach(c);
    return true;
  }

  CRef propagate() {
    CRef confl = kNoReason;
    while (qhead < trail.size()) {
      const Lit p = trail[qhead++];
      const Lit false_lit = neg(p);
      std::vector<Watch>& ws = watches[false_lit];
      ++stats.propagations;
      std::size_t i = 0, j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        const Watch w = ws[i];
        if (lit_value(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        Lit* c = lits(w.cref);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const Lit first = c[0];
        if (first != w.blocker && lit_value(first) > 0) {
          ws[j++] = {w.cref, first};
          continue;
        }
        const std::uint32_t sz = size(w.cref);
        bool moved = false;
        for (std::uint32_t k = 2; k < sz; ++k) {
          if (lit_value(c[k]) >= 0) {
            std::swap(c[1], c[k]);
            watches[c[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (lit_value(first) < 0) {
          confl = w.cref;
          qhead = trail.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  void bump_var(int v) {
    double& a = activity[static_cast<std::size_t>(v)];
    a += var_inc;
    if (a > 1e100) {
      for (auto& x : activity) x *= 1e-100;
      var_inc *= 1e-100;
    }
    heap.increased(v);
  }

  void bump_clause(CRef c) {
    const float a = act(c) + static_cast<float>(cla_inc);
    set_act(c, a);
    if (a > 1e20f) {
      for (CRef l : learnts) set_act(l, act(l) * 1e-20f);
      cla_inc *= 1e-20;
    }
  }

  std::uint32_t abstract_level(int v) const { return 1u << (level[static_cast<std::size_t>(v)] & 31); }

  bool lit_redundant(Lit p, std::uint32_t levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    const std::size_t top = analyze_clear.size();
    while (!analyze_stack.empty()) {
      const Lit q = analyze_stack.back();
      analyze_stack.pop_back();
      const CRef c = reason[static_cast<std::size_t>(var_of(q))];
      Lit* cl = lits(c);
      for (std::uint32_t i = 1; i < size(c); ++i) {
        const Lit l = cl[i];
        const int v = var_of(l);
        if (seen[static_cast<std::size_t>(v)] || level[static_cast<std::size_t>(v)] == 0) continue;
        if (reason[static_cast<std::size_t>(v)] != kNoReason && (abstract_level(v) & levels) != 0) {
          seen[static_cast<std::size_t>(v)] = 1;
          analyze_stack.push_back(l);
          analyze_clear.push_back(l);
        } else {
          for (std::size_t k = top; k < analyze_clear.size(); ++k) seen[static_cast<std::size_t>(var_of(analyze_clear[k]))] = 0;
          analyze_clear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(CRef confl, std::vector<Lit>& out, int& bt_level) {
    int path = 0;
    Lit p = kUndefLit;
    out.clear();
    out.push_back(kUndefLit);
    std::size_t idx = trail.size();
    do {
      if (learnt(confl)) bump_clause(confl);
      Lit* c = lits(confl);
      for (std::uint32_t j = (p == kUndefLit ? 0 : 1); j < size(confl); ++j) {
        const Lit q = c[j];
        const int v = var_of(q);
        if (seen[static_cast<std::size_t>(v)] || level[static_cast<std::size_t>(v)] == 0) continue;
        bump_var(v);
        seen[static_cast<std::size_t>(v)] = 1;
        if (level[static_cast<std::size_t>(v)] >= decision_level()) ++path;
        else out.push_back(q);
      }
      while (!seen[static_cast<std::size_t>(var_of(trail[--idx]))]) {
      }
      p = trail[idx];
      confl = reason[static_cast<std::size_t>(var_of(p))];
      seen[static_cast<std::size_t>(var_of(p))] = 0;
      --path;
    } while (path > 0);
    out[0] = neg(p);

    analyze_clear.assign(out.begin(), out.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) levels |= abstract_level(var_of(out[i]));
    std::size_t keep = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      const int v = var_of(out[i]);
      if (reason[static_cast<std::size_t>(v)] == kNoReason || !lit_redundant(out[i], levels)) out[keep++] = out[i];
    }
    out.resize(keep);

    bt_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i) {
        if (level[static_cast<std::size_t>(var_of(out[i]))] > level[static_cast<std::size_t>(var_of(out[max_i]))]) max_i = i;
      }
      std::swap(out[1], out[max_i]);
      bt_level = level[static_cast<std::size_t>(var_of(out[1]))];
    }
    for (Lit l : analyze_clear) seen[static_cast<std::size_t>(var_of(l))] = 0;
  }

  bool locked(CRef c) {
    const Lit first = lits(c)[0];
    return lit_value(first) > 0 && reason[static_cast<std::size_t>(var_of(first))] == c;
  }

  void reduce_db() {
    std::vector<CRef> sorted = learnts;
    std::stable_sort(sorted.begin(), sorted.end(), [&](CRef a, CRef b) {
      if ((size(a) > 2) != (size(b) > 2)) return size(a) > 2;
      return act(a) < act(b);
    });
    const std::size_t half = sorted.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const CRef c = sorted[i];
      if (size(c) > 2 && !locked(c)) arena[c + 1] |= kDeleted;
    }
    collect_garbage();
    max_learnts = static_cast<std::size_t>(static_cast<double>(max_learnts) * 1.1);
  }

  // Compacts the arena, remaps reasons and rebuilds all watch lists.
  void collect_garbage() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena.size());
    std::vector<CRef> remap_from, remap_to;
    auto move_list = [&](std::vector<CRef>& list) {
      std::size_t j = 0;
      for (CRef c : list) {
        if (arena[c + 1] & kDeleted) continue;
        const CRef nc = static_cast<CRef>(fresh.size());
        fresh.insert(fresh.end(), arena.begin() + c, arena.begin() + c + kHeader + size(c));
        remap_from.push_back(c);
        remap_to.push_back(nc);
        list[j++] = nc;
      }
      list.resize(j);
    };
    move_list(originals);
    move_list(learnts);
    // remap_from is increasing within each list; sort pairs for lookup.
    std::vector<std::size_t> order(remap_from.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remap_from[a] < remap_from[b]; });
    std::vector<CRef> from_sorted(order.size()), to_sorted(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      from_sorted[i] = remap_from[order[i]];
      to_sorted[i] = remap_to[order[i]];
    }
    for (Lit l : trail) {
      CRef& r = reason[static_cast<std::size_t>(var_of(l))];
      if (r == kNoReason) continue;
      auto it = std::lower_bound(from_sorted.begin(), from_sorted.end(), r);
      r = (it != from_sorted.end() && *it == r) ? to_sorted[static_cast<std::size_t>(it - from_sorted.begin())] : kNoReason;
    }
    arena.swap(fresh);
    for (auto& ws : watches) ws.clear();
    for (CRef c : originals) attach(c);
    for (CRef c : learnts) attach(c);
  }

  Lit pick_branch() {
    while (!heap.empty()) {
      const int v = heap.pop();
      if (value[static_cast<std::size_t>(v)] == 0) return make_lit(v, polarity[static_cast<std::size_t>(v)] != 0);
    }
    return kUndefLit;
  }

  bool out_of_time() const {
    if (cfg.stop && cfg.stop->load(std::memory_order_relaxed)) return true;
    return std::chrono::steady_clock::now() >= deadline;
  }

  SolverStatus search(std::uint64_t conflict_budget) {
    std::uint64_t conflicts = 0;
    std::vector<Lit> learnt_clause;
    for (;;) {
      const CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats.conflicts;
        ++conflicts;
        if (decision_level() == 0) return SolverStatus::unsat;
        int bt = 0;
        analyze(confl, learnt_clause, bt);
        cancel_until(bt);
        if (learnt_clause.size() == 1) {
          enqueue(learnt_clause[0], kNoReason);
        } else {
          const CRef c = alloc(learnt_clause, true);
          learnts.push_back(c);
          attach(c);
          bump_clause(c);
          enqueue(learnt_clause[0], c);
        }
        var_inc /= var_decay;
        cla_inc /= cla_decay;
        if ((stats.conflicts & 63) == 0 && out_of_time()) return SolverStatus::unknown;
        continue;
      }
      if (conflicts >= conflict_budget) {
        cancel_until(0);
        return SolverStatus::unknown;
      }
      if (learnts.size() >= max_learnts + trail.size()) reduce_db();
      const Lit next = pick_branch();
      if (next == kUndefLit) return SolverStatus::sat;
      ++stats.decisions;
      if ((stats.decisions & 1023) == 0 && out_of_time()) return SolverStatus::unknown;
      trail_lim.push_back(static_cast<int>(trail.size()));
      enqueue(next, kNoReason);
    }
  }

  SolverStatus solve() {
    const auto start = std::chrono::steady_clock::now();
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(cfg.timeout);
    model_values.clear();
    SolverStatus status = ok ? SolverStatus::unknown : SolverStatus::unsat;
    if (ok) {
      cancel_until(0);
      if (propagate() != kNoReason) {
        ok = false;
        status = SolverStatus::unsat;
      }
    }
    double budget = cfg.restart_first;
    while (status == SolverStatus::unknown) {
      status = search(static_cast<std::uint64_t>(budget));
      if (status == SolverStatus::unknown) {
        if (out_of_time()) break;
        ++stats.restarts;
        budget *= cfg.restart_factor;
      }
    }
    if (status == SolverStatus::sat) {
      model_values.assign(value.begin(), value.end());
    } else if (status == SolverStatus::unsat) {
      ok = false;
    }
    cancel_until(0);
    stats.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return status;
  }
};

CdclSolver::CdclSolver(const CnfFormula& f, const SolveConfig& cfg) : impl_(std::make_unique<Impl>()) {
  validate(cfg);
  impl_->cfg = cfg;
  impl_->max_learnts = cfg.reduce_threshold;
  impl_->new_vars(f.num_vars());
  for (const auto& clause : f.clauses()) {
    if (!impl_->add_clause(clause)) break;
  }
}

CdclSolver::~CdclSolver() = default;
CdclSolver::CdclSolver(CdclSolver&&) noexcept = default;
CdclSolver& CdclSolver::operator=(CdclSolver&&) noexcept = default;

bool CdclSolver::add_clause(std::span<const int> lits) { return impl_->add_clause(lits); }
SolverStatus CdclSolver::solve() { return impl_->solve(); }
const SolveStats& CdclSolver::stats() const { return impl_->stats; }
int CdclSolver::num_vars() const { return impl_->nvars; }

Model CdclSolver::model() const {
  if (impl_->model_values.empty() && impl_->nvars > 0) throw Error("no model available");
  Model m(impl_->nvars);
  for (int v = 0; v < impl_->nvars; ++v) m.set(v + 1, impl_->model_values[static_cast<std::size_t>(v)] > 0);
  return m;
}

}  // namespace gridshift::sat
