#include <algorithm>
#include <random>

#include "gridshift/error.hpp"
#include "gridshift/sat.hpp"

namespace gridshift::sat {

namespace {

// Incremental break-count bookkeeping: per clause the number of true
// literals and the sum of their variables, so a clause with exactly one true
// literal knows its critical variable without a scan.
class WalkSat {
 public:
  WalkSat(const CnfFormula& f, const SolveConfig& cfg) : cfg_(cfg), rng_(cfg.seed), nvars_(f.num_vars()) {
    const auto& clauses = f.clauses();
    offsets_.reserve(clauses.size() + 1);
    offsets_.push_back(0);
    std::vector<std::size_t> occ_count(static_cast<std::size_t>(2 * (nvars_ + 1)), 0);
    for (const auto& c : clauses) {
      for (int l : c) {
        lits_.push_back(l);
        ++occ_count[index(l)];
      }
      offsets_.push_back(static_cast<std::uint32_t>(lits_.size()));
    }
    occ_offsets_.assign(occ_count.size() + 1, 0);
    for (std::size_t i = 0; i < occ_count.size(); ++i) occ_offsets_[i + 1] = occ_offsets_[i] + static_cast<std::uint32_t>(occ_count[i]);
    occ_.resize(occ_offsets_.back());
    std::vector<std::uint32_t> fill(occ_offsets_.begin(), occ_offsets_.end() - 1);
    for (std::uint32_t c = 0; c + 1 < offsets_.size(); ++c) {
      for (std::uint32_t i = offsets_[c]; i < offsets_[c + 1]; ++i) occ_[fill[index(lits_[i])]++] = c;
    }
    const std::size_t nc = clauses.size();
    true_count_.resize(nc);
    true_sum_.resize(nc);
    unsat_pos_.assign(nc, kAbsent);
    assign_.resize(static_cast<std::size_t>(nvars_ + 1));
    break_.resize(static_cast<std::size_t>(nvars_ + 1));
  }

  SolveOutcome run() {
    SolveOutcome out;
    out.engine = "walksat";
    const auto start = std::chrono::steady_clock::now();
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(cfg_.timeout);
    const std::uint64_t restart_every = std::max<std::uint64_t>(1, cfg_.max_flips / 10);
    std::size_t best = SIZE_MAX;
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::uint64_t flips = 0;
    bool stop = false;
    while (!stop && flips < cfg_.max_flips) {
      randomize();
      for (std::uint64_t local = 0; local < restart_every && flips < cfg_.max_flips; ++local) {
        if (unsat_.size() < best) {
          best = unsat_.size();
          out.best_unsat_trace.push_back(best);
          best_assign_ = assign_;
        }
        if (unsat_.empty()) {
          stop = true;
          break;
        }
        if ((flips & 4095) == 0 && out_of_time(deadline)) {
          stop = true;
          break;
        }
        const std::uint32_t c = unsat_[rng_() % unsat_.size()];
        flip(pick(c, coin));
        ++flips;
      }
    }
    if (unsat_.size() < best) {
      best = unsat_.size();
      out.best_unsat_trace.push_back(best);
      best_assign_ = assign_;
    }

    out.best_unsat = best;
    out.stats.flips = flips;
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (best == 0) {
      out.status = SolverStatus::sat;
      Model m(nvars_);
      for (int v = 1; v <= nvars_; ++v) m.set(v, best_assign_[static_cast<std::size_t>(v)] != 0);
      out.model = std::move(m);
    }
    return out;
  }

 private:
  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  static std::size_t index(int lit) { return static_cast<std::size_t>(lit > 0 ? 2 * lit : 2 * -lit + 1); }
  bool is_true(int lit) const { return (assign_[static_cast<std::size_t>(std::abs(lit))] != 0) == (lit > 0); }

  bool out_of_time(std::chrono::steady_clock::time_point deadline) const {
    if (cfg_.stop && cfg_.stop->load(std::memory_order_relaxed)) return true;
    return std::chrono::steady_clock::now() >= deadline;
  }

  void randomize() {
    for (int v = 1; v <= nvars_; ++v) assign_[static_cast<std::size_t>(v)] = static_cast<char>(rng_() & 1);
    std::fill(break_.begin(), break_.end(), 0);
    unsat_.clear();
    std::fill(unsat_pos_.begin(), unsat_pos_.end(), kAbsent);
    for (std::uint32_t c = 0; c < true_count_.size(); ++c) {
      std::uint32_t count = 0;
      std::int64_t sum = 0;
      for (std::uint32_t i = offsets_[c]; i < offsets_[c + 1]; ++i) {
        if (is_true(lits_[i])) {
          ++count;
          sum += std::abs(lits_[i]);
        }
      }
      true_count_[c] = count;
      true_sum_[c] = sum;
      if (count == 0) add_unsat(c);
      else if (count == 1) ++break_[static_cast<std::size_t>(sum)];
    }
  }

  void add_unsat(std::uint32_t c) {
    unsat_pos_[c] = static_cast<std::uint32_t>(unsat_.size());
    unsat_.push_back(c);
  }
  void remove_unsat(std::uint32_t c) {
    const std::uint32_t pos = unsat_pos_[c];
    const std::uint32_t last = unsat_.back();
    unsat_[pos] = last;
    unsat_pos_[last] = pos;
    unsat_.pop_back();
    unsat_pos_[c] = kAbsent;
  }

  int pick(std::uint32_t c, std::uniform_real_distribution<double>& coin) {
    int best_break = INT32_MAX;
    candidates_.clear();
    for (std::uint32_t i = offsets_[c]; i < offsets_[c + 1]; ++i) {
      const int v = std::abs(lits_[i]);
      const int b = break_[static_cast<std::size_t>(v)];
      if (b < best_break) {
        best_break = b;
        candidates_.clear();
      }
      if (b == best_break) candidates_.push_back(v);
    }
    if (best_break > 0 && coin(rng_) < cfg_.noise) {
      const std::uint32_t len = offsets_[c + 1] - offsets_[c];
      return std::abs(lits_[offsets_[c] + static_cast<std::uint32_t>(rng_() % len)]);
    }
    return candidates_[rng_() % candidates_.size()];
  }

  void flip(int v) {
    char& a = assign_[static_cast<std::size_t>(v)];
    a = static_cast<char>(!a);
    const int now_true = a ? v : -v;
    const int now_false = -now_true;
    for (std::uint32_t i = occ_offsets_[index(now_true)]; i < occ_offsets_[index(now_true) + 1]; ++i) {
      const std::uint32_t c = occ_[i];
      const std::uint32_t count = ++true_count_[c];
      true_sum_[c] += v;
      if (count == 1) {
        remove_unsat(c);
        ++break_[static_cast<std::size_t>(v)];
      } else if (count == 2) {
        --break_[static_cast<std::size_t>(true_sum_[c] - v)];
      }
    }
    for (std::uint32_t i = occ_offsets_[index(now_false)]; i < occ_offsets_[index(now_false) + 1]; ++i) {
      const std::uint32_t c = occ_[i];
      const std::uint32_t count = --true_count_[c];
      true_sum_[c] -= v;
      if (count == 0) {
        add_unsat(c);
        --break_[static_cast<std::size_t>(v)];
      } else if (count == 1) {
        ++break_[static_cast<std::size_t>(true_sum_[c])];
      }
    }
  }

  SolveConfig cfg_;
  std::mt19937_64 rng_;
  int nvars_;
  std::vector<int> lits_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> occ_offsets_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::int64_t> true_sum_;
  std::vector<std::uint32_t> unsat_;
  std::vector<std::uint32_t> unsat_pos_;
  std::vector<char> assign_;
  std::vector<char> best_assign_;
  std::vector<int> break_;
  std::vector<int> candidates_;
};

}  // namespace

SolveOutcome local_search(const CnfFormula& f, const SolveConfig& cfg) {
  validate(cfg);
  WalkSat ws(f, cfg);
  return ws.run();
}

}  // namespace gridshift::sat
