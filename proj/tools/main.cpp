// gridshift: command-line front end for the rectangle-free coloring workbench.
//
// Exit codes: 0 success, 1 mismatch (rectangle found, unexpected status,
// failed check), 2 usage or input error, 3 timeout or exhausted budget.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridshift/cnf.hpp"
#include "gridshift/distribution.hpp"
#include "gridshift/encoder.hpp"
#include "gridshift/error.hpp"
#include "gridshift/grid.hpp"
#include "gridshift/isomorphism.hpp"
#include "gridshift/recipes.hpp"
#include "gridshift/render.hpp"
#include "gridshift/sat.hpp"

namespace gs = gridshift;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kTimeout = 3 };

struct UsageError : gs::Error {
  using gs::Error::Error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(is), {}};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
}

// Grid, layout and distribution flags shared by encode, solve, enumerate,
// verify and render.
struct GridOptions {
  std::vector<int> spec;
  std::optional<int> subgrid;
  std::string direction = "left";
  std::optional<int> midgrid;
  int partial_rows = 0;
  int partial_cols = 0;
  std::string diagonal = "none";
  std::string encoding = "merged";
  std::string distribution;
  bool symmetry_breaking = false;

  void add_to(CLI::App* app, bool spec_required) {
    auto* s = app->add_option("--spec", spec, "grid rows, columns and colors (M N K)")->expected(3);
    if (spec_required) s->required();
    app->add_option("--subgrid", subgrid, "shift subgrid size Z")->check(CLI::PositiveNumber);
    app->add_option("--direction", direction, "shift direction")->check(CLI::IsMember({"left", "right", "both"}));
    app->add_option("--midgrid", midgrid, "midgrid size (a multiple of Z)")->check(CLI::PositiveNumber);
    app->add_option("--partial-rows", partial_rows, "leftover rows that continue the shift")->check(CLI::NonNegativeNumber);
    app->add_option("--partial-cols", partial_cols, "leftover columns that continue the shift")->check(CLI::NonNegativeNumber);
    app->add_option("--diagonal", diagonal, "diagonal equalities")->check(CLI::IsMember({"none", "diag", "anti", "both"}));
  }

  void add_encoding_to(CLI::App* app) {
    app->add_option("--encoding", encoding, "shift encoding (direction both always uses selectors)")
        ->check(CLI::IsMember({"merged", "equal", "selector"}));
    app->add_option("--distribution", distribution, "distribution file, or 'ones'");
    app->add_flag("--symmetry-breaking", symmetry_breaking, "add lex-leader clauses for verified grid symmetries");
  }

  [[nodiscard]] gs::GridSpec grid_spec() const { return gs::GridSpec(spec[0], spec[1], spec[2]); }

  [[nodiscard]] std::optional<gs::PatternLayout> layout(const gs::GridSpec& g) const {
    if (!subgrid) {
      if (midgrid || partial_rows || partial_cols || diagonal != "none") throw UsageError("layout flags need --subgrid");
      return std::nullopt;
    }
    gs::PatternLayout l;
    l.subgrid = *subgrid;
    l.direction = gs::parse_direction(direction);
    l.midgrid = midgrid;
    l.partial_rows = partial_rows;
    l.partial_cols = partial_cols;
    l.diagonal = gs::parse_diagonal(diagonal);
    gs::validate(l, g);
    return l;
  }

  [[nodiscard]] std::optional<gs::DistributionSet> distribution_set(const gs::GridSpec& g,
                                                                    const std::optional<gs::PatternLayout>& l) const {
    if (distribution.empty()) return std::nullopt;
    if (!l) throw UsageError("--distribution needs --subgrid");
    if (distribution == "ones") return gs::DistributionSet::uniform(l->subgrid_rows(g), l->subgrid_cols(g), l->subgrid, g.colors, 1);
    return gs::parse_distribution(read_input(distribution), l->subgrid);
  }

  [[nodiscard]] gs::ShiftEncoding shift_encoding() const {
    if (direction == "both") return gs::ShiftEncoding::selector;
    if (encoding == "equal") return gs::ShiftEncoding::equal;
    if (encoding == "selector") throw UsageError("the selector encoding needs --direction both");
    return gs::ShiftEncoding::merged;
  }

  [[nodiscard]] gs::RecipeStep step() const {
    gs::RecipeStep s;
    s.spec = grid_spec();
    s.layout = layout(s.spec);
    s.encoding = shift_encoding();
    s.distribution = distribution_set(s.spec, s.layout);
    s.symmetry_breaking = symmetry_breaking;
    return s;
  }
};

struct SolverOptions {
  std::string engine = "cdcl";
  double timeout = 60;
  std::uint64_t seed = 0;
  std::string external;

  void add_to(CLI::App* app, bool with_engine) {
    if (with_engine) {
      app->add_option("--engine", engine, "solver engine")->check(CLI::IsMember({"cdcl", "walksat", "portfolio"}));
      app->add_option("--external-solver", external, "DIMACS solver command, run as CMD <file>");
    }
    app->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "random seed");
  }

  [[nodiscard]] gs::sat::SolveConfig config() const {
    gs::sat::SolveConfig c;
    c.mode = gs::sat::parse_mode(engine);
    c.timeout = std::chrono::duration<double>(timeout);
    c.seed = seed;
    return c;
  }
};

std::string render_coloring(const gs::Coloring& c, const std::string& format, const std::optional<gs::PatternLayout>& overlay) {
  if (format == "text") return gs::to_text(c);
  gs::RenderOptions o;
  o.format = gs::parse_render_format(format);
  o.overlay = overlay;
  return gs::render(c, o);
}

std::string describe(const gs::RectangleWitness& w) {
  std::ostringstream os;
  os << "rectangle: rows " << w.row1 + 1 << ' ' << w.row2 + 1 << ", cols " << w.col1 + 1 << ' ' << w.col2 + 1 << ", color "
     << w.color;
  return os.str();
}

// Prints one verdict line per check; returns false if any check failed.
bool verify_coloring(const gs::Coloring& c, const std::optional<gs::PatternLayout>& l,
                     const std::optional<gs::DistributionSet>& d, std::ostream& os) {
  bool ok = true;
  if (auto w = gs::find_monochromatic_rectangle(c)) {
    os << describe(*w) << '\n';
    ok = false;
  } else {
    os << "rectangle-free\n";
  }
  if (l) {
    const bool m = gs::matches_layout(c, *l);
    os << (m ? "layout ok\n" : "layout mismatch\n");
    ok &= m;
  }
  if (d) {
    bool m = false;
    try {
      m = gs::extract_tiled_distribution(c, *l) == *d;
    } catch (const gs::LayoutError&) {
    }
    os << (m ? "distribution exact\n" : "distribution mismatch\n");
    ok &= m;
  }
  return ok;
}

int cmd_encode(const GridOptions& g, const std::string& out, std::string map) {
  const gs::Encoding enc = gs::build_instance(g.step());
  write_output(out, gs::write_dimacs(enc.formula));
  if (map.empty() && !out.empty() && out != "-") map = out + ".map";
  if (!map.empty()) write_output(map, gs::write_map(enc.vars));
  std::cerr << "vars " << enc.formula.num_vars() << " clauses " << enc.formula.num_clauses() << '\n';
  return kOk;
}

int cmd_solve(const GridOptions& g, const SolverOptions& so, const std::string& expect, const std::string& format,
              const std::string& out, bool quiet) {
  const gs::RecipeStep step = g.step();
  const gs::Encoding enc = gs::build_instance(step);
  const auto start = std::chrono::steady_clock::now();
  gs::sat::SolveOutcome r;
  if (!so.external.empty()) {
    r = gs::sat::solve_external(enc.formula, so.external);
  } else {
    r = gs::sat::solve(enc.formula, so.config());
  }
  std::cerr << "engine " << r.engine << ", " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            << "s\n";
  std::cout << "status " << gs::to_string(r.status) << '\n';
  if (r.status == gs::SolverStatus::unknown && r.best_unsat) std::cout << "best " << *r.best_unsat << " unsatisfied clauses\n";

  int code = kOk;
  if (r.status == gs::SolverStatus::sat) {
    const gs::Coloring c = gs::decode_model(*r.model, enc.vars);
    std::ostringstream report;
    if (step.encoding == gs::ShiftEncoding::selector) {
      report << "directions";
      for (auto d : gs::selector_directions(*r.model, enc.vars)) report << ' ' << gs::to_string(d);
      report << '\n';
    }
    if (!verify_coloring(c, step.layout, step.distribution, report)) code = kMismatch;
    if (!quiet || code != kOk) std::cout << report.str();
    if (!quiet || !out.empty()) write_output(out, render_coloring(c, format, step.layout));
  }
  if (!expect.empty() && r.status != gs::SolverStatus::unknown && gs::to_string(r.status) != expect) {
    std::cout << "expected " << expect << '\n';
    code = kMismatch;
  }
  if (r.status == gs::SolverStatus::unknown) code = kTimeout;
  return code;
}

int cmd_enumerate(const GridOptions& g, const SolverOptions& so, std::size_t limit, const std::string& format, bool count_only,
                  bool classify, std::optional<std::size_t> expect) {
  if (g.symmetry_breaking) throw UsageError("symmetry breaking changes solution counts; not allowed with enumerate");
  const gs::RecipeStep step = g.step();
  const gs::Encoding enc = gs::build_instance(step);
  std::size_t invalid = 0;
  const auto en = gs::sat::enumerate(enc, limit, so.config(), [&](const gs::Coloring& c) {
    if (gs::find_monochromatic_rectangle(c)) ++invalid;
    if (!count_only) std::cout << render_coloring(c, format, step.layout) << '\n' << std::flush;
  });
  std::cout << "count " << en.colorings.size() << (en.complete ? "" : " (incomplete)") << '\n';
  if (classify) std::cout << gs::classification_report(gs::classify(en.colorings));
  if (invalid) {
    std::cout << invalid << " colorings contain a rectangle\n";
    return kMismatch;
  }
  if (expect && (!en.complete || en.colorings.size() != *expect)) {
    if (en.timed_out) return kTimeout;
    std::cout << "expected " << *expect << '\n';
    return kMismatch;
  }
  return en.timed_out ? kTimeout : kOk;
}

int cmd_verify(const GridOptions& g, const std::string& file) {
  const auto cs = gs::parse_colorings(read_input(file));
  if (cs.empty()) throw UsageError("no coloring in " + file);
  bool ok = true;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    if (!g.spec.empty() && g.grid_spec() != c.spec()) throw UsageError("coloring does not match --spec");
    const auto l = g.layout(c.spec());
    const auto d = g.distribution_set(c.spec(), l);
    if (cs.size() > 1) std::cout << "coloring " << i + 1 << '\n';
    ok &= verify_coloring(c, l, d, std::cout);
  }
  return ok ? kOk : kMismatch;
}

int cmd_classify(const std::vector<std::string>& files, std::size_t budget) {
  std::vector<gs::Coloring> all;
  for (const auto& f : files) {
    auto cs = gs::parse_colorings(read_input(f));
    all.insert(all.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
  }
  if (all.empty()) throw UsageError("no colorings given");
  std::cout << "colorings " << all.size() << '\n' << gs::classification_report(gs::classify(all, budget));
  return kOk;
}

int cmd_render(const GridOptions& g, const std::string& file, const std::string& format, const std::vector<std::string>& palette,
               int cell_size, const std::string& out) {
  const gs::Coloring c = gs::parse_coloring(read_input(file));
  gs::RenderOptions o;
  o.format = gs::parse_render_format(format);
  o.overlay = g.layout(c.spec());
  if (!palette.empty()) o.palette = palette;
  o.cell_size = cell_size;
  write_output(out, gs::render(c, o));
  return kOk;
}

int cmd_distribute_check(const std::string& source, const std::vector<int>& shape, const std::optional<int>& z,
                         const std::string& direction) {
  gs::DistributionSet d;
  if (source == "ones") {
    if (shape.empty()) throw UsageError("'ones' needs --shape X Y Z K");
    d = gs::DistributionSet::uniform(shape[0], shape[1], shape[2], shape[3], 1);
  } else {
    d = gs::parse_distribution(read_input(source), z);
  }
  gs::ConstraintReport rep;
  if (direction.empty()) {
    rep = gs::check_necessary(d);
  } else {
    gs::PatternLayout l;
    l.subgrid = d.z();
    l.direction = gs::parse_direction(direction);
    rep = gs::check_necessary(d, l);
  }
  std::cout << gs::format_report(rep);
  return rep.passed() ? kOk : kMismatch;
}

int cmd_distribute_search(const std::vector<int>& s, std::size_t limit, std::size_t budget, bool no_symmetry) {
  gs::DistributionSearchOptions o;
  o.limit = limit;
  o.node_budget = budget;
  o.break_color_symmetry = !no_symmetry;
  const auto r = gs::search_distributions(s[0], s[1], s[2], s[3], o);
  for (const auto& d : r.solutions) std::cout << gs::to_text(d) << '\n';
  std::cout << "found " << r.solutions.size() << ", nodes " << r.nodes;
  if (r.complete) std::cout << (r.solutions.empty() ? ", no distribution exists" : ", search complete");
  if (r.budget_exceeded) std::cout << ", node budget exhausted";
  std::cout << '\n';
  return r.budget_exceeded && r.solutions.empty() ? kTimeout : kOk;
}

int cmd_repro(const std::vector<std::string>& names, bool all, bool list, bool gating_only, const SolverOptions& so,
              std::optional<double> timeout) {
  const auto& book = gs::recipe_book();
  if (list) {
    for (const auto& r : book) {
      std::cout << r.name << "  [criterion " << r.criterion << (r.gating ? "" : ", non-gating") << "]  " << r.description << '\n';
    }
    return kOk;
  }
  std::vector<const gs::ExperimentRecipe*> todo;
  if (all) {
    for (const auto& r : book) {
      if (r.gating || !gating_only) todo.push_back(&r);
    }
  } else {
    if (names.empty()) throw UsageError("give a recipe name, --all or --list");
    for (const auto& n : names) todo.push_back(&gs::find_recipe(n));
  }
  gs::RecipeRunOptions o;
  o.seed = so.seed;
  if (timeout) o.timeout = std::chrono::duration<double>(*timeout);
  o.log = &std::cout;
  bool failed = false;
  bool timed_out = false;
  for (const auto* r : todo) {
    std::cout << r->name << " [criterion " << r->criterion << (r->gating ? "" : ", non-gating") << "]: " << r->description << '\n';
    const auto res = gs::run_recipe(*r, o);
    std::cout << r->name << ": " << res.summary << " -> " << (res.passed ? "PASS" : res.timed_out ? "TIMEOUT" : "FAIL") << "\n\n";
    if (!res.passed && r->gating) {
      if (res.timed_out) timed_out = true;
      else failed = true;
    }
  }
  return failed ? kMismatch : timed_out ? kTimeout : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rectangle-free grid coloring workbench with shift-pattern streamlining"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gridshift 0.1.0");

  // encode
  GridOptions enc_g;
  std::string enc_out, enc_map, enc_format = "dimacs";
  auto* encode = app.add_subcommand("encode", "write the CNF instance as DIMACS plus a variable map");
  enc_g.add_to(encode, true);
  enc_g.add_encoding_to(encode);
  encode->add_option("-o,--output", enc_out, "DIMACS file (default stdout)");
  encode->add_option("--map", enc_map, "variable map file (default OUTPUT.map)");
  encode->add_option("--format", enc_format, "output format")->check(CLI::IsMember({"dimacs"}));

  // solve
  GridOptions sol_g;
  SolverOptions sol_s;
  std::string sol_expect, sol_format = "text", sol_out;
  bool sol_quiet = false;
  auto* solve = app.add_subcommand("solve", "solve an instance and verify any coloring found");
  sol_g.add_to(solve, true);
  sol_g.add_encoding_to(solve);
  sol_s.add_to(solve, true);
  solve->add_option("--expect", sol_expect, "expected status; a different answer exits 1")->check(CLI::IsMember({"sat", "unsat"}));
  solve->add_option("--format", sol_format, "coloring output format")->check(CLI::IsMember({"text", "ascii", "svg"}));
  solve->add_option("-o,--output", sol_out, "coloring output file (default stdout)");
  solve->add_flag("-q,--quiet", sol_quiet, "print the status only (a coloring still goes to -o)");

  // enumerate
  GridOptions en_g;
  SolverOptions en_s;
  std::size_t en_limit = SIZE_MAX;
  std::string en_format = "text";
  bool en_count_only = false, en_classify = false;
  std::optional<std::size_t> en_expect;
  auto* enumerate = app.add_subcommand("enumerate", "list every coloring the instance admits, then the count");
  en_g.add_to(enumerate, true);
  en_g.add_encoding_to(enumerate);
  en_s.add_to(enumerate, false);
  enumerate->add_option("--limit", en_limit, "stop after this many colorings");
  enumerate->add_option("--format", en_format, "coloring format")->check(CLI::IsMember({"text", "ascii"}));
  enumerate->add_flag("--count-only", en_count_only, "print the count only");
  enumerate->add_flag("--classify", en_classify, "also print the isomorphism classes");
  enumerate->add_option("--expect", en_expect, "expected count; a different count exits 1");

  // verify
  GridOptions ver_g;
  std::string ver_file;
  auto* verify = app.add_subcommand("verify", "check colorings for rectangles, layout conformance and distribution");
  ver_g.add_to(verify, false);
  verify->add_option("--distribution", ver_g.distribution, "distribution file, or 'ones'");
  verify->add_option("file", ver_file, "coloring file ('-' for stdin)")->required();

  // classify
  std::vector<std::string> cls_files;
  std::size_t cls_budget = gs::kDefaultCanonicalBudget;
  auto* classify = app.add_subcommand("classify", "partition colorings into isomorphism classes");
  classify->add_option("files", cls_files, "coloring files")->required();
  classify->add_option("--budget", cls_budget, "canonical-form node budget per coloring");

  // distribute
  auto* distribute = app.add_subcommand("distribute", "color distribution tools");
  distribute->require_subcommand(1);
  std::string dc_source, dc_direction;
  std::optional<int> dc_z;
  std::vector<int> dc_shape;
  auto* dcheck = distribute->add_subcommand("check", "test the necessary conditions");
  dcheck->add_option("source", dc_source, "distribution file or 'ones'")->required();
  dcheck->add_option("--subgrid", dc_z, "subgrid size (default: the first subgrid's sum)");
  dcheck->add_option("--shape", dc_shape, "X Y Z K for 'ones'")->expected(4);
  dcheck->add_option("--direction", dc_direction, "shift direction of the layout")->check(CLI::IsMember({"left", "right", "both"}));
  std::vector<int> ds_shape;
  std::size_t ds_limit = 1, ds_budget = 50'000'000;
  bool ds_no_symmetry = false;
  auto* dsearch = distribute->add_subcommand("search", "backtracking search for distributions");
  dsearch->add_option("--shape", ds_shape, "X Y Z K")->expected(4)->required();
  dsearch->add_option("--limit", ds_limit, "stop after this many");
  dsearch->add_option("--node-budget", ds_budget, "search node budget");
  dsearch->add_flag("--no-color-symmetry", ds_no_symmetry, "do not order the color matrices");
  std::vector<int> de_shape;
  std::string de_format = "smtlib", de_out;
  auto* dexport = distribute->add_subcommand("export", "write the constraint system as an SMT-LIB script");
  dexport->add_option("--shape", de_shape, "X Y Z K")->expected(4)->required();
  dexport->add_option("--format", de_format, "script format")->check(CLI::IsMember({"smtlib"}));
  dexport->add_option("-o,--output", de_out, "output file (default stdout)");

  // render
  GridOptions ren_g;
  std::string ren_file, ren_format = "ascii", ren_out;
  std::vector<std::string> ren_palette;
  int ren_cell = 20;
  auto* render = app.add_subcommand("render", "draw a coloring as ascii or svg");
  ren_g.add_to(render, false);
  render->add_option("file", ren_file, "coloring file ('-' for stdin)")->required();
  render->add_option("--format", ren_format, "output format")->check(CLI::IsMember({"ascii", "svg"}));
  render->add_option("--palette", ren_palette, "svg fill per color, comma separated")->delimiter(',');
  render->add_option("--cell-size", ren_cell, "svg cell size in pixels")->check(CLI::PositiveNumber);
  render->add_option("-o,--output", ren_out, "output file (default stdout)");

  // repro
  std::vector<std::string> rep_names;
  bool rep_all = false, rep_list = false, rep_gating = false;
  SolverOptions rep_s;
  std::optional<double> rep_timeout;
  auto* repro = app.add_subcommand("repro", "run built-in experiments; exits 0 iff every expectation matched");
  repro->add_option("names", rep_names, "recipe names");
  repro->add_flag("--all", rep_all, "run the whole book");
  repro->add_flag("--list", rep_list, "list recipes");
  repro->add_flag("--gating-only", rep_gating, "with --all, skip non-gating recipes");
  repro->add_option("--timeout", rep_timeout, "seconds per step, replacing each step's own limit")->check(CLI::PositiveNumber);
  repro->add_option("--seed", rep_s.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*encode) return cmd_encode(enc_g, enc_out, enc_map);
    if (*solve) return cmd_solve(sol_g, sol_s, sol_expect, sol_format, sol_out, sol_quiet);
    if (*enumerate) return cmd_enumerate(en_g, en_s, en_limit, en_format, en_count_only, en_classify, en_expect);
    if (*verify) return cmd_verify(ver_g, ver_file);
    if (*classify) return cmd_classify(cls_files, cls_budget);
    if (*dcheck) return cmd_distribute_check(dc_source, dc_shape, dc_z, dc_direction);
    if (*dsearch) return cmd_distribute_search(ds_shape, ds_limit, ds_budget, ds_no_symmetry);
    if (*dexport) {
      write_output(de_out, gs::export_smtlib(de_shape[0], de_shape[1], de_shape[2], de_shape[3]));
      return kOk;
    }
    if (*render) return cmd_render(ren_g, ren_file, ren_format, ren_palette, ren_cell, ren_out);
    if (*repro) return cmd_repro(rep_names, rep_all, rep_list, rep_gating, rep_s, rep_timeout);
  } catch (const gs::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTimeout;
  } catch (const gs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
