#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "bench.hpp"
#include "config.hpp"
#include "polybound/bounds.hpp"
#include "polybound/oracle.hpp"
#include "report_io.hpp"

namespace polybound::cli {

namespace {

using nlohmann::json;

/// Verification tolerance on the mixed scale 1 + |bound|.
constexpr double kVerifyTol = 1e-6;

struct CommonFlags {
  std::string poly;
  std::string file;
  std::size_t n = 0;
  int d = 0;
  std::string radii;
  std::string partition;
  std::string config;
  std::string format;
  double feas_tol = 0.0;
  double eq_tol = 0.0;
  double opt_tol = 0.0;
  int max_iter = 0;
  double objective_floor = 0.0;
  std::size_t budget = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;

  struct Options {
    CLI::Option* poly;
    CLI::Option* file;
    CLI::Option* n;
    CLI::Option* d;
    CLI::Option* radii;
    CLI::Option* partition;
    CLI::Option* config;
    CLI::Option* format;
    CLI::Option* feas_tol;
    CLI::Option* eq_tol;
    CLI::Option* opt_tol;
    CLI::Option* max_iter;
    CLI::Option* objective_floor;
    CLI::Option* budget = nullptr;
    CLI::Option* steps = nullptr;
    CLI::Option* seed = nullptr;
  } opt{};
};

void add_common(CLI::App* app, CommonFlags& f) {
  f.opt.poly = app->add_option("-f,--poly", f.poly, "Polynomial text, e.g. \"3.5*x1^2*x2 - x3^4 + 5\"");
  f.opt.file = app->add_option("--file", f.file, "Read the polynomial from a file");
  f.opt.n = app->add_option("-n", f.n, "Number of variables (default: largest index in the text)");
  f.opt.d = app->add_option("-d", f.d, "Even degree bound (default: smallest even d >= max(2, deg f))");
  f.opt.radii = app->add_option("-N,--radii", f.radii, "Radii N_i, comma separated; one value applies to all");
  f.opt.partition =
      app->add_option("--partition", f.partition, "singletons, one-block, none, or 1-based blocks like \"1,2;3\"");
  f.opt.config = app->add_option("--config", f.config, "JSON config file; flags override its values");
  f.opt.format = app->add_option("--format", f.format, "human, json or csv");
  f.opt.feas_tol = app->add_option("--feas-tol", f.feas_tol, "Solver feasibility tolerance");
  f.opt.eq_tol = app->add_option("--eq-tol", f.eq_tol, "Solver equality tolerance");
  f.opt.opt_tol = app->add_option("--opt-tol", f.opt_tol, "Solver duality-gap tolerance");
  f.opt.max_iter = app->add_option("--max-iter", f.max_iter, "Newton steps per centering");
  f.opt.objective_floor =
      app->add_option("--objective-floor", f.objective_floor, "Log-objective floor for unboundedness");
}

void add_verify_flags(CLI::App* app, CommonFlags& f) {
  f.opt.budget = app->add_option("--budget", f.budget, "Random samples of K (default 10000)");
  f.opt.steps = app->add_option("--steps", f.steps, "Multiplier grid points for one-block systems (default 1000)");
  f.opt.seed = app->add_option("--seed", f.seed, "Sampling seed (default 1)");
}

RunConfig build_config(const CommonFlags& f, RunConfig base = {}) {
  RunConfig c = f.opt.config->count() ? load_config_file(f.config, std::move(base)) : std::move(base);
  if (f.opt.poly->count()) {
    c.polynomial = f.poly;
    c.file.reset();
  }
  if (f.opt.file->count()) {
    c.file = f.file;
    if (!f.opt.poly->count()) c.polynomial.reset();
  }
  if (f.opt.n->count()) c.n = f.n;
  if (f.opt.d->count()) c.d = f.d;
  if (f.opt.radii->count()) c.radii = parse_real_list(f.radii);
  if (f.opt.partition->count()) c.partition = f.partition;
  if (f.opt.format->count()) c.format = parse_format(f.format);
  if (f.opt.feas_tol->count()) c.solver.feas_tol = f.feas_tol;
  if (f.opt.eq_tol->count()) c.solver.eq_tol = f.eq_tol;
  if (f.opt.opt_tol->count()) c.solver.opt_tol = f.opt_tol;
  if (f.opt.max_iter->count()) c.solver.max_iter = f.max_iter;
  if (f.opt.objective_floor->count()) c.solver.objective_floor = f.objective_floor;
  if (f.opt.budget && f.opt.budget->count()) c.budget = f.budget;
  if (f.opt.steps && f.opt.steps->count()) c.steps = f.steps;
  if (f.opt.seed && f.opt.seed->count()) c.seed = f.seed;
  return c;
}

json blocks_json(const ConstraintSystem& cs) {
  json out = json::array();
  for (const auto& block : cs.blocks) {
    json b = json::array();
    for (std::size_t i : block) b.push_back(i + 1);
    out.push_back(std::move(b));
  }
  return out;
}

json envelope(const char* command, const ResolvedConfig& rc) {
  return json{{"command", command},
              {"polynomial", rc.f.to_string()},
              {"n", rc.f.num_variables()},
              {"d", rc.d},
              {"radii", rc.cs.radii},
              {"partition", blocks_json(rc.cs)}};
}

constexpr const char* kReportCsvHeader = "command,n,d,m,bound,status,kind,iterations,wall_ms";

void report_csv_row(std::ostream& out, const char* command, const ResolvedConfig& rc, const BoundReport& r) {
  out << command << ',' << rc.f.num_variables() << ',' << rc.d << ',' << rc.cs.num_blocks() << ','
      << format_value(r.bound) << ',' << to_string(r.status) << ',' << to_string(r.kind) << ','
      << r.gp_stats.iterations << ',' << format_value(r.gp_stats.wall_ms) << '\n';
}

int exit_for(const BoundReport& r) { return r.status == BoundStatus::SolverFailure ? kExitSolver : kExitOk; }

void emit_report(std::ostream& out, const char* command, const ResolvedConfig& rc, const BoundReport& r) {
  switch (rc.raw.format) {
    case OutputFormat::Human:
      print_report_human(out, r);
      break;
    case OutputFormat::Json: {
      json j = envelope(command, rc);
      j["report"] = r;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << kReportCsvHeader << '\n';
      report_csv_row(out, command, rc, r);
      break;
  }
}

int cmd_bound(const ResolvedConfig& rc, bool hypercube, std::ostream& out) {
  BoundReport r;
  if (hypercube) {
    r = hypercube_lower_bound(rc.f, rc.d, rc.cs.radii, rc.options);
  } else {
    if (rc.cs.blocks.empty()) throw ConfigError("bound needs at least one block (use gp for the bound on R^n)");
    r = ellipsoid_lower_bound(rc.f, rc.cs, rc.options);
  }
  emit_report(out, "bound", rc, r);
  return exit_for(r);
}

int cmd_gp(const ResolvedConfig& rc, std::ostream& out) {
  const BoundReport r = gp_lower_bound(rc.f, rc.d, rc.options);
  if (rc.raw.format == OutputFormat::Human) {
    out << "f_gp: " << format_value(r.bound);
    if (r.status == BoundStatus::MinusInfinity) out << " (" << r.certificate_note << ')';
    out << '\n';
    if (r.status == BoundStatus::SolverFailure) out << "note: " << r.certificate_note << '\n';
    out << "wall time: " << format_value(r.gp_stats.wall_ms) << " ms\n";
  } else {
    emit_report(out, "gp", rc, r);
  }
  return exit_for(r);
}

int cmd_trivial(const ResolvedConfig& rc, std::ostream& out) {
  BoundReport r;
  r.kind = BoundKind::Trivial;
  r.bound = trivial_bound(rc.f, rc.cs.radii);
  r.certificate_note = "f(0) minus |f_alpha| N^alpha over the non-square terms";
  if (rc.raw.format == OutputFormat::Human) {
    out << "f_tr: " << format_value(r.bound) << '\n';
  } else {
    emit_report(out, "trivial", rc, r);
  }
  return kExitOk;
}

int cmd_verify(const ResolvedConfig& rc, std::ostream& out) {
  if (rc.cs.blocks.empty()) throw ConfigError("verify needs a compact set (at least one block)");
  if (rc.raw.budget == 0) throw ConfigError("--budget must be at least 1");
  const BoundReport r = ellipsoid_lower_bound(rc.f, rc.cs, rc.options);
  const SampleEstimate est = sample_minimize(rc.f, rc.cs, rc.raw.budget, rc.raw.seed);
  std::optional<LambdaScanResult> scan;
  if (rc.cs.num_blocks() == 1 && rc.raw.steps > 0) scan = lambda_scan(rc.f, rc.cs, rc.raw.steps, rc.options);

  const double slack = kVerifyTol * (1.0 + std::abs(r.bound));
  const double gap = est.value - r.bound;
  bool sound = r.finite() && est.value >= r.bound - slack;
  if (scan && std::isfinite(scan->value) && r.finite()) sound = sound && scan->value <= r.bound + slack;

  switch (rc.raw.format) {
    case OutputFormat::Human:
      out << "bound: " << format_value(r.bound) << " (" << to_string(r.status) << ")\n";
      out << "sample min: " << format_value(est.value) << " over " << est.samples << " points\n";
      out << "gap: " << format_value(gap) << '\n';
      if (scan) {
        out << "lambda scan: " << format_value(scan->value) << " at lambda = " << format_value(scan->best_lambda)
            << " (" << scan->evaluated << " finite, " << scan->skipped << " skipped)\n";
      }
      out << "soundness: " << (sound ? "OK" : "VIOLATED") << '\n';
      break;
    case OutputFormat::Json: {
      json j = envelope("verify", rc);
      j["report"] = r;
      j["sample_min"] = real_to_json(est.value);
      j["sample_argmin"] = est.argmin;
      j["samples"] = est.samples;
      j["scheme"] = est.scheme;
      j["gap"] = real_to_json(gap);
      j["scan"] = scan ? json{{"value", real_to_json(scan->value)},
                              {"grid_value", real_to_json(scan->grid_value)},
                              {"best_lambda", scan->best_lambda},
                              {"evaluated", scan->evaluated},
                              {"skipped", scan->skipped}}
                       : json(nullptr);
      j["sound"] = sound;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "n,d,m,bound,status,sample_min,gap,scan,sound\n";
      out << rc.f.num_variables() << ',' << rc.d << ',' << rc.cs.num_blocks() << ',' << format_value(r.bound) << ','
          << to_string(r.status) << ',' << format_value(est.value) << ',' << format_value(gap) << ','
          << (scan ? format_value(scan->value) : std::string()) << ',' << (sound ? "true" : "false") << '\n';
      break;
  }
  if (r.status == BoundStatus::SolverFailure) return kExitSolver;
  return sound ? kExitOk : kExitVerify;
}

struct BenchFlags {
  std::string ns = "3";
  std::string ds = "4";
  std::string ts = "10";
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::size_t budget = 1000;
  std::string out;
  std::string paper_cell;
  std::string partition = "random";
  CLI::Option* paper_cell_opt = nullptr;
};

template <class T>
std::vector<T> positive_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (long long v : parse_int_list(text)) {
    if (v < 1) throw ConfigError(std::string(what) + " values must be positive");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

int cmd_bench(const BenchFlags& b, std::ostream& out) {
  BenchSpec spec;
  spec.repetitions = b.reps;
  spec.seed = b.seed;
  spec.budget = b.budget;
  if (b.partition == "random") {
    spec.partition = PartitionPolicy::Random;
  } else if (b.partition == "singletons") {
    spec.partition = PartitionPolicy::Singletons;
  } else if (b.partition == "one-block") {
    spec.partition = PartitionPolicy::OneBlock;
  } else {
    throw ConfigError("bench partition must be random, singletons or one-block");
  }
  if (b.paper_cell_opt->count()) {
    const auto cell = positive_list<long long>(b.paper_cell, "--paper-cell");
    if (cell.size() != 3) throw ConfigError("--paper-cell expects n,d,t");
    spec.ns = {static_cast<std::size_t>(cell[0])};
    spec.ds = {static_cast<int>(cell[1])};
    spec.ts = {static_cast<std::size_t>(cell[2])};
  } else {
    spec.ns = positive_list<std::size_t>(b.ns, "--n");
    spec.ds = positive_list<int>(b.ds, "--d");
    spec.ts = positive_list<std::size_t>(b.ts, "--t");
  }
  for (int d : spec.ds) {
    if (d < 2 || d % 2 != 0) throw ConfigError("--d values must be even and >= 2");
  }

  std::ofstream file;
  if (!b.out.empty()) {
    file.open(b.out);
    if (!file) throw ConfigError("cannot write '" + b.out + "'");
  }
  const std::vector<BenchRow> rows = run_bench(spec, worker_count());
  if (file.is_open()) {
    write_bench_csv(file, rows);
    file.close();
    if (!file) throw ConfigError("failed writing '" + b.out + "'");
    write_bench_summary(out, rows);
  } else {
    write_bench_csv(out, rows);
  }
  for (const BenchRow& r : rows) {
    if (r.status == BoundStatus::SolverFailure) return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds for real polynomials by geometric programming", "polybound"};
  app.require_subcommand(1);

  CommonFlags bound_flags, gp_flags, trivial_flags, verify_flags;
  bool hypercube = false;
  CLI::App* bound = app.add_subcommand("bound", "Bound on a product of hyperellipsoids");
  add_common(bound, bound_flags);
  bound->add_flag("--hypercube", hypercube, "Bound on the box prod [-N_i, N_i] (singleton partition, shortcut)");
  CLI::App* gp = app.add_subcommand("gp", "Bound on R^n");
  add_common(gp, gp_flags);
  CLI::App* trivial = app.add_subcommand("trivial", "Trivial bound on the box prod [-N_i, N_i]");
  add_common(trivial, trivial_flags);
  CLI::App* verify = app.add_subcommand("verify", "Check a bound against sampling and a multiplier scan");
  add_common(verify, verify_flags);
  add_verify_flags(verify, verify_flags);

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "Random-instance runtime table as CSV");
  bench->add_option("--n", bench_flags.ns, "Comma-separated n values")->capture_default_str();
  bench->add_option("--d", bench_flags.ds, "Comma-separated even d values")->capture_default_str();
  bench->add_option("--t", bench_flags.ts, "Comma-separated term counts")->capture_default_str();
  bench->add_option("--reps", bench_flags.reps, "Instances per cell")->capture_default_str();
  bench->add_option("--seed", bench_flags.seed, "Base seed")->capture_default_str();
  bench->add_option("--budget", bench_flags.budget, "Samples per instance for sample_min; 0 skips")
      ->capture_default_str();
  bench->add_option("--partition", bench_flags.partition, "random, singletons or one-block")->capture_default_str();
  bench->add_option("--out", bench_flags.out, "CSV path (default: stdout)");
  bench_flags.paper_cell_opt =
      bench->add_option("--paper-cell", bench_flags.paper_cell, "One table cell n,d,t with 10 repetitions");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    for (CLI::App* sub : app.get_subcommands()) out << sub->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (bound->parsed()) return cmd_bound(resolve(build_config(bound_flags)), hypercube, out);
    if (gp->parsed()) return cmd_gp(resolve(build_config(gp_flags)), out);
    if (trivial->parsed()) return cmd_trivial(resolve(build_config(trivial_flags)), out);
    if (verify->parsed()) return cmd_verify(resolve(build_config(verify_flags)), out);
    if (bench->parsed()) {
      if (bench_flags.paper_cell_opt->count() && !bench->count("--reps")) bench_flags.reps = 10;
      return cmd_bench(bench_flags, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace polybound::cli
