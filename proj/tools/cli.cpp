#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "entbound/bounds.hpp"
#include "entbound/ensembles.hpp"
#include "entbound/errors.hpp"
#include "entbound/io.hpp"
#include "entbound/parallel.hpp"
#include "entbound/search.hpp"

namespace entbound::cli {

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool json = false;
  std::string out;
  double tol = tol::bound_margin;
};

struct DimRange {
  int lo = 2;
  int hi = 2;
};

DimRange resolve_dims(int dim, const std::string& range) {
  if (!range.empty()) {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw InvalidParameter("--dim-range expects LO:HI, got " + range);
    DimRange r;
    try {
      r.lo = std::stoi(range.substr(0, colon));
      r.hi = std::stoi(range.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidParameter("--dim-range expects LO:HI, got " + range);
    }
    if (r.lo < 2 || r.hi < r.lo) throw InvalidDimension("--dim-range requires 2 <= LO <= HI");
    return r;
  }
  if (dim < 2) throw InvalidDimension("--dim must be >= 2");
  return {dim, dim};
}

std::string join_command(const std::vector<std::string>& args) {
  std::string cmd;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) cmd += ' ';
    cmd += args[i];
  }
  return cmd;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError(path + ": cannot open for writing");
  f << text;
}

std::vector<Observable> load_observables(const std::vector<std::string>& paths) {
  std::vector<Observable> obs;
  for (const std::string& p : paths) obs.push_back(io::to_observable(io::load_matrix_file(p), p));
  return obs;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string state;
  std::vector<std::string> observables;
};

int cmd_check(const CheckArgs& a, const GlobalOptions& g, std::ostream& out) {
  const DensityMatrix rho = io::to_state(io::load_matrix_file(a.state), a.state);
  const std::vector<Observable> obs = load_observables(a.observables);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (obs[k].dim() != rho.dim()) {
      throw ParseError(a.observables[k] + ": dim: observable dimension " +
                       std::to_string(obs[k].dim()) + " does not match state dimension " +
                       std::to_string(rho.dim()));
    }
  }
  const BoundReport report = check_all(obs, rho, g.tol);
  const std::string text = g.json ? io::report_to_json(report) : io::report_to_table(report);
  if (g.out.empty()) {
    out << text;
  } else {
    write_text(g.out, text);
  }
  return report.all_satisfied() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  int dim = 2;
  std::string dim_range;
  std::uint64_t count = 1000;
  std::string state_ensemble = "hs";
  int rank = 1;
  std::string obs_ensemble = "gue";
  int n_observables = 1;
  std::vector<std::string> observable_files;
  std::string sweep_state;
  std::vector<std::string> bounds;
  std::string summary;
};

struct SamplePlan {
  bool sweep = false;
  EnsembleSpec state_spec;
  EnsembleSpec obs_spec;
  int n = 1;
  std::vector<Observable> fixed;
  std::optional<DensityMatrix> sweep_psi;
  std::set<BoundId> bounds;
  bool psd_observables = false;
};

SamplePlan plan_sample(const SampleArgs& a, int dim) {
  SamplePlan plan;
  plan.sweep = a.state_ensemble == "sweep" || a.state_ensemble == "interpolated";
  if (!plan.sweep) {
    const auto kind = parse_ensemble_kind(a.state_ensemble);
    if (!kind || !is_state_ensemble(*kind)) {
      throw InvalidParameter("--state-ensemble: unknown state ensemble '" + a.state_ensemble + "'");
    }
    plan.state_spec.kind = *kind;
    plan.state_spec.dim = dim;
    plan.state_spec.rank = a.rank;
    plan.state_spec.validate();
  } else if (!a.sweep_state.empty()) {
    plan.sweep_psi = io::to_state(io::load_matrix_file(a.sweep_state), a.sweep_state);
    if (plan.sweep_psi->dim() != dim) throw DimensionMismatch(dim, plan.sweep_psi->dim());
  } else {
    plan.sweep_psi = DensityMatrix::basis_state(dim, 0);
  }

  if (!a.observable_files.empty()) {
    plan.fixed = load_observables(a.observable_files);
    for (const Observable& o : plan.fixed) {
      if (o.dim() != dim) throw DimensionMismatch(dim, o.dim());
    }
    plan.n = static_cast<int>(plan.fixed.size());
    plan.psd_observables = std::all_of(plan.fixed.begin(), plan.fixed.end(),
                                       [](const Observable& o) { return o.psd_certified(); });
  } else {
    const auto kind = parse_ensemble_kind(a.obs_ensemble);
    if (!kind || is_state_ensemble(*kind)) {
      throw InvalidParameter("--obs-ensemble: unknown observable ensemble '" + a.obs_ensemble + "'");
    }
    plan.obs_spec.kind = *kind;
    plan.obs_spec.dim = dim;
    if (a.n_observables < 1) throw InvalidParameter("--n-observables must be >= 1");
    plan.n = a.n_observables;
    plan.psd_observables = *kind == EnsembleKind::PsdObservable;
  }

  if (a.bounds.empty()) {
    for (BoundId id : kAllBounds) {
      if (id == BoundId::TraceProduct) continue;
      if (id == BoundId::Thm2Dim && !plan.psd_observables) continue;
      if ((id == BoundId::Cor2ProductN || id == BoundId::Cor2SumN) && plan.n < 2) continue;
      plan.bounds.insert(id);
    }
  } else {
    for (const std::string& name : a.bounds) {
      const auto id = parse_bound_id(name);
      if (!id) throw InvalidParameter("--bounds: unknown bound '" + name + "'");
      if (*id == BoundId::Thm1Upper) plan.bounds.insert(BoundId::Thm1Lower);
      if (*id == BoundId::Thm3Full) plan.bounds.insert(BoundId::Thm3Weak);
      if (*id == BoundId::Cor2ProductN) plan.bounds.insert(BoundId::Cor2SumN);
      plan.bounds.insert(*id);
    }
    if (plan.bounds.count(BoundId::Thm2Dim) && !plan.psd_observables) {
      throw NotPSD("NotPSD: THM2_DIM requested but the observables are not PSD "
                   "(use --obs-ensemble psd)");
    }
    if ((plan.bounds.count(BoundId::Cor2ProductN) || plan.bounds.count(BoundId::Cor2SumN)) &&
        plan.n < 2) {
      throw TooFewObservables("COR2 requested with fewer than two observables "
                              "(use --n-observables >= 2)");
    }
  }
  return plan;
}

/// Rows for one trial, in check_all order.
std::string sample_trial(const SamplePlan& plan, int dim, std::uint64_t seed, std::uint64_t trial,
                         std::uint64_t count, double rel_tol,
                         std::vector<BoundCheck>& checks_out) {
  CounterRng rng = CounterRng::substream(seed, trial);
  std::optional<double> purity_col;

  std::optional<DensityMatrix> rho;
  if (plan.sweep) {
    const double p = count > 1 ? static_cast<double>(trial) / static_cast<double>(count - 1) : 1.0;
    rho = interpolated_state(*plan.sweep_psi, p);
    purity_col = purity(*rho);
  } else {
    rho = draw_state(plan.state_spec, rng);
  }
  std::vector<Observable> obs = plan.fixed;
  if (obs.empty()) {
    for (int k = 0; k < plan.n; ++k) obs.push_back(draw_observable(plan.obs_spec, rng));
  }

  checks_out.clear();
  const BoundReport report = check_all(obs, *rho, rel_tol);
  for (const BoundCheck& c : report.checks) {
    if (plan.bounds.count(c.id)) checks_out.push_back(c);
  }
  if (plan.bounds.count(BoundId::TraceProduct)) {
    ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = rng.uniform(-1.0, 1.0);
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
    checks_out.push_back(trace_product_bound_check(d, a, rel_tol));
  }

  std::string rows;
  for (const BoundCheck& c : checks_out) rows += io::csv_row(c, trial, purity_col);
  return rows;
}

/// Seed used for dimension d of a multi-dimension run.
std::uint64_t dimension_seed(std::uint64_t seed, int dim) {
  return splitmix64_mix(seed ^ static_cast<std::uint64_t>(dim));
}

int cmd_sample(const SampleArgs& a, const GlobalOptions& g, const std::string& command,
               std::ostream& out, std::ostream& err) {
  const DimRange dims = resolve_dims(a.dim, a.dim_range);
  if (a.count < 1) throw InvalidParameter("--count must be >= 1");

  // Validate every dimension's plan before writing anything.
  std::vector<SamplePlan> plans;
  for (int d = dims.lo; d <= dims.hi; ++d) plans.push_back(plan_sample(a, d));

  std::unique_ptr<std::ofstream> file;
  std::ostream* csv = &out;
  if (!g.out.empty()) {
    file = std::make_unique<std::ofstream>(g.out, std::ios::binary);
    if (!*file) throw ParseError(g.out + ": cannot open for writing");
    csv = file.get();
  }
  *csv << io::csv_header(plans.front().sweep);

  io::Aggregator agg;
  constexpr std::uint64_t kBlock = 2048;
  for (int d = dims.lo; d <= dims.hi; ++d) {
    const SamplePlan& plan = plans[static_cast<std::size_t>(d - dims.lo)];
    const std::uint64_t seed = dims.lo == dims.hi ? g.seed : dimension_seed(g.seed, d);
    for (std::uint64_t start = 0; start < a.count; start += kBlock) {
      const std::uint64_t len = std::min(kBlock, a.count - start);
      std::vector<std::string> rows(len);
      std::vector<std::vector<BoundCheck>> checks(len);
      parallel_for(len, g.threads, [&](std::size_t i) {
        rows[i] = sample_trial(plan, d, seed, start + i, a.count, g.tol, checks[i]);
      });
      for (std::uint64_t i = 0; i < len; ++i) {
        *csv << rows[i];
        for (const BoundCheck& c : checks[i]) agg.add(c.id, c.margin, c.ratio, c.satisfied);
      }
    }
  }
  csv->flush();

  io::RunRecord run{command, g.seed, ENTBOUND_VERSION, io::utc_timestamp_now()};
  const auto aggregates = agg.result();
  const std::string summary = io::aggregates_to_json(aggregates, run);
  std::string summary_path = a.summary;
  if (summary_path.empty() && !g.out.empty()) summary_path = g.out + ".summary.json";
  if (summary_path.empty()) {
    err << summary;
  } else {
    write_text(summary_path, summary);
  }
  return agg.violations() == 0 ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string bound;
  int dim = 2;
  std::string dim_range;
  int restarts = 16;
  int max_iterations = 2000;
  double convergence_tol = 1e-10;
  std::string obs_ensemble;
  std::vector<std::string> observable_files;
  bool fixed_observable = false;
  bool diagonal = false;
  int n_observables = 2;
  std::string csv;
};

int cmd_search(const SearchArgs& a, const GlobalOptions& g, const std::string& command,
               std::ostream& out) {
  const auto id = parse_bound_id(a.bound);
  if (!id) throw InvalidParameter("--bound: unknown bound '" + a.bound + "'");
  const DimRange dims = resolve_dims(a.dim, a.dim_range);

  SearchConfig config;
  config.bound = *id;
  config.dim = dims.lo;
  config.restarts = a.restarts;
  config.max_iterations = a.max_iterations;
  config.convergence_tol = a.convergence_tol;
  config.seed = g.seed;
  config.diagonal_only = a.diagonal;
  config.n_observables = a.n_observables;
  config.threads = g.threads;
  config.rel_tol = g.tol;
  if (!a.obs_ensemble.empty()) {
    const auto kind = parse_ensemble_kind(a.obs_ensemble);
    if (!kind) throw InvalidParameter("--obs-ensemble: unknown ensemble '" + a.obs_ensemble + "'");
    config.observable_ensemble = kind;
  }
  if (!a.observable_files.empty()) {
    if (dims.lo != dims.hi) throw InvalidParameter("--observable cannot be combined with --dim-range");
    config.fixed_observables = load_observables(a.observable_files);
    config.optimize_observable = false;
    if (*id == BoundId::Cor2ProductN || *id == BoundId::Cor2SumN) {
      config.n_observables = static_cast<int>(config.fixed_observables.size());
    }
  }
  if (a.fixed_observable) config.optimize_observable = false;
  // Fail on the first dimension before any work.
  config.validate();

  const std::vector<SearchResult> table = scan_dimension(*id, dims.lo, dims.hi, config);

  bool violation = false;
  std::string lines;
  for (const SearchResult& r : table) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s d=%d best_ratio=%.12g restart=%d iterations=%d converged=%s status=%s\n",
                  std::string(to_string(r.bound)).c_str(), r.dim, r.best_ratio,
                  r.restart_index_of_best, r.iterations_used, r.converged ? "yes" : "no",
                  std::string(to_string(r.status)).c_str());
    lines += buf;
    violation = violation || r.status == SearchStatus::Violation;
  }

  io::RunRecord run{command, g.seed, ENTBOUND_VERSION, io::utc_timestamp_now()};
  const std::string json = io::search_results_to_json(table, config, run);
  if (!g.out.empty()) write_text(g.out, json);
  if (g.json && g.out.empty()) {
    out << json;
  } else {
    out << lines;
  }
  if (!a.csv.empty()) {
    std::string rows = io::csv_header();
    for (const SearchResult& r : table) {
      rows += io::csv_row(r.check, static_cast<std::uint64_t>(r.restart_index_of_best));
    }
    write_text(a.csv, rows);
  }
  return violation ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> files;
  std::string plot_dir;
};

int cmd_report(const ReportArgs& a, const GlobalOptions& g, std::ostream& out) {
  if (a.files.empty()) throw ParseError("report: no input CSV files given");
  std::vector<io::CsvRow> rows;
  for (const std::string& path : a.files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    auto part = io::parse_csv(in, path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto aggregates = io::aggregate(rows);
  const std::string json = io::aggregates_to_json(aggregates, std::nullopt);
  if (g.out.empty()) {
    out << json;
  } else {
    write_text(g.out, json);
  }
  if (!a.plot_dir.empty()) {
    for (const auto& [id, curve] : io::margin_vs_purity(rows)) {
      write_text(a.plot_dir + "/margin_vs_purity_" + std::string(to_string(id)) + ".tsv",
                 io::curve_to_tsv(curve));
    }
  }
  return kExitOk;
}

void add_global_options(CLI::App& app, GlobalOptions& g) {
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--threads", g.threads, "Worker threads (0 = available parallelism)");
  app.add_flag("--json", g.json, "Emit JSON instead of a table");
  app.add_option("--out", g.out, "Write the primary output to this path");
  app.add_option("--tol", g.tol, "Relative violation tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy bounds on expectation values and variances of quantum observables",
               "entbound"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  add_global_options(app, g);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Evaluate every applicable bound for one state");
  check->add_option("state", check_args.state, "State matrix file (JSON)")->required();
  check->add_option("observables", check_args.observables, "Observable matrix files (JSON)");

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Check bounds over random ensembles, CSV output");
  sample->add_option("--dim", sample_args.dim, "Hilbert-space dimension");
  sample->add_option("--dim-range", sample_args.dim_range, "Dimension range LO:HI");
  sample->add_option("--count", sample_args.count, "Samples per dimension");
  sample->add_option("--state-ensemble", sample_args.state_ensemble,
                     "hs | haar | rank-k | sweep");
  sample->add_option("--rank", sample_args.rank, "Rank for --state-ensemble rank-k");
  sample->add_option("--obs-ensemble", sample_args.obs_ensemble, "gue | psd | diagonal");
  sample->add_option("--n-observables", sample_args.n_observables, "Observables per sample");
  sample->add_option("--observable", sample_args.observable_files,
                     "Fixed observable file(s) instead of an ensemble");
  sample->add_option("--sweep-state", sample_args.sweep_state,
                     "Pure state file for --state-ensemble sweep (default |0><0|)");
  sample->add_option("--bounds", sample_args.bounds, "Bounds to check (default: all applicable)")
      ->delimiter(',');
  sample->add_option("--summary", sample_args.summary, "Summary JSON path");

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Maximize a bound's LHS/RHS ratio");
  search->add_option("--bound", search_args.bound, "Bound to search")->required();
  search->add_option("--dim", search_args.dim, "Hilbert-space dimension");
  search->add_option("--dim-range", search_args.dim_range, "Dimension range LO:HI");
  search->add_option("--restarts", search_args.restarts, "Random restarts");
  search->add_option("--max-iterations", search_args.max_iterations, "Iterations per restart");
  search->add_option("--convergence-tol", search_args.convergence_tol, "Ratio convergence tolerance");
  search->add_option("--obs-ensemble", search_args.obs_ensemble,
                     "Ensemble for non-optimized observables");
  search->add_option("--observable", search_args.observable_files, "Fixed observable file(s)");
  search->add_flag("--fixed-observable", search_args.fixed_observable,
                   "Draw observables from --obs-ensemble instead of optimizing them");
  search->add_flag("--diagonal", search_args.diagonal, "Restrict to diagonal states/observables");
  search->add_option("--n-observables", search_args.n_observables, "Observables for COR2");
  search->add_option("--csv", search_args.csv, "Write witness check rows as CSV");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Aggregate CSV files from sample/search");
  report->add_option("files", report_args.files, "CSV files");
  report->add_option("--plot-dir", report_args.plot_dir, "Directory for margin-vs-purity data");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  const std::string command = join_command(args);
  try {
    if (*check) return cmd_check(check_args, g, out);
    if (*sample) return cmd_sample(sample_args, g, command, out, err);
    if (*search) return cmd_search(search_args, g, command, out);
    if (*report) return cmd_report(report_args, g, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace entbound::cli
