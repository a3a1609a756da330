#include "entbound/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "entbound/errors.hpp"

namespace entbound::io {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::string_view source, std::string_view field, const std::string& what) {
  std::string msg(source);
  msg += ": ";
  msg += field;
  msg += ": ";
  msg += what;
  throw ParseError(msg);
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(source, "json", e.what());
  }
}

json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json matrix_to_json(const ComplexMatrix& m) {
  json pairs = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      pairs.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  return pairs;
}

ComplexMatrix matrix_from_json(const json& arr, int dim, std::string_view source,
                               const std::string& field) {
  if (!arr.is_array()) fail(source, field, "expected an array of [re, im] pairs");
  const std::size_t expected = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (arr.size() != expected) {
    fail(source, field,
         "expected dim*dim=" + std::to_string(expected) + " entries, got " +
             std::to_string(arr.size()));
  }
  ComplexMatrix m(dim, dim);
  for (std::size_t k = 0; k < expected; ++k) {
    const json& e = arr[k];
    const std::string where = field + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      fail(source, where, "expected [re, im] pair of numbers");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) fail(source, where, "entry is not finite");
    m(static_cast<Eigen::Index>(k) / dim, static_cast<Eigen::Index>(k) % dim) = Complex(re, im);
  }
  return m;
}

int positive_int(const json& j, std::string_view source, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer() || j[field].get<long long>() < 1) {
    fail(source, field, "missing or not a positive integer");
  }
  return static_cast<int>(j[field].get<long long>());
}

json check_to_json(const BoundCheck& c) {
  json j;
  j["bound_id"] = std::string(to_string(c.id));
  j["dim"] = c.dim;
  j["n"] = c.n;
  j["observable"] = c.observable ? json(*c.observable) : json(nullptr);
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["ratio"] = number_or_null(c.ratio);
  j["satisfied"] = c.satisfied;
  return j;
}

json run_to_json(const RunRecord& run) {
  json j;
  j["command"] = run.command;
  j["seed"] = run.seed;
  j["tool_version"] = run.version;
  j["timestamp"] = run.timestamp;
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& text, std::string_view source, std::size_t row,
                    const char* column) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    fail(source, "row " + std::to_string(row),
         std::string("column ") + column + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

MatrixFile parse_matrix_file(std::string_view text, std::string_view source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) fail(source, "json", "top level must be an object");
  MatrixFile file;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    fail(source, "kind", "expected \"state\" or \"observable\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "state") {
    file.kind = MatrixKind::State;
  } else if (kind == "observable") {
    file.kind = MatrixKind::Observable;
  } else {
    fail(source, "kind", "expected \"state\" or \"observable\", got \"" + kind + "\"");
  }
  file.dim = positive_int(j, source, "dim");
  if (!j.contains("matrix")) fail(source, "matrix", "missing");
  file.matrix = matrix_from_json(j["matrix"], file.dim, source, "matrix");
  return file;
}

MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_file(ss.str(), path);
}

std::string write_matrix_file(const ComplexMatrix& m, MatrixKind kind) {
  json j;
  j["kind"] = kind == MatrixKind::State ? "state" : "observable";
  j["dim"] = m.rows();
  j["matrix"] = matrix_to_json(m);
  return j.dump() + "\n";
}

DensityMatrix to_state(const MatrixFile& file, std::string_view source) {
  if (file.kind != MatrixKind::State) fail(source, "kind", "expected \"state\"");
  try {
    return DensityMatrix(file.matrix);
  } catch (const Error& e) {
    fail(source, "matrix", e.what());
  }
}

Observable to_observable(const MatrixFile& file, std::string_view source) {
  if (file.kind != MatrixKind::Observable) fail(source, "kind", "expected \"observable\"");
  try {
    return Observable(file.matrix);
  } catch (const Error& e) {
    fail(source, "matrix", e.what());
  }
}

// ---------------------------------------------------------------------------

std::string report_to_json(const BoundReport& report) {
  json j;
  j["all_satisfied"] = report.all_satisfied();
  j["violations"] = report.violations();
  j["state"] = {{"entropy_bits", report.state.entropy_bits},
                {"purity", report.state.purity},
                {"linear_entropy", report.state.linear_entropy}};
  json obs = json::array();
  for (const ObservableSummary& s : report.observables) {
    obs.push_back({{"trace", s.trace},
                   {"trace_abs", s.trace_abs},
                   {"trace_of_square", s.trace_of_square},
                   {"psd_certified", s.psd_certified}});
  }
  j["observables"] = obs;
  json checks = json::array();
  for (const BoundCheck& c : report.checks) checks.push_back(check_to_json(c));
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string report_to_table(const BoundReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "S = %.12g bits   purity = %.12g   S_L = %.12g\n",
                report.state.entropy_bits, report.state.purity, report.state.linear_entropy);
  out += line;
  std::snprintf(line, sizeof line, "%-18s %4s %3s %20s %20s %20s %14s  %s\n", "bound_id", "obs",
                "n", "lhs", "rhs", "margin", "ratio", "status");
  out += line;
  for (const BoundCheck& c : report.checks) {
    const std::string obs = c.observable ? std::to_string(*c.observable) : "-";
    char ratio[32];
    if (c.ratio) {
      std::snprintf(ratio, sizeof ratio, "%.10f", *c.ratio);
    } else {
      std::snprintf(ratio, sizeof ratio, "undefined");
    }
    std::snprintf(line, sizeof line, "%-18s %4s %3d %20.12g %20.12g %20.12g %14s  %s\n",
                  std::string(to_string(c.id)).c_str(), obs.c_str(), c.n, c.lhs, c.rhs, c.margin,
                  ratio, c.satisfied ? "pass" : "VIOLATED");
    out += line;
  }
  std::snprintf(line, sizeof line, "%zu checks, %zu violated\n", report.checks.size(),
                report.violations());
  out += line;
  return out;
}

// ---------------------------------------------------------------------------

std::string csv_header(bool with_purity) {
  std::string h = "bound_id,dim,n,trial,lhs,rhs,margin,ratio,satisfied";
  if (with_purity) h += ",purity";
  return h + "\n";
}

std::string csv_row(const BoundCheck& c, std::uint64_t trial, std::optional<double> purity) {
  std::string row;
  row.reserve(160);
  row += to_string(c.id);
  row += ',' + std::to_string(c.dim);
  row += ',' + std::to_string(c.n);
  row += ',' + std::to_string(trial);
  row += ',' + format_double(c.lhs);
  row += ',' + format_double(c.rhs);
  row += ',' + format_double(c.margin);
  row += ',';
  if (c.ratio) row += format_double(*c.ratio);
  row += c.satisfied ? ",true" : ",false";
  if (purity) row += ',' + format_double(*purity);
  row += '\n';
  return row;
}

std::vector<CsvRow> parse_csv(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) fail(source, "row 0", "missing header");
  const auto header = split_csv_line(line);
  static const std::vector<std::string> base = {"bound_id", "dim",    "n",     "trial",
                                                "lhs",      "rhs",    "margin", "ratio",
                                                "satisfied"};
  bool with_purity = false;
  if (header.size() == base.size() + 1 && header.back() == "purity") {
    with_purity = true;
  } else if (header.size() != base.size()) {
    fail(source, "row 0", "header must be " + csv_header(false).substr(0, csv_header().size() - 1) +
                              " optionally followed by ,purity");
  }
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (header[k] != base[k]) {
      fail(source, "row 0", "expected column '" + base[k] + "', got '" + header[k] + "'");
    }
  }

  std::vector<CsvRow> rows;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      fail(source, "row " + std::to_string(row_no),
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(f.size()));
    }
    CsvRow r;
    const auto id = parse_bound_id(f[0]);
    if (!id) fail(source, "row " + std::to_string(row_no), "unknown bound_id '" + f[0] + "'");
    r.bound = *id;
    r.dim = static_cast<int>(parse_number(f[1], source, row_no, "dim"));
    r.n = static_cast<int>(parse_number(f[2], source, row_no, "n"));
    r.trial = static_cast<std::uint64_t>(parse_number(f[3], source, row_no, "trial"));
    r.lhs = parse_number(f[4], source, row_no, "lhs");
    r.rhs = parse_number(f[5], source, row_no, "rhs");
    r.margin = parse_number(f[6], source, row_no, "margin");
    if (!f[7].empty()) r.ratio = parse_number(f[7], source, row_no, "ratio");
    if (f[8] == "true") {
      r.satisfied = true;
    } else if (f[8] == "false") {
      r.satisfied = false;
    } else {
      fail(source, "row " + std::to_string(row_no), "column satisfied: expected true/false");
    }
    if (with_purity) r.purity = parse_number(f[9], source, row_no, "purity");
    rows.push_back(r);
  }
  return rows;
}

void Aggregator::add(BoundId bound, double margin, std::optional<double> ratio, bool satisfied) {
  Acc& a = acc_[static_cast<std::size_t>(bound)];
  if (!a.seen) {
    a.seen = true;
    a.agg.bound = bound;
    a.agg.min_margin = margin;
  }
  ++a.agg.count;
  if (!satisfied) ++a.agg.violations;
  a.agg.min_margin = std::min(a.agg.min_margin, margin);
  a.margin_sum += margin;
  if (ratio) a.agg.max_ratio = a.agg.max_ratio ? std::max(*a.agg.max_ratio, *ratio) : *ratio;
}

std::vector<BoundAggregate> Aggregator::result() const {
  std::vector<BoundAggregate> out;
  for (const Acc& a : acc_) {
    if (!a.seen) continue;
    BoundAggregate agg = a.agg;
    agg.mean_margin = a.margin_sum / static_cast<double>(agg.count);
    out.push_back(agg);
  }
  return out;
}

std::uint64_t Aggregator::violations() const {
  std::uint64_t v = 0;
  for (const Acc& a : acc_) v += a.agg.violations;
  return v;
}

std::vector<BoundAggregate> aggregate(std::span<const CsvRow> rows) {
  Aggregator acc;
  for (const CsvRow& r : rows) acc.add(r.bound, r.margin, r.ratio, r.satisfied);
  return acc.result();
}

std::vector<std::pair<BoundId, std::vector<CurvePoint>>> margin_vs_purity(
    std::span<const CsvRow> rows) {
  std::map<int, std::vector<CurvePoint>> by_bound;
  for (const CsvRow& r : rows) {
    if (r.purity) by_bound[static_cast<int>(r.bound)].push_back({*r.purity, r.margin});
  }
  std::vector<std::pair<BoundId, std::vector<CurvePoint>>> out;
  for (auto& [id, pts] : by_bound) {
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) {
      return a.purity != b.purity ? a.purity < b.purity : a.margin < b.margin;
    });
    out.emplace_back(static_cast<BoundId>(id), std::move(pts));
  }
  return out;
}

std::string curve_to_tsv(std::span<const CurvePoint> curve) {
  std::string out = "purity\tmargin\n";
  for (const CurvePoint& p : curve) out += format_double(p.purity) + '\t' + format_double(p.margin) + '\n';
  return out;
}

// ---------------------------------------------------------------------------

std::string utc_timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string aggregates_to_json(std::span<const BoundAggregate> aggregates,
                               const std::optional<RunRecord>& run) {
  json j;
  if (run) j["run"] = run_to_json(*run);
  std::uint64_t violations = 0;
  json per = json::array();
  for (const BoundAggregate& a : aggregates) {
    violations += a.violations;
    per.push_back({{"bound_id", std::string(to_string(a.bound))},
                   {"count", a.count},
                   {"violations", a.violations},
                   {"min_margin", a.min_margin},
                   {"mean_margin", a.mean_margin},
                   {"max_ratio", number_or_null(a.max_ratio)}});
  }
  j["violation_count"] = violations;
  j["bounds"] = per;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string search_results_to_json(std::span<const SearchResult> results,
                                   const SearchConfig& config,
                                   const std::optional<RunRecord>& run) {
  json j;
  if (run) j["run"] = run_to_json(*run);
  j["config"] = {{"bound_id", std::string(to_string(config.bound))},
                 {"optimize_observable", config.optimize_observable},
                 {"diagonal_only", config.diagonal_only},
                 {"restarts", config.restarts},
                 {"max_iterations", config.max_iterations},
                 {"convergence_tol", config.convergence_tol},
                 {"n_observables", config.n_observables},
                 {"observable_ensemble",
                  std::string(to_string(config.resolved_observable_ensemble()))},
                 {"seed", config.seed}};
  json arr = json::array();
  for (const SearchResult& r : results) {
    json e;
    e["bound_id"] = std::string(to_string(r.bound));
    e["dim"] = r.dim;
    e["best_ratio"] = number_or_null(r.best_ratio);
    e["status"] = std::string(to_string(r.status));
    e["iterations_used"] = r.iterations_used;
    e["restart_index_of_best"] = r.restart_index_of_best;
    e["converged"] = r.converged;
    e["evaluations"] = r.evaluations;
    e["check"] = check_to_json(r.check);
    if (r.witness_state) e["witness_state"] = matrix_to_json(r.witness_state->matrix());
    json obs = json::array();
    for (const Observable& a : r.witness_observables) obs.push_back(matrix_to_json(a.matrix()));
    e["witness_observables"] = obs;
    arr.push_back(e);
  }
  j["results"] = arr;
  return j.dump(2) + "\n";
}

std::vector<SearchWitness> parse_search_results(std::string_view text, std::string_view source) {
  const json j = parse_json(text, source);
  if (!j.is_object() || !j.contains("results") || !j["results"].is_array()) {
    fail(source, "results", "missing results array");
  }
  std::vector<SearchWitness> out;
  for (std::size_t k = 0; k < j["results"].size(); ++k) {
    const json& e = j["results"][k];
    const std::string where = "results[" + std::to_string(k) + "]";
    SearchWitness w;
    if (!e.contains("bound_id") || !e["bound_id"].is_string()) fail(source, where, "bound_id missing");
    const auto id = parse_bound_id(e["bound_id"].get<std::string>());
    if (!id) fail(source, where + ".bound_id", "unknown bound");
    w.bound = *id;
    w.dim = positive_int(e, source, "dim");
    if (e.contains("best_ratio") && e["best_ratio"].is_number()) {
      w.best_ratio = e["best_ratio"].get<double>();
    }
    if (!e.contains("witness_state")) fail(source, where + ".witness_state", "missing");
    w.state = matrix_from_json(e["witness_state"], w.dim, source, where + ".witness_state");
    if (e.contains("witness_observables")) {
      const json& obs = e["witness_observables"];
      for (std::size_t m = 0; m < obs.size(); ++m) {
        w.observables.push_back(matrix_from_json(
            obs[m], w.dim, source, where + ".witness_observables[" + std::to_string(m) + "]"));
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

BoundCheck recheck_witness(const SearchWitness& witness, double rel_tol) {
  const DensityMatrix rho(witness.state);
  std::vector<Observable> obs;
  for (const ComplexMatrix& m : witness.observables) obs.emplace_back(m);
  return evaluate_bound(witness.bound, obs, rho, rel_tol);
}

// ---------------------------------------------------------------------------

std::string ensemble_spec_to_json(const EnsembleSpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["dim"] = spec.dim;
  if (spec.kind == EnsembleKind::RankKMixed) j["rank"] = spec.rank;
  j["seed"] = spec.seed;
  j["count"] = spec.count;
  return j.dump() + "\n";
}

EnsembleSpec parse_ensemble_spec(std::string_view text, std::string_view source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) fail(source, "json", "top level must be an object");
  EnsembleSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) fail(source, "kind", "missing");
  const auto kind = parse_ensemble_kind(j["kind"].get<std::string>());
  if (!kind) fail(source, "kind", "unknown ensemble '" + j["kind"].get<std::string>() + "'");
  spec.kind = *kind;
  spec.dim = positive_int(j, source, "dim");
  if (j.contains("rank")) spec.rank = positive_int(j, source, "rank");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(source, "seed", "expected unsigned integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("count")) spec.count = static_cast<std::uint64_t>(positive_int(j, source, "count"));
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(source, "spec", e.what());
  }
  return spec;
}

}  // namespace entbound::io
