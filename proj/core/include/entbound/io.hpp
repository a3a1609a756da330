#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entbound/bounds.hpp"
#include "entbound/ensembles.hpp"
#include "entbound/search.hpp"

namespace entbound::io {

/// "%.17g", enough digits to round-trip any double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Matrix files
//
//   {"kind": "state" | "observable", "dim": d,
//    "matrix": [[re, im], ...]}          // d*d pairs, row-major

enum class MatrixKind { State, Observable };

struct MatrixFile {
  MatrixKind kind = MatrixKind::State;
  int dim = 0;
  ComplexMatrix matrix;
};

/// Throws ParseError("<source>: <field>: <problem>").
MatrixFile parse_matrix_file(std::string_view text, std::string_view source);
MatrixFile load_matrix_file(const std::string& path);
std::string write_matrix_file(const ComplexMatrix& m, MatrixKind kind);

/// Validates the matrix as the requested type, prefixing errors with the source.
DensityMatrix to_state(const MatrixFile& file, std::string_view source);
Observable to_observable(const MatrixFile& file, std::string_view source);

// ---------------------------------------------------------------------------
// Bound reports

std::string report_to_json(const BoundReport& report);
/// Aligned plain-text table, one line per check.
std::string report_to_table(const BoundReport& report);

// ---------------------------------------------------------------------------
// CSV rows: bound_id,dim,n,trial,lhs,rhs,margin,ratio,satisfied[,purity]
// An undefined ratio is an empty field.

std::string csv_header(bool with_purity = false);
std::string csv_row(const BoundCheck& check, std::uint64_t trial,
                    std::optional<double> purity = std::nullopt);

struct CsvRow {
  BoundId bound = BoundId::EntropyGeLinear;
  int dim = 0;
  int n = 1;
  std::uint64_t trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::optional<double> ratio;
  bool satisfied = true;
  std::optional<double> purity;
};

/// Throws ParseError("<source>: row <k>: <problem>") on schema mismatch.
std::vector<CsvRow> parse_csv(std::istream& in, std::string_view source);

struct BoundAggregate {
  BoundId bound = BoundId::EntropyGeLinear;
  std::uint64_t count = 0;
  std::uint64_t violations = 0;
  double min_margin = 0.0;
  double mean_margin = 0.0;
  /// Over rows with a defined ratio.
  std::optional<double> max_ratio;
};

/// One aggregate per bound present, in BoundId order.
std::vector<BoundAggregate> aggregate(std::span<const CsvRow> rows);

/// Incremental form of aggregate() for streaming producers.
class Aggregator {
 public:
  void add(BoundId bound, double margin, std::optional<double> ratio, bool satisfied);
  std::vector<BoundAggregate> result() const;
  std::uint64_t violations() const;

 private:
  struct Acc {
    bool seen = false;
    BoundAggregate agg;
    double margin_sum = 0.0;
  };
  Acc acc_[kAllBounds.size()];
};

/// (purity, margin) pairs per bound, sorted by purity then margin, for rows carrying purity.
struct CurvePoint {
  double purity = 0.0;
  double margin = 0.0;
};
std::vector<std::pair<BoundId, std::vector<CurvePoint>>> margin_vs_purity(
    std::span<const CsvRow> rows);
/// Tab-separated "purity\tmargin" lines with a header.
std::string curve_to_tsv(std::span<const CurvePoint> curve);

// ---------------------------------------------------------------------------
// Run records and summaries

struct RunRecord {
  std::string command;
  std::uint64_t seed = 0;
  std::string version;
  /// ISO-8601 UTC; excluded from byte-identity guarantees.
  std::string timestamp;
};

std::string utc_timestamp_now();

std::string aggregates_to_json(std::span<const BoundAggregate> aggregates,
                               const std::optional<RunRecord>& run);

// ---------------------------------------------------------------------------
// Search results

std::string search_results_to_json(std::span<const SearchResult> results,
                                   const SearchConfig& config,
                                   const std::optional<RunRecord>& run);

/// Witness data read back from a search result file.
struct SearchWitness {
  BoundId bound = BoundId::Thm1Upper;
  int dim = 0;
  std::optional<double> best_ratio;
  ComplexMatrix state;
  std::vector<ComplexMatrix> observables;
};

std::vector<SearchWitness> parse_search_results(std::string_view text, std::string_view source);

/// Re-evaluates a witness through the bounds module.
BoundCheck recheck_witness(const SearchWitness& witness, double rel_tol = tol::bound_margin);

// ---------------------------------------------------------------------------
// Ensemble specs

std::string ensemble_spec_to_json(const EnsembleSpec& spec);
EnsembleSpec parse_ensemble_spec(std::string_view text, std::string_view source);

}  // namespace entbound::io
