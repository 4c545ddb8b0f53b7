#pragma once

// Data ingestion and result serialization.
//
// CSVs are UTF-8 with a header row and '.' decimals. Numbers are written
// with 6 significant digits in summary CSVs and 17 in traces, always via the
// C locale, so identical inputs give byte-identical files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fa4p/diagnostics.hpp"
#include "fa4p/model.hpp"
#include "fa4p/response_matrix.hpp"
#include "fa4p/sampler.hpp"
#include "fa4p/scores.hpp"

namespace fa4p {

/// Numeric cells: value >= t -> 1, otherwise 0.
struct ThresholdRule {
  double threshold = 0.0;
};
/// Listed category labels -> 0, every other non-empty label -> 1.
struct ZeroCategoriesRule {
  std::vector<std::string> categories;
};
using DichotomizeRule = std::variant<std::monostate, ThresholdRule, ZeroCategoriesRule>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 style parsing (quoted fields, doubled quotes). Strips a UTF-8 BOM
/// and CR line endings; skips blank lines. Rows must match the header width.
CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Rows are persons, columns are items. A leading column named "id" holds
/// person ids. Without a rule every cell must be 0 or 1.
ResponseMatrix responses_from_csv(const CsvTable& table, const DichotomizeRule& rule,
                                  const std::string& source);
ResponseMatrix load_responses(const std::filesystem::path& path,
                              const DichotomizeRule& rule = {});

/// Writes text to `path` through a sibling temp file and a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Locale-independent finite number; throws Parse naming `where`.
double parse_number(const std::string& cell, const std::string& where);

/// "%.6g" and "%.17g" in the C locale.
std::string format6(double value);
std::string format17(double value);

struct ItemRecord {
  std::string id;
  FAItemParams fa;
};

/// Reads item parameters. FA columns (alpha, tau) take precedence; otherwise
/// IRT columns (a, b) are converted. c and d default to 0 and 1.
std::vector<ItemRecord> read_items(const std::filesystem::path& path);
std::vector<ItemRecord> items_from_csv(const CsvTable& table, const std::string& source);

struct ArtifactOptions {
  bool binary_traces = false;
  /// Wall time in seconds; written to the manifest only when set, which
  /// makes the manifest run-dependent.
  std::optional<double> wall_seconds;
  std::string input_path;
  std::vector<std::string> scores;  // requested score kinds, e.g. "ngni"
  bool pattern_average = false;
};

struct RunArtifacts {
  std::filesystem::path items_csv;
  std::filesystem::path persons_csv;
  std::filesystem::path traces;
  std::filesystem::path manifest;
};

/// Writes items.csv, persons.csv, traces.csv (or traces.bin) and
/// manifest.json into `outdir`, creating it if needed. `averaged` holds the
/// pattern-averaged NGNI totals when requested.
RunArtifacts write_artifacts(const FitResult& fit, const ScoreTable& scores,
                             const std::optional<std::vector<double>>& averaged,
                             const std::filesystem::path& outdir,
                             const ArtifactOptions& options = {});

std::string items_csv(const FitResult& fit);
std::string persons_csv(const FitResult& fit, const ScoreTable& scores,
                        const std::optional<std::vector<double>>& averaged);
std::string traces_csv(const FitResult& fit);
std::string traces_binary(const FitResult& fit);

/// Reads either trace format; the binary one is recognized by its magic
/// bytes. Parameters keep their order of first appearance.
std::vector<ParameterTraces> read_traces(const std::filesystem::path& path);

std::string diagnostics_json(const DiagnosticsReport& report);
std::string diagnostics_csv(const DiagnosticsReport& report);

struct TidyEstimate {
  std::string item;
  std::string param;
  std::string source;
  double value = 0.0;
};

struct ParameterMse {
  std::string param;
  std::size_t items = 0;
  double mse = 0.0;
};

struct Comparison {
  std::vector<TidyEstimate> tidy;
  std::vector<ParameterMse> mse;
};

/// Matches items by id and compares every parameter column (among alpha,
/// tau, a, b, c, d) present in both tables.
Comparison compare_estimates(const CsvTable& a, const CsvTable& b, const std::string& label_a,
                             const std::string& label_b);
std::string tidy_csv(const Comparison& comparison);

}  // namespace fa4p
