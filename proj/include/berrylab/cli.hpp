// Command-line front end: argument parsing, experiment orchestration,
// deterministic CSV/JSON serialization and plot-data emission.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "berrylab/model.hpp"

namespace berrylab {

// Parse/usage failures; the CLI maps these to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// --help and friends; the CLI prints the text and exits 0.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;               // connection|holonomy|berry|evolve|
                                     // breakdown|mixed|sweep
  std::vector<double> theta{kPi / 2};
  std::vector<double> g{0.0};
  std::vector<double> omega{1e-3};
  double b = 1.0;
  CouplingKind coupling = CouplingKind::XXminusYY;
  int points = 2000;
  long long steps = 0;               // 0 = auto per run
  int loops = 1;
  int level = 3;                     // ascending eigenvalue index
  int subsystem = 2;
  BasisLabel basis = BasisLabel::reply_basis;
  std::string out;                   // empty = "<command>.<ext>"
  OutputFormat format = OutputFormat::csv;
  int jobs = 0;                      // 0 = hardware concurrency
  std::vector<std::string> plots;    // "ycol:xcol" entries

  bool operator==(const RunConfig&) const = default;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

RunConfig parse_args(const std::vector<std::string>& argv);

// Evaluate the command into a table (pure; parallel across rows).
Table build_table(const RunConfig& config);

// Resolved output path, "<command>.<ext>" when --out was not given.
std::string output_path(const RunConfig& config);

// Write the table with the meta record; byte-deterministic.
void write_output(const RunConfig& config, const Table& table);

// One "<command>_<y>_vs_<x>.dat" file per requested plot.
std::vector<std::string> emit_plot_data(const RunConfig& config,
                                        const Table& table);

// Full pipeline: build, write, emit plots. Returns 0.
int run(const RunConfig& config);

// 12-significant-digit, locale-independent rendering used for all text
// output (to_chars; "nan" for undefined cells).
std::string format_double(double v);

// Round-trip support for the JSON format.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json_text(const std::string& text);
RunConfig parse_output_json_config(const std::string& file_contents);

// The model-reconstruction note embedded in every output.
std::string model_note(CouplingKind kind);

}  // namespace berrylab
