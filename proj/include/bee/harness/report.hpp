#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bee::harness {

struct CsvSummary {
  std::string file;
  long seed = 0;
  long rows = 0;
  long last_step = 0;
  double final_return = 0.0;
  double final_success = 0.0;
  double mean_return = 0.0;
  /// Mean success over evaluation rows (area under the success curve per row).
  double success_auc = 0.0;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for a single value
};

Aggregate aggregate(const std::vector<double>& xs);

/// Summaries of every run CSV (files whose header matches the schema) directly under `dir`, sorted by name.
std::vector<CsvSummary> summarize_dir(const std::string& dir);

/// Table of per-file statistics followed by mean and standard deviation across files.
void print_report(const std::vector<CsvSummary>& rows, std::ostream& os);

}  // namespace bee::harness
