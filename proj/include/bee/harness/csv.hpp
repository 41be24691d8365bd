#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "bee/diag/run_record.hpp"

namespace bee::harness {

/// Bumped whenever a column is added, removed or reordered.
inline constexpr int kCsvSchemaVersion = 1;

/// RunRecord fields in declaration order.
const std::vector<std::string>& csv_columns();

std::string csv_header();
/// One row; absent values are empty fields, reals use %.17g so rows round-trip exactly.
std::string csv_row(const diag::RunRecord& r);
diag::RunRecord parse_csv_row(const std::string& line);

/// Streams rows to disk, flushing each one so a crashed run keeps what it wrote.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const diag::RunRecord& r);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

std::vector<diag::RunRecord> read_csv(const std::string& path);

}  // namespace bee::harness
