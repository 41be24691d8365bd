#include "bee/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "bee/errors.hpp"
#include "bee/harness/csv.hpp"

namespace bee::harness {

namespace fs = std::filesystem;

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  for (double x : xs) a.mean += x;
  a.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return a;
}

std::vector<CsvSummary> summarize_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ArgumentError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<CsvSummary> out;
  for (const auto& f : files) {
    {
      std::ifstream in(f);
      std::string header;
      std::getline(in, header);
      if (!header.empty() && header.back() == '\r') header.pop_back();
      if (header != csv_header()) continue;  // comparison tables and heatmaps share the directory
    }
    const auto rows = read_csv(f.string());
    CsvSummary s;
    s.file = f.filename().string();
    s.rows = static_cast<long>(rows.size());
    if (!rows.empty()) {
      s.seed = rows.back().seed;
      s.last_step = rows.back().step;
      s.final_return = rows.back().episode_return.value_or(0.0);
      s.final_success = rows.back().success.value_or(0.0);
      for (const auto& r : rows) {
        s.mean_return += r.episode_return.value_or(0.0);
        s.success_auc += r.success.value_or(0.0);
      }
      s.mean_return /= static_cast<double>(rows.size());
      s.success_auc /= static_cast<double>(rows.size());
    }
    out.push_back(s);
  }
  return out;
}

void print_report(const std::vector<CsvSummary>& rows, std::ostream& os) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-20s %8s %6s %10s %12s %12s %12s %12s\n", "file", "seed", "rows", "last_step",
                "final_ret", "final_succ", "mean_ret", "succ_auc");
  os << buf;
  std::vector<double> fr, fs_, mr, auc;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-20s %8ld %6ld %10ld %12.4f %12.4f %12.4f %12.4f\n", r.file.c_str(), r.seed, r.rows,
                  r.last_step, r.final_return, r.final_success, r.mean_return, r.success_auc);
    os << buf;
    fr.push_back(r.final_return);
    fs_.push_back(r.final_success);
    mr.push_back(r.mean_return);
    auc.push_back(r.success_auc);
  }
  if (rows.empty()) {
    os << "no run CSVs found\n";
    return;
  }
  const auto line = [&](const char* label, auto pick) {
    std::snprintf(buf, sizeof buf, "%-20s %8s %6s %10s %12.4f %12.4f %12.4f %12.4f\n", label, "", "", "",
                  pick(aggregate(fr)), pick(aggregate(fs_)), pick(aggregate(mr)), pick(aggregate(auc)));
    os << buf;
  };
  line("mean", [](const Aggregate& a) { return a.mean; });
  line("std", [](const Aggregate& a) { return a.stddev; });
}

}  // namespace bee::harness
