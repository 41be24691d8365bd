#include "bee/harness/csv.hpp"

#include <cstdio>
#include <sstream>

#include "bee/errors.hpp"

namespace bee::harness {

namespace {

using Field = std::optional<double> diag::RunRecord::*;

// Optional columns, between step and seed.
const std::vector<Field>& optional_fields() {
  static const std::vector<Field> f{
      &diag::RunRecord::episode_return, &diag::RunRecord::success,        &diag::RunRecord::q_learned_mean,
      &diag::RunRecord::q_mc_mean,      &diag::RunRecord::gap,            &diag::RunRecord::gap_normalized,
      &diag::RunRecord::delta_mu_pi,    &diag::RunRecord::lambda_used,    &diag::RunRecord::alpha,
      &diag::RunRecord::loss_q,         &diag::RunRecord::loss_v,         &diag::RunRecord::loss_pi};
  return f;
}

std::string format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> c{"step",   "episode_return", "success", "q_learned_mean", "q_mc_mean",
                                          "gap",    "gap_normalized", "delta_mu_pi", "lambda_used", "alpha",
                                          "loss_q", "loss_v",         "loss_pi", "seed"};
  return c;
}

std::string csv_header() {
  std::string h;
  for (const auto& c : csv_columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

std::string csv_row(const diag::RunRecord& r) {
  std::string s = std::to_string(r.step);
  for (Field f : optional_fields()) {
    s += ',';
    if (const auto& v = r.*f) s += format(*v);
  }
  s += ',' + std::to_string(r.seed);
  return s;
}

diag::RunRecord parse_csv_row(const std::string& line) {
  const auto parts = split(line);
  if (parts.size() != csv_columns().size())
    throw ArgumentError("csv row has " + std::to_string(parts.size()) + " fields, expected " +
                        std::to_string(csv_columns().size()));
  diag::RunRecord r;
  try {
    r.step = std::stol(parts.front());
    for (std::size_t i = 0; i < optional_fields().size(); ++i)
      if (!parts[i + 1].empty()) r.*optional_fields()[i] = std::stod(parts[i + 1]);
    r.seed = std::stol(parts.back());
  } catch (const std::logic_error&) {
    throw ArgumentError("malformed csv row: " + line);
  }
  return r;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw ArgumentError("cannot write '" + path + "'");
  out_ << csv_header() << '\n';
  out_.flush();
}

void CsvWriter::write(const diag::RunRecord& r) {
  out_ << csv_row(r) << '\n';
  out_.flush();
}

std::vector<diag::RunRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || split(line) != csv_columns()) throw ArgumentError("'" + path + "' has an unexpected header");
  std::vector<diag::RunRecord> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(parse_csv_row(line));
  return rows;
}

}  // namespace bee::harness
