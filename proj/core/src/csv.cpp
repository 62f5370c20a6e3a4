#include "mfsde/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mfsde::csv {
namespace {

std::ofstream open_out(const std::string& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + file + " for writing");
  return os;
}

std::ifstream open_in(const std::string& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file);
  return is;
}

void expect_header(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw std::runtime_error("expected CSV header '" + header + "'");
  }
}

std::vector<std::pair<double, double>> read_pairs(std::istream& is,
                                                  const std::string& header) {
  expect_header(is, header);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split(line);
    if (cols.size() != 2) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected 2 columns");
    }
    rows.emplace_back(parse_double(cols[0]), parse_double(cols[1]));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delimiter)) out.push_back(cell);
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

void write_path(std::ostream& os, const SamplePath& path) {
  os << "t,value\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    os << format_double(path.grid.time(i)) << ',' << format_double(path.values[i])
       << '\n';
  }
}

void write_path(const std::string& file, const SamplePath& path) {
  auto os = open_out(file);
  write_path(os, path);
}

SamplePath read_path(std::istream& is) {
  const auto rows = read_pairs(is, "t,value");
  if (rows.size() < 2 || rows.front().first != 0.0) {
    throw std::runtime_error("path CSV must start at t = 0 with at least two rows");
  }
  const GridSpec grid(rows.back().first, rows.size() - 1);
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].first - grid.time(i)) > 1e-9 * grid.horizon) {
      throw std::runtime_error("path CSV is not on a uniform grid");
    }
    values.push_back(rows[i].second);
  }
  return SamplePath(grid, std::move(values));
}

SamplePath read_path(const std::string& file) {
  auto is = open_in(file);
  return read_path(is);
}

void write_grid_function(std::ostream& os, const GridFunction& f) {
  os << "t,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << format_double(f.node(i)) << ',' << format_double(f.values[i]) << '\n';
  }
}

GridFunction read_grid_function(std::istream& is) {
  const auto rows = read_pairs(is, "t,value");
  if (rows.size() < 2) throw std::runtime_error("grid function needs two rows");
  const double a = rows.front().first;
  const double step = (rows.back().first - a) / static_cast<double>(rows.size() - 1);
  std::vector<double> values;
  for (const auto& r : rows) values.push_back(r.second);
  return GridFunction(a, step, std::move(values));
}

void write_jumps(std::ostream& os, const JumpTrain& jumps) {
  os << "tau,mark\n";
  for (std::size_t i = 0; i < jumps.count(); ++i) {
    os << format_double(jumps.times[i]) << ',' << format_double(jumps.marks[i]) << '\n';
  }
}

void write_jumps(const std::string& file, const JumpTrain& jumps) {
  auto os = open_out(file);
  write_jumps(os, jumps);
}

JumpTrain read_jumps(std::istream& is, double rate, double horizon) {
  JumpTrain train;
  train.rate = rate;
  train.horizon = horizon;
  for (const auto& [t, m] : read_pairs(is, "tau,mark")) {
    train.times.push_back(t);
    train.marks.push_back(m);
  }
  validate(train);
  return train;
}

}  // namespace mfsde::csv
