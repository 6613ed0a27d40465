#include "irgnm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace irgnm {

std::string format_full(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc()) throw std::runtime_error("csv: cannot parse number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("csv: cannot open for reading: " + path);
  return f;
}

}  // namespace

void write_field_csv(const std::string& path, const Grid2D& grid, const Vector& values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("write_field_csv: field size does not match grid");
  auto f = open_out(path);
  f << "nx,ny,h\n";
  f << grid.nx << ',' << grid.ny << ',' << format_full(grid.h) << '\n';
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      if (i) f << ',';
      f << format_full(values[grid.idx(i, j)]);
    }
    f << '\n';
  }
}

std::pair<Grid2D, Vector> read_field_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("csv: empty field file " + path);
  if (!std::getline(f, line)) throw std::runtime_error("csv: missing grid header in " + path);
  auto cells = split_csv_line(line);
  if (cells.size() != 3) throw std::runtime_error("csv: malformed grid header in " + path);
  Grid2D grid(static_cast<Index>(parse_double(cells[0])), static_cast<Index>(parse_double(cells[1])),
              parse_double(cells[2]));
  Vector values(grid.size());
  for (Index j = 0; j < grid.ny; ++j) {
    if (!std::getline(f, line)) throw std::runtime_error("csv: truncated field file " + path);
    auto row = split_csv_line(line);
    if (static_cast<Index>(row.size()) != grid.nx)
      throw std::runtime_error("csv: row width mismatch in " + path);
    for (Index i = 0; i < grid.nx; ++i) values[grid.idx(i, j)] = parse_double(row[i]);
  }
  return {grid, values};
}

void write_observations_csv(const std::string& path, const std::vector<Vector>& seq) {
  if (seq.empty()) throw std::invalid_argument("write_observations_csv: empty sequence");
  const Index dim = seq.front().size();
  for (const auto& y : seq)
    if (y.size() != dim)
      throw std::invalid_argument("write_observations_csv: inconsistent dimensions");
  auto f = open_out(path);
  f << "index";
  for (Index k = 0; k < dim; ++k) f << ",v" << k;
  f << '\n';
  for (std::size_t n = 0; n < seq.size(); ++n) {
    f << (n + 1);
    for (Index k = 0; k < dim; ++k) f << ',' << format_full(seq[n][k]);
    f << '\n';
  }
}

std::vector<Vector> read_observations_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("csv: empty observation file " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "index")
    throw std::runtime_error("csv: malformed observation header in " + path);
  const Index dim = static_cast<Index>(header.size()) - 1;
  std::vector<Vector> seq;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto row = split_csv_line(line);
    if (static_cast<Index>(row.size()) != dim + 1)
      throw std::runtime_error("csv: observation row width mismatch in " + path);
    Vector y(dim);
    for (Index k = 0; k < dim; ++k) y[k] = parse_double(row[k + 1]);
    seq.push_back(std::move(y));
  }
  return seq;
}

}  // namespace irgnm
