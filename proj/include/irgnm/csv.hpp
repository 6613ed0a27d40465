#pragma once

#include <string>
#include <vector>

#include "irgnm/grid.hpp"

namespace irgnm {

// All CSV output is locale-independent (std::to_chars / std::from_chars)
// and prints doubles with 17 significant digits, enough to round-trip and
// to make repeated runs byte-comparable.

std::string format_full(double v);

double parse_double(const std::string& s);

std::vector<std::string> split_csv_line(const std::string& line);

// Field snapshot: a two-line header (column names, then nx/ny/h), followed
// by ny rows of nx values, row-major by grid row.
void write_field_csv(const std::string& path, const Grid2D& grid, const Vector& values);
std::pair<Grid2D, Vector> read_field_csv(const std::string& path);

// Observation sequence: header names one index column plus one column per
// component (their count is the dimension), then one row per observation
// in stream order.
void write_observations_csv(const std::string& path, const std::vector<Vector>& seq);
std::vector<Vector> read_observations_csv(const std::string& path);

}  // namespace irgnm
