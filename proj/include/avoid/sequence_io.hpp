#pragma once

#include <string>
#include <vector>

#include "avoid/grid_scaffold.hpp"

namespace avoid {

// Sequence files hold one line of '0'/'1'. Raw grid files hold one line
// per row. Scaffold grid files carry a region header:
//   d=<d> region=<lo1>..<hi1>x<lo2>..<hi2>...
// followed by row-major lines, last axis fastest.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::string parse_sequence(std::string_view text);  // validates bits
std::vector<std::string> parse_grid_rows(std::string_view text);

std::string format_sequence(std::string_view bits);
std::string format_grid_rows(const std::vector<std::string>& rows);

struct GridFile {
  int dim = 2;
  Box region;
  std::vector<std::uint8_t> cells;  // row-major, last axis fastest
};

std::string format_grid_file(const GridFile& grid);
GridFile parse_grid_file(std::string_view text);

Box parse_region(std::string_view text, int dim);  // "a..bxc..d"
std::string format_region(const Box& region, int dim);

}  // namespace avoid
