#include "avoid/sequence_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "avoid/bits.hpp"

namespace avoid {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string parse_sequence(std::string_view text) {
  std::string bits;
  for (char c : text) {
    if (c == '\n' || c == '\r' || c == ' ') continue;
    if (c != '0' && c != '1')
      throw std::invalid_argument("sequence file has non-bit characters");
    bits.push_back(c);
  }
  return bits;
}

std::vector<std::string> parse_grid_rows(std::string_view text) {
  std::vector<std::string> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!is_bit_string(line))
      throw std::invalid_argument("grid file has non-bit characters");
    rows.emplace_back(line);
  }
  for (const auto& r : rows)
    if (r.size() != rows[0].size())
      throw std::invalid_argument("grid rows have uneven lengths");
  return rows;
}

std::string format_sequence(std::string_view bits) {
  return std::string(bits) + "\n";
}

std::string format_grid_rows(const std::vector<std::string>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

std::string format_region(const Box& region, int dim) {
  std::ostringstream os;
  for (int a = 0; a < dim; ++a) {
    if (a) os << 'x';
    os << region.lo[a] << ".." << region.hi[a];
  }
  return os.str();
}

Box parse_region(std::string_view text, int dim) {
  Box region;
  int axis = 0;
  std::size_t pos = 0;
  while (pos <= text.size() && axis < dim) {
    std::size_t end = text.find('x', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string part(text.substr(pos, end - pos));
    auto dots = part.find("..");
    if (dots == std::string::npos)
      throw std::invalid_argument("region axis needs lo..hi");
    try {
      region.lo[axis] = std::stoll(part.substr(0, dots));
      region.hi[axis] = std::stoll(part.substr(dots + 2));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad region bound in '" + part + "'");
    }
    ++axis;
    pos = end + 1;
    if (end == text.size()) break;
  }
  if (axis != dim)
    throw std::invalid_argument("region needs exactly " + std::to_string(dim) +
                                " axes");
  return region;
}

std::string format_grid_file(const GridFile& grid) {
  std::ostringstream os;
  os << "d=" << grid.dim << " region=" << format_region(grid.region, grid.dim)
     << "\n";
  std::uint64_t line_len =
      static_cast<std::uint64_t>(grid.region.hi[grid.dim - 1] -
                                 grid.region.lo[grid.dim - 1]);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    os << (grid.cells[i] ? '1' : '0');
    if ((i + 1) % line_len == 0) os << '\n';
  }
  return os.str();
}

GridFile parse_grid_file(std::string_view text) {
  GridFile grid;
  std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos)
    throw std::invalid_argument("grid file missing header");
  std::string header(text.substr(0, eol));
  if (header.rfind("d=", 0) != 0)
    throw std::invalid_argument("grid header must start with d=");
  std::size_t space = header.find(' ');
  if (space == std::string::npos || header.find("region=", space + 1) == std::string::npos)
    throw std::invalid_argument("grid header missing region=");
  grid.dim = std::stoi(header.substr(2, space - 2));
  if (grid.dim < 1 || grid.dim > kMaxGridDim)
    throw std::invalid_argument("grid dimension out of range");
  grid.region = parse_region(header.substr(space + 1 + 7), grid.dim);

  std::uint64_t volume = 1;
  for (int a = 0; a < grid.dim; ++a) {
    if (grid.region.hi[a] <= grid.region.lo[a])
      throw std::invalid_argument("grid region axis is empty");
    volume *= static_cast<std::uint64_t>(grid.region.hi[a] - grid.region.lo[a]);
  }
  for (std::size_t i = eol + 1; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n' || c == '\r') continue;
    if (c != '0' && c != '1')
      throw std::invalid_argument("grid body has non-bit characters");
    grid.cells.push_back(c == '1' ? 1 : 0);
  }
  if (grid.cells.size() != volume)
    throw std::invalid_argument("grid body size disagrees with region");
  return grid;
}

}  // namespace avoid
