#include "avoid/grid_scaffold.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

namespace avoid {

namespace {

std::uint64_t isqrt_u64(std::uint64_t v) {
  if (v == 0) return 0;
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::uint64_t spiral_index(std::int64_t x, std::int64_t y) {
  std::int64_t r = std::max(x < 0 ? -x : x, y < 0 ? -y : y);
  if (r == 0) return 0;
  std::uint64_t base = static_cast<std::uint64_t>(2 * r - 1) *
                       static_cast<std::uint64_t>(2 * r - 1);
  if (x == r && y != -r) return base + static_cast<std::uint64_t>(y + r - 1);
  if (y == r) return base + static_cast<std::uint64_t>(2 * r + (r - 1 - x));
  if (x == -r) return base + static_cast<std::uint64_t>(4 * r + (r - 1 - y));
  return base + static_cast<std::uint64_t>(6 * r + (x + r - 1));  // y == -r
}

std::pair<std::int64_t, std::int64_t> spiral_point(std::uint64_t idx) {
  if (idx == 0) return {0, 0};
  std::int64_t r = static_cast<std::int64_t>((isqrt_u64(idx) + 1) / 2);
  std::uint64_t base = static_cast<std::uint64_t>(2 * r - 1) *
                       static_cast<std::uint64_t>(2 * r - 1);
  std::int64_t offset = static_cast<std::int64_t>(idx - base);
  std::int64_t seg = offset / (2 * r), o = offset % (2 * r);
  switch (seg) {
    case 0: return {r, -r + 1 + o};
    case 1: return {r - 1 - o, r};
    case 2: return {-r, r - 1 - o};
    default: return {-r + 1 + o, -r};
  }
}

GridScaffold::GridScaffold(GridLadder ladder) : ladder_(std::move(ladder)) {
  const auto& periods = ladder_.periods;
  if (ladder_.dim < 1 || ladder_.dim > kMaxGridDim)
    throw std::invalid_argument("grid dimension must be 1.." +
                                std::to_string(kMaxGridDim));
  if (periods.empty())
    throw std::invalid_argument("grid ladder needs at least one period");
  for (std::size_t j = 1; j < periods.size(); ++j) {
    if (periods[j] % periods[j - 1] != 0)
      throw std::invalid_argument("grid ladder pair (" +
                                  std::to_string(periods[j - 1]) + "," +
                                  std::to_string(periods[j]) +
                                  ") breaks divisibility");
    if (periods[j] < 2 * periods[j - 1])
      throw std::invalid_argument("grid ladder needs 2*n_j <= n_{j+1} at (" +
                                  std::to_string(periods[j - 1]) + "," +
                                  std::to_string(periods[j]) + ")");
  }
  const std::size_t t = periods.size();
  if (periods[t - 1] > (std::uint64_t(1) << 30))
    throw std::invalid_argument("grid ladder top period too large");
  master_ = static_cast<std::int64_t>(periods[t - 1]);

  const std::uint32_t masks = t >= 2 ? (1u << (t - 1)) : 1u;
  if (static_cast<std::uint64_t>(masks) * (master_ + 1) > (1u << 26))
    throw std::invalid_argument("grid ladder residue tables too large");
  residue_count_.assign(masks, {});
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    auto& tab = residue_count_[mask];
    tab.assign(static_cast<std::size_t>(master_) + 1, 0);
    for (std::int64_t v = 0; v < master_; ++v) {
      bool ok = true;
      for (std::size_t j = 1; j < t && ok; ++j) {
        if (!(mask & (1u << (j - 1)))) continue;
        std::int64_t n = static_cast<std::int64_t>(periods[j]);
        std::int64_t h = static_cast<std::int64_t>(periods[j - 1]);
        ok = floor_mod(v + h, n) < 2 * h;
      }
      tab[v + 1] = tab[v] + (ok ? 1 : 0);
    }
  }

  rank_start_.assign(t + 2, 0);
  std::uint64_t acc = 0;
  for (std::uint32_t j = 1; j + 1 <= t; ++j) {
    rank_start_[j] = acc;
    std::int64_t h = static_cast<std::int64_t>(periods[j - 1]);
    Box cell;
    for (int a = 0; a < ladder_.dim; ++a) {
      cell.lo[a] = -h;
      cell.hi[a] = h;
    }
    acc += rank_count_in_box(j, cell);
  }
  top_start_ = acc;

  Box master_cell;
  for (int a = 0; a < ladder_.dim; ++a) {
    master_cell.lo[a] = -master_;
    master_cell.hi[a] = master_;
  }
  std::uint64_t occupied = 0;
  for (std::uint32_t j = 1; j + 1 <= t; ++j)
    occupied += rank_count_in_box(j, master_cell);
  free_per_cell_ = ipow(static_cast<std::uint64_t>(2 * master_), ladder_.dim) -
                   occupied;
}

bool GridScaffold::in_level_window(const Coord& p, std::uint32_t level) const {
  std::int64_t n = static_cast<std::int64_t>(ladder_.periods[level]);
  std::int64_t h = static_cast<std::int64_t>(ladder_.periods[level - 1]);
  for (int a = 0; a < ladder_.dim; ++a)
    if (floor_mod(p[a] + h, n) >= 2 * h) return false;
  return true;
}

std::uint64_t GridScaffold::axis_count(std::uint32_t mask, std::int64_t lo,
                                       std::int64_t hi) const {
  if (hi <= lo) return 0;
  const auto& tab = residue_count_[mask];
  auto upto = [&](std::int64_t x) {  // count of matching c in [0_shifted, x)
    std::int64_t q = floor_div(x, master_);
    std::int64_t r = floor_mod(x, master_);
    return q * static_cast<std::int64_t>(tab[master_]) +
           static_cast<std::int64_t>(tab[r]);
  };
  return static_cast<std::uint64_t>(upto(hi) - upto(lo));
}

std::uint64_t GridScaffold::box_count(std::uint32_t mask, const Box& box) const {
  std::uint64_t prod = 1;
  for (int a = 0; a < ladder_.dim; ++a) {
    prod *= axis_count(mask, box.lo[a], box.hi[a]);
    if (prod == 0) return 0;
  }
  return prod;
}

std::uint64_t GridScaffold::rank_count_in_box(std::uint32_t rank,
                                              const Box& box) const {
  // Members of the rank's window minus everything caught by a lower level,
  // by inclusion-exclusion over the lower levels.
  const std::uint32_t self = 1u << (rank - 1);
  const std::uint32_t lowers = self - 1;
  std::int64_t total = 0;
  for (std::uint32_t sub = lowers;; sub = (sub - 1) & lowers) {
    int sign = (std::popcount(sub) % 2 == 0) ? 1 : -1;
    total += sign * static_cast<std::int64_t>(box_count(self | sub, box));
    if (sub == 0) break;
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t GridScaffold::primaries_of_rank(std::uint32_t rank) const {
  std::int64_t h = static_cast<std::int64_t>(ladder_.periods[rank - 1]);
  Box cell;
  for (int a = 0; a < ladder_.dim; ++a) {
    cell.lo[a] = -h;
    cell.hi[a] = h;
  }
  return rank_count_in_box(rank, cell);
}

std::uint64_t GridScaffold::lex_before_in_rank(std::uint32_t rank,
                                               const Coord& q) const {
  std::int64_t h = static_cast<std::int64_t>(ladder_.periods[rank - 1]);
  std::uint64_t before = 0;
  for (int split = 0; split < ladder_.dim; ++split) {
    Box box;
    for (int a = 0; a < ladder_.dim; ++a) {
      if (a < split) {
        box.lo[a] = q[a];
        box.hi[a] = q[a] + 1;
      } else if (a == split) {
        box.lo[a] = -h;
        box.hi[a] = q[a];
      } else {
        box.lo[a] = -h;
        box.hi[a] = h;
      }
    }
    before += rank_count_in_box(rank, box);
  }
  return before;
}

std::uint64_t GridScaffold::top_rank_index(const Coord& p) const {
  const std::size_t t = depth();
  const std::int64_t side = 2 * master_;
  Coord cell{};
  std::int64_t ring = 0;
  for (int a = 0; a < ladder_.dim; ++a) {
    cell[a] = floor_div(p[a] + master_, side);
    ring = std::max<std::int64_t>(ring, cell[a] < 0 ? -cell[a] : cell[a]);
  }

  // Cells strictly inside the ring, then lex-earlier cells of the same ring.
  auto lex_before_cube = [&](std::int64_t radius) {
    if (radius < 0) return std::uint64_t(0);
    std::uint64_t s = static_cast<std::uint64_t>(2 * radius + 1);
    std::uint64_t res = 0;
    for (int i = 0; i < ladder_.dim; ++i) {
      std::int64_t less = std::clamp<std::int64_t>(
          cell[i] + radius, 0, static_cast<std::int64_t>(s));
      res += static_cast<std::uint64_t>(less) * ipow(s, ladder_.dim - 1 - i);
      if (cell[i] < -radius || cell[i] > radius) break;  // prefix left the cube
    }
    return res;
  };
  std::uint64_t cells_before = 0;
  if (ring > 0) {
    cells_before = ipow(static_cast<std::uint64_t>(2 * ring - 1), ladder_.dim) +
                   lex_before_cube(ring) - lex_before_cube(ring - 1);
  }

  // Rank-(t+1) points lex-before p inside its own cell.
  Box cell_box;
  for (int a = 0; a < ladder_.dim; ++a) {
    cell_box.lo[a] = cell[a] * side - master_;
    cell_box.hi[a] = cell[a] * side + master_;
  }
  std::uint64_t in_cell = 0;
  for (int split = 0; split < ladder_.dim; ++split) {
    Box box = cell_box;
    for (int a = 0; a < split; ++a) {
      box.lo[a] = p[a];
      box.hi[a] = p[a] + 1;
    }
    box.hi[split] = p[split];
    std::uint64_t vol = 1;
    for (int a = 0; a < ladder_.dim; ++a)
      vol *= static_cast<std::uint64_t>(std::max<std::int64_t>(
          0, box.hi[a] - box.lo[a]));
    std::uint64_t lower = 0;
    for (std::uint32_t j = 1; j + 1 <= t; ++j)
      lower += rank_count_in_box(j, box);
    in_cell += vol - lower;
  }

  return top_start_ + free_per_cell_ * cells_before + in_cell;
}

GridPositionInfo GridScaffold::classify(const Coord& p) const {
  const std::size_t t = depth();
  GridPositionInfo info;
  info.point = p;
  info.rank = static_cast<std::uint32_t>(t + 1);
  for (std::uint32_t j = 1; j + 1 <= t; ++j) {
    if (in_level_window(p, j)) {
      info.rank = j;
      break;
    }
  }
  if (info.rank <= t - 1 && t >= 2) {
    std::int64_t n = static_cast<std::int64_t>(ladder_.periods[info.rank]);
    std::int64_t h = static_cast<std::int64_t>(ladder_.periods[info.rank - 1]);
    for (int a = 0; a < ladder_.dim; ++a)
      info.representative[a] = floor_mod(p[a] + h, n) - h;
    info.source_index =
        rank_start_[info.rank] + lex_before_in_rank(info.rank, info.representative);
  } else {
    info.representative = p;
    info.source_index = top_rank_index(p);
  }
  info.is_primary = info.representative == p;
  return info;
}

void GridScaffold::check_box(const Box& box) const {
  std::uint64_t vol = 1;
  for (int a = 0; a < ladder_.dim; ++a) {
    if (box.hi[a] <= box.lo[a])
      throw std::invalid_argument("empty or inverted box axis");
    vol *= static_cast<std::uint64_t>(box.hi[a] - box.lo[a]);
    if (vol > (std::uint64_t(1) << 24))
      throw std::invalid_argument("region volume above the 2^24 cap");
  }
  for (int a = ladder_.dim; a < kMaxGridDim; ++a)
    if (box.lo[a] != 0 || box.hi[a] != 0)
      throw std::invalid_argument("box uses axes beyond the grid dimension");
}

std::uint64_t GridScaffold::source_demand(const Box& region) const {
  check_box(region);
  Box b = region;
  for (int a = ladder_.dim; a < kMaxGridDim; ++a) b.hi[a] = b.lo[a] + 1;
  std::uint64_t vol = 1;
  for (int a = 0; a < kMaxGridDim; ++a)
    vol *= static_cast<std::uint64_t>(b.hi[a] - b.lo[a]);
  std::uint64_t demand = 0;
#pragma omp parallel for reduction(max : demand) schedule(static)
  for (std::int64_t f = 0; f < static_cast<std::int64_t>(vol); ++f) {
    Coord p{};
    std::int64_t rem = f;
    for (int a = kMaxGridDim - 1; a >= 0; --a) {
      std::int64_t len = b.hi[a] - b.lo[a];
      p[a] = b.lo[a] + rem % len;
      rem /= len;
    }
    for (int a = ladder_.dim; a < kMaxGridDim; ++a) p[a] = 0;
    std::uint64_t need = classify(p).source_index + 1;
    demand = std::max(demand, need);
  }
  return demand;
}

std::vector<std::uint8_t> GridScaffold::build_region(std::string_view source,
                                                     const Box& region) const {
  check_box(region);
  std::uint64_t need = source_demand(region);
  if (source.size() < need)
    throw std::invalid_argument("source exhausted: region needs " +
                                std::to_string(need) + " bits, have " +
                                std::to_string(source.size()));
  Box b = region;
  for (int a = ladder_.dim; a < kMaxGridDim; ++a) b.hi[a] = b.lo[a] + 1;
  std::uint64_t vol = 1;
  for (int a = 0; a < kMaxGridDim; ++a)
    vol *= static_cast<std::uint64_t>(b.hi[a] - b.lo[a]);
  std::vector<std::uint8_t> out(vol, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t f = 0; f < static_cast<std::int64_t>(vol); ++f) {
    Coord p{};
    std::int64_t rem = f;
    for (int a = kMaxGridDim - 1; a >= 0; --a) {
      std::int64_t len = b.hi[a] - b.lo[a];
      p[a] = b.lo[a] + rem % len;
      rem /= len;
    }
    out[f] = source[classify(p).source_index] == '1' ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> GridScaffold::build_region_serial(
    std::string_view source, const Box& region) const {
  check_box(region);
  Box b = region;
  for (int a = ladder_.dim; a < kMaxGridDim; ++a) b.hi[a] = b.lo[a] + 1;
  std::uint64_t vol = 1;
  for (int a = 0; a < kMaxGridDim; ++a)
    vol *= static_cast<std::uint64_t>(b.hi[a] - b.lo[a]);
  std::vector<std::uint8_t> out(vol, 0);
  std::map<Coord, std::uint8_t> cache;  // representative -> bit
  for (std::uint64_t f = 0; f < vol; ++f) {
    Coord p{};
    std::int64_t rem = static_cast<std::int64_t>(f);
    for (int a = kMaxGridDim - 1; a >= 0; --a) {
      std::int64_t len = b.hi[a] - b.lo[a];
      p[a] = b.lo[a] + rem % len;
      rem /= len;
    }
    GridPositionInfo info = classify(p);
    auto it = cache.find(info.representative);
    if (it == cache.end()) {
      if (info.source_index >= source.size())
        throw std::invalid_argument("source exhausted at source index " +
                                    std::to_string(info.source_index));
      it = cache.emplace(info.representative,
                         source[info.source_index] == '1' ? 1 : 0).first;
    }
    out[f] = it->second;
  }
  return out;
}

CubeDecomposition GridScaffold::decompose_cube(const Box& cube) const {
  check_box(cube);
  const std::size_t t = depth();
  std::int64_t k = cube.hi[0] - cube.lo[0];
  for (int a = 1; a < ladder_.dim; ++a)
    if (cube.hi[a] - cube.lo[a] != k)
      throw std::invalid_argument("decompose_cube needs equal sides");
  if (static_cast<std::uint64_t>(k) > ladder_.periods[t - 1])
    throw std::invalid_argument("ladder too short for cube side " +
                                std::to_string(k));

  CubeDecomposition out;
  out.cube = cube;
  std::uint32_t cutoff = 0;
  while (ladder_.periods[cutoff] < static_cast<std::uint64_t>(k)) ++cutoff;
  out.cutoff_rank = cutoff;

  // Vertical lines in lex order over the leading axes, bottom to top.
  const int d = ladder_.dim;
  std::uint64_t lines = 1;
  for (int a = 0; a + 1 < d; ++a)
    lines *= static_cast<std::uint64_t>(k);
  bool run_open = false;
  GridSourceInterval cur;
  for (std::uint64_t line = 0; line < lines; ++line) {
    Coord p{};
    std::uint64_t rem = line;
    for (int a = d - 2; a >= 0; --a) {
      p[a] = cube.lo[a] + static_cast<std::int64_t>(rem % k);
      rem /= k;
    }
    for (std::int64_t y = cube.lo[d - 1]; y < cube.hi[d - 1]; ++y) {
      p[d - 1] = y;
      GridPositionInfo info = classify(p);
      if (info.rank < cutoff) {
        ++out.small_rank_count;
        continue;
      }
      if (run_open && info.source_index == cur.b) {
        ++cur.b;
      } else {
        if (run_open) out.intervals.push_back(cur);
        cur = GridSourceInterval{info.source_index, info.source_index + 1};
        run_open = true;
      }
    }
  }
  if (run_open) out.intervals.push_back(cur);

  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const GridSourceInterval& l, const GridSourceInterval& r) {
              return l.a < r.a;
            });
  for (std::size_t i = 0; i + 1 < out.intervals.size(); ++i)
    if (out.intervals[i].b > out.intervals[i + 1].a)
      throw std::logic_error("cube decomposition produced overlapping runs");
  for (const auto& iv : out.intervals) out.total_interval_len += iv.b - iv.a;

  Rational bound = 0;
  for (std::uint32_t j = 1; j < cutoff; ++j)
    bound += Rational(ladder_.periods[j - 1], ladder_.periods[j]);
  std::uint64_t volume = ipow(static_cast<std::uint64_t>(k), d);
  out.density_ok = Rational(out.small_rank_count, volume) <= 4 * bound;
  return out;
}

}  // namespace avoid
