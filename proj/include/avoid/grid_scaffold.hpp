#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "avoid/rational.hpp"

namespace avoid {

inline constexpr int kMaxGridDim = 3;

// Axes beyond the configured dimension stay zero.
using Coord = std::array<std::int64_t, kMaxGridDim>;

// Half-open box: [lo[a], hi[a]) on each axis.
struct Box {
  Coord lo{};
  Coord hi{};
};

// Fixed bijection Z^2 <-> N: (0,0) -> 0, then counterclockwise square
// rings; ring r covers indices (2r-1)^2 .. (2r+1)^2 - 1 and is entered
// at (r, -r+1).
std::uint64_t spiral_index(std::int64_t x, std::int64_t y);
std::pair<std::int64_t, std::int64_t> spiral_point(std::uint64_t idx);

struct GridLadder {
  int dim = 2;
  std::vector<std::uint64_t> periods;  // n_0 | n_1 | ..., with 2*n_j <= n_{j+1}
};

struct GridPositionInfo {
  Coord point{};
  std::uint32_t rank = 0;  // 1..t-1, or t+1 above the ladder
  bool is_primary = false;
  Coord representative{};
  std::uint64_t source_index = 0;
};

struct GridSourceInterval {
  std::uint64_t a = 0;  // [a, b) in source indices
  std::uint64_t b = 0;
};

struct CubeDecomposition {
  Box cube{};
  std::uint32_t cutoff_rank = 0;  // smallest i with n_i >= side
  std::vector<GridSourceInterval> intervals;  // sorted by a, disjoint
  std::uint64_t small_rank_count = 0;
  std::uint64_t total_interval_len = 0;
  bool density_ok = false;  // small/side^d <= 4 * sum_{j<i} n_{j-1}/n_j
};

// The level-j rule duplicates the centered cube [-n_{j-1}, n_{j-1})^d with
// every shift in (n_j Z)^d. A point's rank is the smallest level whose
// duplication window contains it; its class is the n_rank-lattice coset of
// the reduced point. Source indices follow the fill order: rank ascending,
// then lexicographic by representative coordinates. Positions above the
// ladder (rank t+1) are their own class; among them the order is by
// master-cell ring (cells of side 2*n_{t-1} tiling the plane), then cell,
// then coordinates, which keeps the order a well-order while agreeing with
// plain lexicographic order inside the master cell [-n_{t-1}, n_{t-1})^d.
class GridScaffold {
 public:
  explicit GridScaffold(GridLadder ladder);

  const GridLadder& ladder() const { return ladder_; }
  int dim() const { return ladder_.dim; }
  std::size_t depth() const { return ladder_.periods.size(); }

  bool in_level_window(const Coord& p, std::uint32_t level) const;
  GridPositionInfo classify(const Coord& p) const;

  // Exact number of rank-j points inside a box.
  std::uint64_t rank_count_in_box(std::uint32_t rank, const Box& box) const;

  // Total primaries of a configured rank (they all live in the rank's cell).
  std::uint64_t primaries_of_rank(std::uint32_t rank) const;

  // Region fill, row-major with the last axis fastest. The parallel entry
  // point computes every cell independently; the serial variant resolves
  // secondaries through a representative cache and is kept for testing.
  std::vector<std::uint8_t> build_region(std::string_view source,
                                         const Box& region) const;
  std::vector<std::uint8_t> build_region_serial(std::string_view source,
                                                const Box& region) const;

  // Least source prefix length that covers the region.
  std::uint64_t source_demand(const Box& region) const;

  CubeDecomposition decompose_cube(const Box& cube) const;

 private:
  std::uint64_t axis_count(std::uint32_t mask, std::int64_t lo,
                           std::int64_t hi) const;
  std::uint64_t box_count(std::uint32_t mask, const Box& box) const;
  std::uint64_t lex_before_in_rank(std::uint32_t rank, const Coord& q) const;
  std::uint64_t top_rank_index(const Coord& p) const;
  void check_box(const Box& box) const;

  GridLadder ladder_;
  std::int64_t master_;  // n_{t-1}
  // residue_count_[mask][v]: residues c < v (mod n_{t-1}) inside every
  // level window selected by mask; mask bit j-1 stands for level j.
  std::vector<std::vector<std::uint32_t>> residue_count_;
  std::vector<std::uint64_t> rank_start_;  // fill-order offset per rank
  std::uint64_t top_start_ = 0;            // offset of rank t+1
  std::uint64_t free_per_cell_ = 0;        // rank-(t+1) points per cell
};

}  // namespace avoid
