#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "avoid/rational.hpp"

namespace avoid {

// Strictly increasing chain n_0 | n_1 | ... | n_{t-1}. Level j duplicates
// the prefix [0, n_{j-1}) with period n_j, so the implied mixed radices
// r_0 = n_0, r_j = n_j / n_{j-1} must all be at least 2.
class PeriodLadder {
 public:
  explicit PeriodLadder(std::vector<std::uint64_t> periods);
  static PeriodLadder parse(std::string_view csv);  // "2,8,32"

  std::size_t depth() const { return periods_.size(); }
  std::uint64_t period(std::size_t j) const { return periods_[j]; }
  std::uint64_t radix(std::size_t j) const;
  const std::vector<std::uint64_t>& periods() const { return periods_; }
  std::string to_string() const;

 private:
  std::vector<std::uint64_t> periods_;
};

// Builds a ladder n_0, n_0*r, n_0*r^2, ... of the given depth whose ratio
// sum satisfies sum_j n_{j-1}/n_j < epsilon.
PeriodLadder make_ladder(std::uint64_t n0, std::size_t depth,
                         const Rational& epsilon);

struct PositionInfo {
  std::uint64_t position = 0;
  std::uint32_t rank = 0;  // 1..t-1, or t+1 when no configured digit is zero
  bool is_primary = false;
  std::uint64_t representative = 0;  // leftmost member of the class
  std::uint64_t source_index = 0;    // index into the source sequence v
};

// Mixed-radix view: digit 0 is x mod n_0, digit j is (x div n_{j-1}) mod r_j.
// The rank is the smallest j >= 1 whose digit is zero; the representative
// zeroes everything above that digit (x mod n_rank).
PositionInfo classify_position(std::uint64_t x, const PeriodLadder& ladder);

// Exact fresh-bit density prod_j (1 - n_j/n_{j+1}).
Rational density_D(const PeriodLadder& ladder);

// Number of primary positions in [0, n); closed-form digit counting.
std::uint64_t fresh_count(const PeriodLadder& ladder, std::uint64_t n);

// Position of the idx-th primary (inverse of fresh_count along primaries).
std::uint64_t nth_primary(const PeriodLadder& ladder, std::uint64_t idx);

// omega[x] = source[source_index(x)]. The source must supply at least
// fresh_count(n) bits of '0'/'1'. The default entry point evaluates every
// position independently in one data-parallel pass; the _serial variant
// streams left to right, consuming fresh bits as primaries appear, and is
// kept as the reference implementation.
std::string build_sequence(std::string_view source, const PeriodLadder& ladder,
                           std::uint64_t n);
std::string build_sequence_serial(std::string_view source,
                                  const PeriodLadder& ladder, std::uint64_t n);

struct SourceInterval {
  std::uint64_t a = 0;          // [a, b) in source indices
  std::uint64_t b = 0;
  std::uint64_t omega_pos = 0;  // position of the element carrying v[a]
};

struct WindowDecomposition {
  std::uint64_t window_start = 0;
  std::uint64_t window_len = 0;
  std::uint32_t cutoff_rank = 0;  // smallest i with n_i >= window_len
  std::vector<SourceInterval> intervals;  // sorted by a, pairwise disjoint
  std::uint64_t small_rank_count = 0;
  std::uint64_t total_interval_len = 0;   // + small_rank_count == window_len
  bool density_ok = false;  // small/k <= 2 * sum_{j<i} n_{j-1}/n_j
};

// Classifies [m, m+k), discards positions of rank below the cutoff and
// groups the remaining source indices into maximal consecutive runs.
WindowDecomposition decompose_window(std::uint64_t m, std::uint64_t k,
                                     const PeriodLadder& ladder);

// Walks from the class of source index a_next to the class "offset"
// positions away and reports its source index. Any member of the a_next
// class gives the same answer; the leftmost one is used.
std::uint64_t recover_a(std::uint64_t a_next, std::int64_t offset,
                        const PeriodLadder& ladder);

}  // namespace avoid
