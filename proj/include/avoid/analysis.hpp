#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avoid/forbidden_family.hpp"
#include "avoid/scaffold.hpp"

namespace avoid {

// The verifiers in this header are deliberately naive, share no code with
// the incremental scanner, and serve as oracles for the optimized paths.

struct AvoidanceResult {
  bool ok = true;
  // First violating window when !ok (start position and length; row/col
  // and side for grids).
  std::uint64_t position = 0;
  std::uint64_t row = 0, col = 0;
  std::uint32_t length = 0;
};

AvoidanceResult verify_avoidance(std::string_view x,
                                 const ForbiddenFamily& family,
                                 std::uint32_t min_len);

AvoidanceResult verify_grid_avoidance(const std::vector<std::string>& rows,
                                      const ForbiddenFamily& family,
                                      std::uint32_t min_side);

struct RecurrenceReport {
  std::string pattern;
  std::vector<std::uint64_t> occurrences;  // sorted start positions
  std::optional<std::uint64_t> max_gap;    // needs >= 2 occurrences
  std::optional<std::uint64_t> window_k;   // max_gap + |pattern|
};

RecurrenceReport recurrence_gap(std::string_view prefix,
                                std::string_view pattern);

// Every length-k window of the prefix contains the pattern (exact scan).
bool window_recurrence_holds(std::string_view prefix, std::string_view pattern,
                             std::uint64_t k);

// Checks omega[p .. p+n_s) == omega[0 .. n_s) for every positive multiple
// p of n_{s+1} that fits. Returns the first mismatching position, if any.
std::optional<std::uint64_t> ladder_periodicity_mismatch(
    std::string_view omega, const PeriodLadder& ladder, std::size_t s);

bool verify_ladder_periodicity(std::string_view omega,
                               const PeriodLadder& ladder, std::size_t s);

// Phrase count of the incremental LZ78 parse; a trailing partial phrase
// counts as one phrase. Used only comparatively, as a complexity proxy.
std::uint64_t lz78_phrase_estimate(std::string_view bits);

struct ComplexityRow {
  std::uint32_t length = 0;
  std::uint64_t min_estimate = 0;
  std::uint64_t sum_estimate = 0;
  std::uint64_t windows = 0;

  double mean_estimate() const {
    return windows ? static_cast<double>(sum_estimate) / windows : 0.0;
  }
};

// Sliding-window LZ78 statistics over all windows of each length.
std::vector<ComplexityRow> complexity_profile(std::string_view omega,
                                              std::span<const std::uint32_t> lengths);
std::vector<ComplexityRow> complexity_profile_serial(
    std::string_view omega, std::span<const std::uint32_t> lengths);

std::string complexity_csv(const std::vector<ComplexityRow>& rows);
std::string recurrence_csv(const RecurrenceReport& report);

}  // namespace avoid
