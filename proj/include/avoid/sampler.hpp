#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "avoid/forbidden_family.hpp"

namespace avoid {

struct Violation {
  std::uint64_t start = 0;
  std::uint32_t length = 0;  // window is [start, start+length)

  auto operator<=>(const Violation&) const = default;
};

// All windows of length >= min_len whose content is forbidden, sorted by
// (start, length). Multi-pattern automaton scan; the default entry point
// splits long inputs into overlapping chunks and scans them in parallel,
// the _serial variant streams the whole input and is kept for testing.
std::vector<Violation> scan_violations(std::string_view x,
                                       const ForbiddenFamily& family,
                                       std::uint32_t min_len);
std::vector<Violation> scan_violations_serial(std::string_view x,
                                              const ForbiddenFamily& family,
                                              std::uint32_t min_len);

enum class SelectionRule { kLeftmost, kRandom };

struct SamplerConfig {
  std::uint64_t n = 0;     // target length, or grid side
  std::uint64_t seed = 0;
  std::uint32_t min_len = 1;
  SelectionRule selection = SelectionRule::kLeftmost;
  std::uint64_t max_rounds = 1'000'000;
};

struct SampleTrace {
  std::vector<std::string> rows;  // one row for sequences, n rows for grids
  std::uint64_t rounds = 0;
  std::uint64_t violations_initial = 0;
  bool converged = false;

  const std::string& sequence() const { return rows.front(); }
};

// Draw n independent bits from the seed, then redraw one violated window
// at a time (leftmost or seeded-random choice) until no forbidden window
// remains or max_rounds is reached. Only the neighbourhood of a redraw is
// rescanned. Deterministic in (family, config); running out of rounds is
// reported through converged=false, not an error.
SampleTrace resample_run(const ForbiddenFamily& family,
                         const SamplerConfig& config);

// Same loop over an n x n grid; violated windows are squares and a redraw
// refills the whole square. The family must be a grid family.
SampleTrace resample_grid(const ForbiddenFamily& family,
                          const SamplerConfig& config);

// Exact feasibility of an infinite avoiding sequence: overlap graph on
// allowed (M-1)-bit words, true iff it has a cycle (M = family.max_len).
bool sft_feasible(const ForbiddenFamily& family, std::uint32_t min_len,
                  std::uint32_t enum_cap = 22);

}  // namespace avoid
