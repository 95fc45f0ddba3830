#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "avoid/rational.hpp"

namespace avoid {

// Per-length cap floor(2^{alpha*n}). alpha is an exact rational p/q, and
// every comparison is decided in integer arithmetic: count <= cap(n) iff
// count^q <= 2^{n*p}.
struct AlphaBudget {
  Rational alpha;

  BigInt cap(std::uint64_t n) const;
  bool allows(std::uint64_t count, std::uint64_t n) const;
};

enum class FamilyKind {
  kSequence,  // entries under key n are bitstrings of length n
  kGrid,      // entries under key n are n*n-bit squares, row-major
};

struct ForbiddenFamily {
  Rational alpha{1, 2};
  FamilyKind kind = FamilyKind::kSequence;
  std::map<std::uint32_t, std::set<std::string>> entries;

  bool empty() const;
  std::uint32_t min_len() const;  // smallest key with a nonempty set; 0 if empty
  std::uint32_t max_len() const;  // largest such key; 0 if empty
  std::size_t entry_bits(std::uint32_t key) const;
  std::size_t total_strings() const;

  // Membership of x in entries[|x|] (or entries[side] for grids, where
  // |x| == side*side and the caller passes the side).
  bool contains(std::string_view x) const;

  // Structural invariants: bit characters only, exact entry lengths,
  // alpha in (0,1). Throws std::invalid_argument naming the offence.
  void validate() const;

  // One message per key whose entry count exceeds the alpha budget.
  std::vector<std::string> budget_warnings() const;
};

struct ParsedFamily {
  ForbiddenFamily family;
  std::vector<std::string> warnings;  // budget violations, duplicate lines
};

// Family file format: '#' comment lines and blank lines are ignored;
// the first significant line is `alpha=<p>/<q>`; each `length <n>` line
// opens a section of one bitstring per line (n*n bits per line for grid
// families). Throws std::invalid_argument with a line number on errors.
ParsedFamily parse_family(std::string_view text,
                          FamilyKind kind = FamilyKind::kSequence);

// Canonical form: sections ascending in key, strings sorted, header first.
std::string write_family(const ForbiddenFamily& family);

// Exactly min(floor(2^{alpha*n}), 2^n - 1) distinct strings per length,
// drawn uniformly; a pure function of (alpha, range, seed).
ForbiddenFamily gen_random_family(const Rational& alpha, std::uint32_t len_lo,
                                  std::uint32_t len_hi, std::uint64_t seed);

struct LzFamilyResult {
  ForbiddenFamily family;
  std::vector<std::uint32_t> truncated_lengths;  // caps that actually bit
};

// entries[n] = strings with LZ78 phrase count < alpha*n, truncated to the
// budget cap by ascending estimate then lexicographic order. Enumerates
// all 2^n strings per length, so lengths above enum_cap are rejected.
LzFamilyResult gen_lz_family(const Rational& alpha, std::uint32_t len_lo,
                             std::uint32_t len_hi,
                             std::uint32_t enum_cap = 22);

}  // namespace avoid
