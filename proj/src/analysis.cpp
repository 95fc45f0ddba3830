#include "avoid/analysis.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>

namespace avoid {

AvoidanceResult verify_avoidance(std::string_view x,
                                 const ForbiddenFamily& family,
                                 std::uint32_t min_len) {
  AvoidanceResult res;
  for (std::uint64_t start = 0; start < x.size(); ++start) {
    for (const auto& [len, set] : family.entries) {
      if (len < min_len || set.empty()) continue;
      if (start + len > x.size()) continue;
      if (set.count(std::string(x.substr(start, len)))) {
        res.ok = false;
        res.position = start;
        res.length = len;
        return res;
      }
    }
  }
  return res;
}

AvoidanceResult verify_grid_avoidance(const std::vector<std::string>& rows,
                                      const ForbiddenFamily& family,
                                      std::uint32_t min_side) {
  AvoidanceResult res;
  const std::uint64_t n = rows.size();
  for (std::uint64_t r = 0; r < n; ++r) {
    for (std::uint64_t c = 0; c < (n ? rows[0].size() : 0); ++c) {
      for (const auto& [side, set] : family.entries) {
        if (side < min_side || set.empty()) continue;
        if (r + side > n || c + side > rows[r].size()) continue;
        std::string square;
        square.reserve(std::size_t(side) * side);
        for (std::uint32_t dr = 0; dr < side; ++dr)
          square.append(rows[r + dr].substr(c, side));
        if (set.count(square)) {
          res.ok = false;
          res.row = r;
          res.col = c;
          res.length = side;
          return res;
        }
      }
    }
  }
  return res;
}

RecurrenceReport recurrence_gap(std::string_view prefix,
                                std::string_view pattern) {
  RecurrenceReport rep;
  rep.pattern = std::string(pattern);
  if (pattern.empty() || pattern.size() > prefix.size()) return rep;
  for (std::uint64_t i = 0; i + pattern.size() <= prefix.size(); ++i)
    if (prefix.substr(i, pattern.size()) == pattern)
      rep.occurrences.push_back(i);
  if (rep.occurrences.size() >= 2) {
    std::uint64_t gap = 0;
    for (std::size_t i = 1; i < rep.occurrences.size(); ++i)
      gap = std::max(gap, rep.occurrences[i] - rep.occurrences[i - 1]);
    rep.max_gap = gap;
    rep.window_k = gap + pattern.size();
  }
  return rep;
}

bool window_recurrence_holds(std::string_view prefix, std::string_view pattern,
                             std::uint64_t k) {
  if (pattern.empty() || k < pattern.size() || prefix.size() < k) return false;
  for (std::uint64_t start = 0; start + k <= prefix.size(); ++start) {
    bool found = false;
    for (std::uint64_t i = start; i + pattern.size() <= start + k; ++i) {
      if (prefix.substr(i, pattern.size()) == pattern) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::optional<std::uint64_t> ladder_periodicity_mismatch(
    std::string_view omega, const PeriodLadder& ladder, std::size_t s) {
  if (s + 1 >= ladder.depth())
    throw std::invalid_argument("periodicity level s+1 is above the ladder");
  const std::uint64_t ns = ladder.period(s);
  const std::uint64_t period = ladder.period(s + 1);
  for (std::uint64_t p = period; p + ns <= omega.size(); p += period)
    for (std::uint64_t i = 0; i < ns; ++i)
      if (omega[p + i] != omega[i]) return p + i;
  return std::nullopt;
}

bool verify_ladder_periodicity(std::string_view omega,
                               const PeriodLadder& ladder, std::size_t s) {
  return !ladder_periodicity_mismatch(omega, ladder, s).has_value();
}

namespace {

// Binary trie over phrase prefixes; nodes are reused across calls by the
// windowed profile, hence the external arena.
struct Lz78Arena {
  std::vector<std::array<std::int32_t, 2>> next;

  std::uint64_t parse(std::string_view bits) {
    next.assign(1, {-1, -1});
    std::uint64_t phrases = 0;
    std::int32_t node = 0;
    for (char c : bits) {
      int b = c - '0';
      std::int32_t child = next[node][b];
      if (child >= 0) {
        node = child;
        continue;
      }
      next[node][b] = static_cast<std::int32_t>(next.size());
      next.push_back({-1, -1});
      ++phrases;
      node = 0;
    }
    if (node != 0) ++phrases;  // trailing partial phrase
    return phrases;
  }
};

}  // namespace

std::uint64_t lz78_phrase_estimate(std::string_view bits) {
  Lz78Arena arena;
  return arena.parse(bits);
}

std::vector<ComplexityRow> complexity_profile_serial(
    std::string_view omega, std::span<const std::uint32_t> lengths) {
  std::vector<ComplexityRow> rows;
  Lz78Arena arena;
  for (auto len : lengths) {
    if (len == 0 || len > omega.size())
      throw std::invalid_argument("profile length " + std::to_string(len) +
                                  " exceeds the sequence");
    ComplexityRow row;
    row.length = len;
    row.min_estimate = ~std::uint64_t(0);
    for (std::uint64_t start = 0; start + len <= omega.size(); ++start) {
      std::uint64_t est = arena.parse(omega.substr(start, len));
      row.min_estimate = std::min(row.min_estimate, est);
      row.sum_estimate += est;
      ++row.windows;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ComplexityRow> complexity_profile(
    std::string_view omega, std::span<const std::uint32_t> lengths) {
  std::vector<ComplexityRow> rows;
  for (auto len : lengths) {
    if (len == 0 || len > omega.size())
      throw std::invalid_argument("profile length " + std::to_string(len) +
                                  " exceeds the sequence");
    ComplexityRow row;
    row.length = len;
    row.min_estimate = ~std::uint64_t(0);
    const std::int64_t count =
        static_cast<std::int64_t>(omega.size() - len + 1);
    std::uint64_t min_est = ~std::uint64_t(0);
    std::uint64_t sum = 0;
#pragma omp parallel
    {
      Lz78Arena arena;
#pragma omp for reduction(min : min_est) reduction(+ : sum) schedule(static)
      for (std::int64_t start = 0; start < count; ++start) {
        std::uint64_t est =
            arena.parse(omega.substr(static_cast<std::size_t>(start), len));
        min_est = std::min(min_est, est);
        sum += est;
      }
    }
    row.min_estimate = min_est;
    row.sum_estimate = sum;
    row.windows = static_cast<std::uint64_t>(count);
    rows.push_back(row);
  }
  return rows;
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  os << "length,min_estimate,mean_estimate\n";
  for (const auto& r : rows) {
    // Exact decimal with six places; integer arithmetic keeps runs
    // byte-identical across platforms.
    std::uint64_t scaled = r.windows ? (r.sum_estimate * 1000000) / r.windows : 0;
    os << r.length << "," << r.min_estimate << "," << scaled / 1000000 << "."
       << std::setw(6) << std::setfill('0') << scaled % 1000000 << "\n";
  }
  return os.str();
}

std::string recurrence_csv(const RecurrenceReport& report) {
  std::ostringstream os;
  os << "pattern,occurrences,max_gap,window_k\n";
  os << report.pattern << "," << report.occurrences.size() << ",";
  if (report.max_gap)
    os << *report.max_gap;
  os << ",";
  if (report.window_k)
    os << *report.window_k;
  os << "\n";
  return os.str();
}

}  // namespace avoid
