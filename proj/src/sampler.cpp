#include "avoid/sampler.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "avoid/aho_corasick.hpp"
#include "avoid/bits.hpp"

namespace avoid {

namespace {

AhoCorasick build_matcher(const ForbiddenFamily& family, std::uint32_t min_len) {
  AhoCorasick ac;
  for (const auto& [len, set] : family.entries) {
    if (len < min_len) continue;
    for (const auto& s : set) ac.add_pattern(s);
  }
  ac.build();
  return ac;
}

void check_config(const SamplerConfig& config) {
  if (config.n == 0) throw std::invalid_argument("sampler target size is zero");
  if (config.min_len == 0 || config.min_len > config.n)
    throw std::invalid_argument("min_len must satisfy 1 <= min_len <= n");
  if (config.max_rounds == 0)
    throw std::invalid_argument("max_rounds must be positive");
}

}  // namespace

std::vector<Violation> scan_violations_serial(std::string_view x,
                                              const ForbiddenFamily& family,
                                              std::uint32_t min_len) {
  AhoCorasick ac = build_matcher(family, min_len);
  std::vector<Violation> out;
  if (ac.empty()) return out;
  ac.scan(x, [&](std::size_t end, std::uint32_t len) {
    out.push_back({end + 1 - len, len});
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Violation> scan_violations(std::string_view x,
                                       const ForbiddenFamily& family,
                                       std::uint32_t min_len) {
  constexpr std::size_t kChunk = 1 << 16;
  std::uint32_t max_len = family.max_len();
  if (x.size() <= 2 * kChunk || max_len == 0)
    return scan_violations_serial(x, family, min_len);

  AhoCorasick ac = build_matcher(family, min_len);
  std::vector<Violation> out;
  if (ac.empty()) return out;
  // Chunks own the matches that START inside them; each scan overhangs
  // by max_len-1 so no window is missed or double counted.
  const std::size_t chunks = (x.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<Violation>> parts(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    std::size_t own_lo = static_cast<std::size_t>(c) * kChunk;
    std::size_t own_hi = std::min(own_lo + kChunk, x.size());
    std::size_t scan_hi = std::min(own_hi + max_len - 1, x.size());
    ac.scan(x.substr(own_lo, scan_hi - own_lo),
            [&](std::size_t end, std::uint32_t len) {
              std::size_t start = own_lo + end + 1 - len;
              if (start >= own_lo && start < own_hi)
                parts[c].push_back({start, len});
            });
  }
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

SampleTrace resample_run(const ForbiddenFamily& family,
                         const SamplerConfig& config) {
  check_config(config);
  family.validate();
  if (family.kind != FamilyKind::kSequence)
    throw std::invalid_argument("resample_run needs a sequence family");

  std::mt19937_64 gen(config.seed);
  std::string buf = draw_bits(gen, config.n);
  AhoCorasick ac = build_matcher(family, config.min_len);
  const std::uint32_t max_len = family.max_len();

  SampleTrace trace;
  std::set<Violation> open;
  for (const auto& v : scan_violations(buf, family, config.min_len))
    open.insert(v);
  trace.violations_initial = open.size();

  while (!open.empty() && trace.rounds < config.max_rounds) {
    ++trace.rounds;
    Violation pick;
    if (config.selection == SelectionRule::kLeftmost) {
      pick = *open.begin();
    } else {
      auto it = open.begin();
      std::advance(it, gen() % open.size());
      pick = *it;
    }
    for (std::uint64_t i = 0; i < pick.length; ++i)
      buf[pick.start + i] = draw_bit_char(gen);

    // Windows not touching the redrawn range keep their old verdicts.
    std::uint64_t lo = pick.start, hi = pick.start + pick.length;
    for (auto it = open.begin(); it != open.end();) {
      if (it->start < hi && it->start + it->length > lo)
        it = open.erase(it);
      else
        ++it;
    }
    std::uint64_t scan_lo = lo > max_len - 1 ? lo - (max_len - 1) : 0;
    std::uint64_t scan_hi = std::min<std::uint64_t>(hi + max_len - 1, buf.size());
    ac.scan(std::string_view(buf).substr(scan_lo, scan_hi - scan_lo),
            [&](std::size_t end, std::uint32_t len) {
              std::uint64_t start = scan_lo + end + 1 - len;
              if (start < hi && start + len > lo) open.insert({start, len});
            });
  }
  trace.converged = open.empty();
  trace.rows.push_back(std::move(buf));
  return trace;
}

namespace {

struct GridMatchTables {
  // Per side: set of row-major square codes (sides are <= 8, so 64 bits).
  std::vector<std::pair<std::uint32_t, std::unordered_set<std::uint64_t>>> sides;
  std::uint32_t max_side = 0;
};

GridMatchTables build_grid_tables(const ForbiddenFamily& family,
                                  std::uint32_t min_side) {
  GridMatchTables t;
  for (const auto& [side, set] : family.entries) {
    if (side < min_side || set.empty()) continue;
    if (side > 8)
      throw std::invalid_argument("grid family sides are capped at 8");
    std::unordered_set<std::uint64_t> codes;
    for (const auto& s : set) codes.insert(bits_to_u64(s));
    t.sides.emplace_back(side, std::move(codes));
    t.max_side = std::max(t.max_side, side);
  }
  return t;
}

std::uint64_t square_code(const std::vector<std::string>& rows, std::uint64_t r,
                          std::uint64_t c, std::uint32_t side) {
  std::uint64_t code = 0;
  for (std::uint32_t dr = 0; dr < side; ++dr)
    for (std::uint32_t dc = 0; dc < side; ++dc)
      code = (code << 1) | static_cast<std::uint64_t>(rows[r + dr][c + dc] - '0');
  return code;
}

}  // namespace

SampleTrace resample_grid(const ForbiddenFamily& family,
                          const SamplerConfig& config) {
  check_config(config);
  family.validate();
  if (family.kind != FamilyKind::kGrid)
    throw std::invalid_argument("resample_grid needs a grid family");
  const std::uint64_t n = config.n;
  GridMatchTables tables = build_grid_tables(family, config.min_len);

  std::mt19937_64 gen(config.seed);
  std::vector<std::string> rows(n);
  for (auto& row : rows) row = draw_bits(gen, n);

  struct SquareViolation {
    std::uint64_t r, c;
    std::uint32_t side;
    auto operator<=>(const SquareViolation&) const = default;
  };
  std::set<SquareViolation> open;
  auto scan_rect = [&](std::uint64_t r0, std::uint64_t r1, std::uint64_t c0,
                       std::uint64_t c1, auto&& keep) {
    for (const auto& [side, codes] : tables.sides) {
      if (side > n) continue;
      for (std::uint64_t r = r0; r + side <= n && r < r1; ++r)
        for (std::uint64_t c = c0; c + side <= n && c < c1; ++c)
          if (codes.count(square_code(rows, r, c, side)) && keep(r, c, side))
            open.insert({r, c, side});
    }
  };
  scan_rect(0, n, 0, n, [](auto...) { return true; });

  SampleTrace trace;
  trace.violations_initial = open.size();
  while (!open.empty() && trace.rounds < config.max_rounds) {
    ++trace.rounds;
    SquareViolation pick;
    if (config.selection == SelectionRule::kLeftmost) {
      pick = *open.begin();
    } else {
      auto it = open.begin();
      std::advance(it, gen() % open.size());
      pick = *it;
    }
    for (std::uint32_t dr = 0; dr < pick.side; ++dr)
      for (std::uint32_t dc = 0; dc < pick.side; ++dc)
        rows[pick.r + dr][pick.c + dc] = draw_bit_char(gen);

    std::uint64_t rlo = pick.r, rhi = pick.r + pick.side;
    std::uint64_t clo = pick.c, chi = pick.c + pick.side;
    for (auto it = open.begin(); it != open.end();) {
      bool touches = it->r < rhi && it->r + it->side > rlo && it->c < chi &&
                     it->c + it->side > clo;
      it = touches ? open.erase(it) : std::next(it);
    }
    std::uint32_t reach = tables.max_side ? tables.max_side - 1 : 0;
    scan_rect(rlo > reach ? rlo - reach : 0, rhi + reach,
              clo > reach ? clo - reach : 0, chi + reach,
              [&](std::uint64_t r, std::uint64_t c, std::uint32_t side) {
                return r < rhi && r + side > rlo && c < chi && c + side > clo;
              });
  }
  trace.converged = open.empty();
  trace.rows = std::move(rows);
  return trace;
}

bool sft_feasible(const ForbiddenFamily& family, std::uint32_t min_len,
                  std::uint32_t enum_cap) {
  if (family.kind != FamilyKind::kSequence)
    throw std::invalid_argument("sft_feasible needs a sequence family");
  const std::uint32_t m = family.max_len();
  if (m == 0 || m < min_len) return true;  // nothing forbidden at this scale
  if (m > enum_cap)
    throw std::invalid_argument("family max length " + std::to_string(m) +
                                " above enumeration cap " +
                                std::to_string(enum_cap));

  // Nodes are (m-1)-bit words; the edge u -> v exists when the joined
  // m-word is allowed. Any substring of the join shorter than m lies
  // inside u or v, so per-node screening plus one length-m lookup is
  // a complete check.
  const std::uint32_t node_bits = m - 1;
  const std::uint64_t node_count = 1ull << node_bits;
  const std::uint64_t node_mask = node_count - 1;

  AhoCorasick short_ac;
  bool have_short = false;
  for (const auto& [len, set] : family.entries) {
    if (len < min_len || len >= m) continue;
    for (const auto& s : set) {
      short_ac.add_pattern(s);
      have_short = true;
    }
  }
  short_ac.build();

  std::unordered_set<std::uint64_t> full;
  if (auto it = family.entries.find(m); it != family.entries.end())
    for (const auto& s : it->second) full.insert(bits_to_u64(s));

  std::vector<std::uint8_t> allowed(node_count, 1);
  if (node_bits == 0) {
    allowed[0] = 1;
  } else if (have_short) {
#pragma omp parallel for schedule(static)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(node_count); ++u) {
      bool bad = false;
      short_ac.scan(u64_to_bits(static_cast<std::uint64_t>(u), node_bits),
                    [&](std::size_t, std::uint32_t) { bad = true; });
      if (bad) allowed[u] = 0;
    }
  }

  // Iterative three-colour DFS over the implicit graph.
  std::vector<std::uint8_t> colour(node_count, 0);
  std::vector<std::pair<std::uint64_t, int>> stack;
  for (std::uint64_t s = 0; s < node_count; ++s) {
    if (!allowed[s] || colour[s] != 0) continue;
    stack.emplace_back(s, 0);
    colour[s] = 1;
    while (!stack.empty()) {
      auto& [u, next_bit] = stack.back();
      if (next_bit == 2) {
        colour[u] = 2;
        stack.pop_back();
        continue;
      }
      std::uint64_t joined = (u << 1) | static_cast<std::uint64_t>(next_bit);
      std::uint64_t v = joined & node_mask;
      ++next_bit;
      if (full.count(joined) || !allowed[v]) continue;
      if (colour[v] == 1) return true;  // back edge closes a cycle
      if (colour[v] == 0) {
        colour[v] = 1;
        stack.emplace_back(v, 0);
      }
    }
  }
  return false;
}

}  // namespace avoid
