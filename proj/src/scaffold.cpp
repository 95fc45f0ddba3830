#include "avoid/scaffold.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace avoid {

namespace {

// Count of y in [0, n_{m-1}) whose digits d_1..d_{m-1} are all nonzero.
// good_block(ladder, 1) = n_0, then each level multiplies by (r_j - 1).
std::uint64_t good_block(const PeriodLadder& ladder, std::size_t m) {
  std::uint64_t v = ladder.period(0);
  for (std::size_t j = 1; j + 1 <= m - 1 + 1 && j <= m - 1; ++j)
    v *= ladder.radix(j) - 1;
  return v;
}

// #{y < rem : digits d_1..d_{r-1}(y) all nonzero}, rem <= n_{r-2} block scan.
std::uint64_t partial_nonzero(const PeriodLadder& ladder, std::uint64_t rem,
                              std::size_t r) {
  if (r == 1) return rem;
  std::uint64_t block = ladder.period(r - 2);
  std::uint64_t dq = rem / block, rm = rem % block;
  if (dq == 0) return 0;  // digit d_{r-1} is zero for everything below rem
  std::uint64_t res = (dq - 1) * good_block(ladder, r - 1);
  return res + partial_nonzero(ladder, rm, r - 1);
}

// #{y < x : digits d_1..d_{r-1}(y) all nonzero}.
std::uint64_t count_nonzero_below(const PeriodLadder& ladder, std::uint64_t x,
                                  std::size_t r) {
  if (r == 1) return x;
  std::uint64_t block = ladder.period(r - 1);
  return (x / block) * good_block(ladder, r) +
         partial_nonzero(ladder, x % block, r);
}

}  // namespace

PeriodLadder::PeriodLadder(std::vector<std::uint64_t> periods)
    : periods_(std::move(periods)) {
  if (periods_.empty())
    throw std::invalid_argument("ladder needs at least one period");
  if (periods_[0] < 1)
    throw std::invalid_argument("ladder periods must be positive");
  for (std::size_t j = 1; j < periods_.size(); ++j) {
    std::uint64_t a = periods_[j - 1], b = periods_[j];
    if (b % a != 0)
      throw std::invalid_argument("ladder pair (" + std::to_string(a) + "," +
                                  std::to_string(b) + ") breaks divisibility");
    if (b / a < 2)
      throw std::invalid_argument("ladder pair (" + std::to_string(a) + "," +
                                  std::to_string(b) + ") has radix below 2");
  }
}

PeriodLadder PeriodLadder::parse(std::string_view csv) {
  std::vector<std::uint64_t> periods;
  std::uint64_t cur = 0;
  bool any = false;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (!any) throw std::invalid_argument("empty ladder element");
      periods.push_back(cur);
      cur = 0;
      any = false;
    } else if (csv[i] >= '0' && csv[i] <= '9') {
      cur = cur * 10 + (csv[i] - '0');
      any = true;
    } else {
      throw std::invalid_argument("bad character in ladder literal");
    }
  }
  return PeriodLadder(std::move(periods));
}

std::uint64_t PeriodLadder::radix(std::size_t j) const {
  return j == 0 ? periods_[0] : periods_[j] / periods_[j - 1];
}

std::string PeriodLadder::to_string() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < periods_.size(); ++j) {
    if (j) os << ',';
    os << periods_[j];
  }
  return os.str();
}

PeriodLadder make_ladder(std::uint64_t n0, std::size_t depth,
                         const Rational& epsilon) {
  if (depth == 0) throw std::invalid_argument("ladder depth must be positive");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  // Constant ratio r with (depth-1)/r < epsilon.
  std::uint64_t ratio = 2;
  while (Rational(depth - 1, 1) >= epsilon * ratio) ratio *= 2;
  std::vector<std::uint64_t> periods{n0};
  for (std::size_t j = 1; j < depth; ++j) periods.push_back(periods.back() * ratio);
  return PeriodLadder(std::move(periods));
}

PositionInfo classify_position(std::uint64_t x, const PeriodLadder& ladder) {
  const std::size_t t = ladder.depth();
  PositionInfo info;
  info.position = x;
  info.rank = static_cast<std::uint32_t>(t + 1);
  for (std::size_t j = 1; j < t; ++j) {
    std::uint64_t digit = (x / ladder.period(j - 1)) % ladder.radix(j);
    if (digit == 0) {
      info.rank = static_cast<std::uint32_t>(j);
      break;
    }
  }
  info.representative =
      info.rank <= t - 1 && t >= 2 ? x % ladder.period(info.rank) : x;
  info.is_primary = info.representative == x;
  info.source_index = fresh_count(ladder, info.representative);
  return info;
}

Rational density_D(const PeriodLadder& ladder) {
  Rational d = 1;
  for (std::size_t j = 0; j + 1 < ladder.depth(); ++j)
    d *= Rational(1) - Rational(ladder.period(j), ladder.period(j + 1));
  return d;
}

std::uint64_t fresh_count(const PeriodLadder& ladder, std::uint64_t n) {
  const std::size_t t = ladder.depth();
  std::uint64_t total = 0;
  // Rank-r primaries occupy [0, n_{r-1}) with digits d_1..d_{r-1} nonzero.
  for (std::size_t r = 1; r + 1 <= t; ++r)
    total += count_nonzero_below(ladder, std::min(n, ladder.period(r - 1)), r);
  total += count_nonzero_below(ladder, n, t);  // rank t+1
  return total;
}

std::uint64_t nth_primary(const PeriodLadder& ladder, std::uint64_t idx) {
  // fresh_count is nondecreasing; binary search the least x with
  // fresh_count(x+1) = idx+1. Density keeps the bracket linear in idx.
  std::uint64_t lo = idx, hi = idx + 1;
  while (fresh_count(ladder, hi) < idx + 1) {
    lo = hi;
    if (hi > (std::uint64_t(1) << 62)) throw std::overflow_error("nth_primary");
    hi *= 2;
  }
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (fresh_count(ladder, mid + 1) >= idx + 1)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::string build_sequence(std::string_view source, const PeriodLadder& ladder,
                           std::uint64_t n) {
  const std::uint64_t need = fresh_count(ladder, n);
  if (source.size() < need)
    throw std::invalid_argument("source exhausted: need " +
                                std::to_string(need) + " bits, have " +
                                std::to_string(source.size()));
  std::string omega(n, '0');
  const std::int64_t sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < sn; ++x)
    omega[x] =
        source[classify_position(static_cast<std::uint64_t>(x), ladder)
                   .source_index];
  return omega;
}

std::string build_sequence_serial(std::string_view source,
                                  const PeriodLadder& ladder, std::uint64_t n) {
  std::string omega(n, '0');
  std::uint64_t next_fresh = 0;
  for (std::uint64_t x = 0; x < n; ++x) {
    PositionInfo info = classify_position(x, ladder);
    if (info.is_primary) {
      if (next_fresh >= source.size())
        throw std::invalid_argument("source exhausted at position " +
                                    std::to_string(x));
      omega[x] = source[next_fresh++];
    } else {
      omega[x] = omega[info.representative];
    }
  }
  return omega;
}

WindowDecomposition decompose_window(std::uint64_t m, std::uint64_t k,
                                     const PeriodLadder& ladder) {
  if (k == 0) throw std::invalid_argument("window length must be positive");
  const std::size_t t = ladder.depth();
  if (ladder.period(t - 1) < k)
    throw std::invalid_argument("ladder too short for window length " +
                                std::to_string(k));
  WindowDecomposition out;
  out.window_start = m;
  out.window_len = k;
  std::uint32_t cutoff = 0;
  while (ladder.period(cutoff) < k) ++cutoff;
  out.cutoff_rank = cutoff;

  bool run_open = false;
  SourceInterval cur;
  for (std::uint64_t x = m; x < m + k; ++x) {
    PositionInfo info = classify_position(x, ladder);
    if (info.rank < cutoff) {
      ++out.small_rank_count;
      continue;
    }
    if (run_open && info.source_index == cur.b) {
      ++cur.b;
    } else {
      if (run_open) out.intervals.push_back(cur);
      cur = SourceInterval{info.source_index, info.source_index + 1, x};
      run_open = true;
    }
  }
  if (run_open) out.intervals.push_back(cur);

  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const SourceInterval& l, const SourceInterval& r) {
              return l.a < r.a;
            });
  for (std::size_t i = 0; i + 1 < out.intervals.size(); ++i)
    if (out.intervals[i].b > out.intervals[i + 1].a)
      throw std::logic_error("window decomposition produced overlapping runs");
  for (const auto& iv : out.intervals) out.total_interval_len += iv.b - iv.a;

  Rational bound = 0;
  for (std::uint32_t j = 1; j < cutoff; ++j)
    bound += Rational(ladder.period(j - 1), ladder.period(j));
  out.density_ok = Rational(out.small_rank_count, k) <= 2 * bound;
  return out;
}

std::uint64_t recover_a(std::uint64_t a_next, std::int64_t offset,
                        const PeriodLadder& ladder) {
  std::uint64_t anchor = nth_primary(ladder, a_next);
  std::int64_t pos = static_cast<std::int64_t>(anchor) + offset;
  if (pos < 0)
    throw std::invalid_argument("recover_a walked before the sequence start");
  return classify_position(static_cast<std::uint64_t>(pos), ladder).source_index;
}

}  // namespace avoid
