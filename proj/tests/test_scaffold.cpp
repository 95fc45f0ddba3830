#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "avoid/bits.hpp"
#include "avoid/scaffold.hpp"
#include "oracles.hpp"

using namespace avoid;

namespace {

const PeriodLadder kSmall({2, 8, 32});

std::string random_bits_str(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  return draw_bits(gen, n);
}

}  // namespace

TEST_CASE("ladder validation names the offending pair") {
  CHECK_THROWS_WITH_AS(PeriodLadder({2, 7}),
                       doctest::Contains("(2,7)"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(PeriodLadder({4, 4}),
                       doctest::Contains("(4,4)"), std::invalid_argument);
  CHECK_THROWS_AS(PeriodLadder({}), std::invalid_argument);
  CHECK_NOTHROW(PeriodLadder({1, 4}));
  CHECK(PeriodLadder::parse("2,8,32").periods() ==
        std::vector<std::uint64_t>{2, 8, 32});
  CHECK_THROWS_AS(PeriodLadder::parse("2,,8"), std::invalid_argument);
  CHECK_THROWS_AS(PeriodLadder::parse("2;8"), std::invalid_argument);
}

TEST_CASE("classification of the documented positions") {
  PositionInfo origin = classify_position(0, kSmall);
  CHECK(origin.rank == 1);
  CHECK(origin.is_primary);
  CHECK(origin.representative == 0);
  CHECK(origin.source_index == 0);

  PositionInfo nine = classify_position(9, kSmall);
  CHECK(nine.rank == 1);
  CHECK_FALSE(nine.is_primary);
  CHECK(nine.representative == 1);
  CHECK(nine.source_index == 1);

  PositionInfo three = classify_position(3, kSmall);
  CHECK(three.rank == 2);
  CHECK(three.is_primary);
  CHECK(three.representative == 3);
}

TEST_CASE("classification agrees with the repetition-rule oracle") {
  const std::uint64_t limit = 2048;
  oracle::ClassOracle classes(kSmall.periods().begin()[0] ? kSmall.periods() : kSmall.periods(), limit);
  for (std::uint64_t x = 0; x < limit / 2; ++x) {
    PositionInfo info = classify_position(x, kSmall);
    CHECK(info.representative == classes.representative(x));
    CHECK(info.is_primary == classes.is_primary(x));
    CHECK(info.source_index == classes.source_index(x));
    // rank r means the class repeats with period n_r and no smaller one
    for (std::size_t j = 1; j < kSmall.depth(); ++j) {
      bool repeats = classes.equivalent(x, x + kSmall.period(j));
      CHECK(repeats == (info.rank <= j));
    }
  }
}

TEST_CASE("equivalent positions share bits, distinct sources may differ") {
  std::string v = random_bits_str(99, 4096);
  std::string omega = build_sequence(v, kSmall, 1024);
  oracle::ClassOracle classes(kSmall.periods(), 2048);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10000; ++trial) {
    std::uint64_t a = gen() % 1024, b = gen() % 1024;
    if (classes.equivalent(a, b)) CHECK(omega[a] == omega[b]);
    CHECK((classify_position(a, kSmall).source_index ==
           classify_position(b, kSmall).source_index) ==
          classes.equivalent(a, b));
  }
}

TEST_CASE("density is an exact rational product") {
  CHECK(density_D(kSmall) == Rational(9, 16));
  CHECK(density_D(PeriodLadder({5})) == Rational(1));
  CHECK(density_D(PeriodLadder({1, 7})) == Rational(6, 7));
}

TEST_CASE("fresh counts at the documented prefixes") {
  CHECK(fresh_count(kSmall, 16) == 14);
  CHECK(fresh_count(kSmall, 0) == 0);
  CHECK(fresh_count(kSmall, 10) == 8);
}

TEST_CASE("fresh count dominates the density bound") {
  for (const auto& ladder :
       {kSmall, PeriodLadder({4, 64, 4096}), make_ladder(2, 4, Rational(1, 8))}) {
    Rational d = density_D(ladder);
    for (std::uint64_t n = 0; n <= 5000; ++n)
      CHECK(BigInt(fresh_count(ladder, n)) >= ceil_rational(d * n));
  }
}

TEST_CASE("fresh count equals a direct scan of primaries") {
  std::uint64_t running = 0;
  for (std::uint64_t x = 0; x < 4096; ++x) {
    CHECK(fresh_count(kSmall, x) == running);
    if (classify_position(x, kSmall).is_primary) ++running;
  }
}

TEST_CASE("nth_primary inverts the primary enumeration") {
  for (std::uint64_t idx = 0; idx < 1000; ++idx) {
    std::uint64_t pos = nth_primary(kSmall, idx);
    PositionInfo info = classify_position(pos, kSmall);
    CHECK(info.is_primary);
    CHECK(info.source_index == idx);
  }
}

TEST_CASE("primary source indices enumerate 0..fresh-1 bijectively") {
  const std::uint64_t n = 3000;
  std::vector<bool> seen(fresh_count(kSmall, n), false);
  for (std::uint64_t x = 0; x < n; ++x) {
    PositionInfo info = classify_position(x, kSmall);
    if (!info.is_primary) continue;
    REQUIRE(info.source_index < seen.size());
    CHECK_FALSE(seen[info.source_index]);
    seen[info.source_index] = true;
  }
  for (bool b : seen) CHECK(b);
}

TEST_CASE("sequence construction copies the source as documented") {
  std::string zeros(64, '0');
  CHECK(build_sequence(zeros, kSmall, 64) == std::string(64, '0'));

  // distinct markers through bits: v[i] alternates in a recognizable way
  std::string v = random_bits_str(1, 64);
  std::string omega = build_sequence(v, kSmall, 16);
  CHECK(omega.substr(0, 8) == v.substr(0, 8));
  CHECK(omega[8] == v[0]);
  CHECK(omega[9] == v[1]);
  CHECK(omega.substr(10, 6) == v.substr(8, 6));
  CHECK(fresh_count(kSmall, 16) == 14);  // bits consumed
}

TEST_CASE("parallel and serial construction agree") {
  std::string v = random_bits_str(7, 60000);
  for (auto n : {std::uint64_t(1), std::uint64_t(100), std::uint64_t(50000)}) {
    PeriodLadder ladder({4, 64, 4096});
    CHECK(build_sequence(v, ladder, n) == build_sequence_serial(v, ladder, n));
  }
}

TEST_CASE("construction fails cleanly when the source runs dry") {
  std::string v(13, '0');  // needs 14 for n = 16
  CHECK_THROWS_AS(build_sequence(v, kSmall, 16), std::invalid_argument);
  CHECK_THROWS_AS(build_sequence_serial(v, kSmall, 16), std::invalid_argument);
}

TEST_CASE("prefix repetition holds level by level") {
  std::string v = random_bits_str(3, 70000);
  PeriodLadder ladder({2, 8, 32});
  std::string omega = build_sequence(v, ladder, 1 << 16);
  for (std::size_t s = 0; s + 1 < ladder.depth(); ++s) {
    std::uint64_t ns = ladder.period(s), period = ladder.period(s + 1);
    for (std::uint64_t x = 0; x < ns; ++x)
      for (std::uint64_t p = x + period; p < omega.size(); p += period)
        REQUIRE(omega[p] == omega[x]);
  }
}

TEST_CASE("window decomposition of the documented window") {
  WindowDecomposition dec = decompose_window(4, 6, kSmall);
  CHECK(dec.cutoff_rank == 1);
  CHECK(dec.small_rank_count == 0);
  CHECK(dec.total_interval_len == 6);
  REQUIRE(dec.intervals.size() == 2);
  CHECK(dec.intervals[0].a == 0);
  CHECK(dec.intervals[0].b == 2);
  CHECK(dec.intervals[0].omega_pos == 8);
  CHECK(dec.intervals[1].a == 4);
  CHECK(dec.intervals[1].b == 8);
  CHECK(dec.intervals[1].omega_pos == 4);
  CHECK(dec.density_ok);
}

TEST_CASE("a prefix window inside the primary block is one interval") {
  WindowDecomposition dec = decompose_window(0, 2, kSmall);
  CHECK(dec.intervals.size() == 1);
  CHECK(dec.small_rank_count == 0);
  CHECK(dec.intervals[0].a == classify_position(0, kSmall).source_index);
  CHECK(dec.intervals[0].b == dec.intervals[0].a + 2);
}

TEST_CASE("decomposition sweep: conservation, three intervals, density") {
  PeriodLadder ladder({4, 64, 4096});
  std::string v = random_bits_str(17, 60000);
  std::string omega = build_sequence(v, ladder, 50000);
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    std::uint64_t k = 1 + gen() % 4096;
    std::uint64_t m = gen() % 40000;
    WindowDecomposition dec = decompose_window(m, k, ladder);
    REQUIRE(dec.intervals.size() <= 3);
    CHECK(dec.small_rank_count + dec.total_interval_len == k);
    CHECK(dec.density_ok);
    for (std::size_t i = 0; i + 1 < dec.intervals.size(); ++i)
      CHECK(dec.intervals[i].b <= dec.intervals[i + 1].a);
    // interval contents match the built sequence bit for bit
    if (m + k <= omega.size()) {
      std::string expected;
      for (std::uint64_t x = m; x < m + k; ++x) {
        PositionInfo info = classify_position(x, ladder);
        if (info.rank >= dec.cutoff_rank) expected.push_back(omega[x]);
      }
      std::vector<std::pair<std::uint64_t, std::uint64_t>> sources;
      for (std::uint64_t x = m; x < m + k; ++x) {
        PositionInfo info = classify_position(x, ladder);
        if (info.rank >= dec.cutoff_rank)
          sources.push_back({x, info.source_index});
      }
      REQUIRE(sources.size() == dec.total_interval_len);
      for (const auto& [x, src] : sources) REQUIRE(omega[x] == v[src]);
    }
  }
}

TEST_CASE("recover_a walks intervals back to their sources") {
  CHECK(recover_a(4, 0, kSmall) == 4);
  CHECK(recover_a(4, 4, kSmall) == 0);  // window [4,10): v4 at 4, v0 at 8

  PeriodLadder ladder({4, 64, 4096});
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint64_t k = 1 + gen() % 4096;
    std::uint64_t m = gen() % 100000;
    WindowDecomposition dec = decompose_window(m, k, ladder);
    for (std::size_t i = 0; i + 1 < dec.intervals.size(); ++i) {
      const auto& cur = dec.intervals[i];
      const auto& next = dec.intervals[i + 1];
      std::int64_t offset = static_cast<std::int64_t>(cur.omega_pos) -
                            static_cast<std::int64_t>(next.omega_pos);
      CHECK(recover_a(next.a, offset, ladder) == cur.a);
    }
  }
}

TEST_CASE("generated ladders keep the ratio sum under epsilon") {
  for (auto eps : {Rational(1, 8), Rational(1, 100)}) {
    PeriodLadder ladder = make_ladder(2, 5, eps);
    Rational sum = 0;
    for (std::size_t j = 0; j + 1 < ladder.depth(); ++j)
      sum += Rational(ladder.period(j), ladder.period(j + 1));
    CHECK(sum < eps);
  }
}

TEST_CASE("window decomposition rejects windows beyond the ladder") {
  CHECK_THROWS_AS(decompose_window(0, 33, kSmall), std::invalid_argument);
  CHECK_THROWS_AS(decompose_window(0, 0, kSmall), std::invalid_argument);
}
