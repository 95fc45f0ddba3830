// Timing harness comparing the OpenMP kernels against their serial
// reference implementations, plus the automaton scanner against the
// quadratic one. Every pair is checked for agreement before timing is
// reported, so a speedup never hides a semantic drift.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "avoid/analysis.hpp"
#include "avoid/bits.hpp"
#include "avoid/forbidden_family.hpp"
#include "avoid/grid_scaffold.hpp"
#include "avoid/sampler.hpp"
#include "avoid/scaffold.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace avoid;

namespace {

template <typename F>
double time_s(F&& fn, int reps = 3) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, dt);
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-34s serial %8.3f ms   parallel %8.3f ms   x%.2f   %s\n", name,
              serial * 1e3, parallel * 1e3, serial / parallel,
              agree ? "agree" : "MISMATCH");
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> quadratic_scan(
    const std::string& x, const ForbiddenFamily& family, std::uint32_t min_len) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t start = 0; start < x.size(); ++start)
    for (const auto& [len, set] : family.entries) {
      if (len < min_len || start + len > x.size()) continue;
      if (set.count(x.substr(start, len))) out.push_back({start, len});
    }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::stoull(argv[1]) : 1 << 20;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

  std::mt19937_64 gen(1);
  ForbiddenFamily family = gen_random_family(Rational(1, 2), 8, 12, 1);
  std::string text = draw_bits(gen, n);

  {  // quadratic vs automaton (both serial)
    auto naive = quadratic_scan(text, family, 8);
    auto fast = scan_violations_serial(text, family, 8);
    bool agree = naive.size() == fast.size();
    for (std::size_t i = 0; agree && i < naive.size(); ++i)
      agree = naive[i].first == fast[i].start &&
              naive[i].second == fast[i].length;
    double t_naive = time_s([&] { quadratic_scan(text, family, 8); }, 1);
    double t_fast = time_s([&] { scan_violations_serial(text, family, 8); });
    report("scan: quadratic vs automaton", t_naive, t_fast, agree);
  }

  {  // streaming vs chunked automaton scan
    bool agree = scan_violations(text, family, 8) ==
                 scan_violations_serial(text, family, 8);
    double t_ser = time_s([&] { scan_violations_serial(text, family, 8); });
    double t_par = time_s([&] { scan_violations(text, family, 8); });
    report("scan: automaton chunked", t_ser, t_par, agree);
  }

  {  // sequence scaffolding
    PeriodLadder ladder({4, 64, 4096});
    std::string source = draw_bits(gen, n);
    std::uint64_t len = (n * 9) / 10;
    bool agree = build_sequence(source, ladder, len) ==
                 build_sequence_serial(source, ladder, len);
    double t_ser = time_s([&] { build_sequence_serial(source, ladder, len); });
    double t_par = time_s([&] { build_sequence(source, ladder, len); });
    report("scaffold: sequence fill", t_ser, t_par, agree);
  }

  {  // grid scaffolding
    GridScaffold scaffold(GridLadder{2, {4, 64, 4096}});
    Box region{{-1024, -1024, 0}, {1024, 1024, 0}};
    std::string source = draw_bits(gen, scaffold.source_demand(region));
    bool agree = scaffold.build_region(source, region) ==
                 scaffold.build_region_serial(source, region);
    double t_ser =
        time_s([&] { scaffold.build_region_serial(source, region); }, 1);
    double t_par = time_s([&] { scaffold.build_region(source, region); });
    report("scaffold: grid fill", t_ser, t_par, agree);
  }

  {  // windowed complexity profile
    std::string omega = draw_bits(gen, std::min<std::size_t>(n, 1 << 17));
    std::vector<std::uint32_t> lengths = {16, 64, 256};
    auto par = complexity_profile(omega, lengths);
    auto ser = complexity_profile_serial(omega, lengths);
    bool agree = par.size() == ser.size();
    for (std::size_t i = 0; agree && i < par.size(); ++i)
      agree = par[i].min_estimate == ser[i].min_estimate &&
              par[i].sum_estimate == ser[i].sum_estimate;
    double t_ser =
        time_s([&] { complexity_profile_serial(omega, lengths); }, 1);
    double t_par = time_s([&] { complexity_profile(omega, lengths); });
    report("analysis: window lz78 profile", t_ser, t_par, agree);
  }

  return 0;
}
