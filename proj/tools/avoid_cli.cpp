#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "avoid/analysis.hpp"
#include "avoid/bits.hpp"
#include "avoid/forbidden_family.hpp"
#include "avoid/grid_scaffold.hpp"
#include "avoid/lll_planner.hpp"
#include "avoid/sampler.hpp"
#include "avoid/scaffold.hpp"
#include "avoid/sequence_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace avoid;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos)
    throw CLI::ValidationError("range", "expected <a>..<b>, got '" + text + "'");
  return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
}

// FILE or random:<seed>; needs bits of source material.
std::string load_source(const std::string& spec, std::uint64_t need) {
  if (spec.rfind("random:", 0) == 0) {
    std::mt19937_64 gen(std::stoull(spec.substr(7)));
    return draw_bits(gen, need);
  }
  std::string bits = parse_sequence(read_text_file(spec));
  if (bits.size() < need)
    throw std::runtime_error("source file supplies " +
                             std::to_string(bits.size()) + " bits, need " +
                             std::to_string(need));
  return bits;
}

ParsedFamily load_family(const std::string& path, FamilyKind kind) {
  ParsedFamily parsed = parse_family(read_text_file(path), kind);
  for (const auto& w : parsed.warnings)
    std::cerr << "warning: " << path << ": " << w << "\n";
  return parsed;
}

std::string trace_stats(const SampleTrace& trace, std::uint64_t seed) {
  std::string s;
  s += "seed=" + std::to_string(seed) + "\n";
  s += "converged=" + std::to_string(trace.converged ? 1 : 0) + "\n";
  s += "rounds=" + std::to_string(trace.rounds) + "\n";
  s += "violations_initial=" + std::to_string(trace.violations_initial) + "\n";
  return s;
}

std::string with_seed(const std::string& pattern, std::uint64_t seed) {
  std::string out = pattern;
  auto pos = out.find("{seed}");
  if (pos == std::string::npos)
    throw std::runtime_error("batch output path needs a {seed} placeholder");
  out.replace(pos, 6, std::to_string(seed));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forbidden-substring avoidance toolkit"};
  app.require_subcommand(1);

  // ---- plan ----------------------------------------------------------
  std::string plan_alpha, plan_out;
  int plan_dim = 1;
  std::int64_t plan_ceiling = kDefaultSearchCeiling;
  auto* plan_cmd = app.add_subcommand("plan", "certify resampling parameters");
  plan_cmd->add_option("--alpha", plan_alpha, "budget exponent p/q")->required();
  plan_cmd->add_option("--dim", plan_dim, "dimension (default 1)");
  plan_cmd->add_option("--ceiling", plan_ceiling, "search ceiling for L");
  plan_cmd->add_option("--out", plan_out, "output file (default stdout)");

  // ---- forbidden gen -------------------------------------------------
  auto* forbidden_cmd = app.add_subcommand("forbidden", "family generators");
  forbidden_cmd->require_subcommand(1);
  std::string gen_alpha, gen_lengths, gen_mode = "random", gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = forbidden_cmd->add_subcommand("gen", "generate a family");
  gen_cmd->add_option("--alpha", gen_alpha)->required();
  gen_cmd->add_option("--lengths", gen_lengths, "<a>..<b>")->required();
  gen_cmd->add_option("--seed", gen_seed, "seed (random mode)");
  gen_cmd->add_option("--mode", gen_mode)->check(CLI::IsMember({"random", "lz"}));
  gen_cmd->add_option("--out", gen_out);

  // ---- sample ---------------------------------------------------------
  std::string sample_family, sample_out, sample_stats, sample_select = "leftmost";
  std::string sample_seeds;
  std::uint64_t sample_n = 0, sample_seed = 0, sample_rounds = 1'000'000;
  std::uint32_t sample_min_len = 0;
  int sample_jobs = 1;
  bool sample_grid = false;
  auto* sample_cmd = app.add_subcommand("sample", "resample an avoiding string");
  sample_cmd->add_option("--family", sample_family)->required();
  sample_cmd->add_option("--n", sample_n, "length or grid side")->required();
  sample_cmd->add_option("--seed", sample_seed);
  sample_cmd->add_option("--seeds", sample_seeds, "batch range <a>..<b>");
  sample_cmd->add_option("--jobs", sample_jobs, "parallel batch workers");
  sample_cmd->add_option("--min-len", sample_min_len,
                         "least enforced length (default: family min)");
  sample_cmd->add_option("--max-rounds", sample_rounds);
  sample_cmd->add_option("--select", sample_select)
      ->check(CLI::IsMember({"leftmost", "random"}));
  sample_cmd->add_flag("--grid", sample_grid);
  sample_cmd->add_option("--out", sample_out);
  sample_cmd->add_option("--stats-out", sample_stats);

  // ---- scaffold --------------------------------------------------------
  std::string scaffold_ladder, scaffold_source, scaffold_out;
  std::uint64_t scaffold_n = 0;
  auto* scaffold_cmd =
      app.add_subcommand("scaffold", "build an almost periodic sequence");
  scaffold_cmd->add_option("--ladder", scaffold_ladder, "n0,n1,...")->required();
  scaffold_cmd->add_option("--source", scaffold_source, "FILE or random:<seed>")
      ->required();
  scaffold_cmd->add_option("--n", scaffold_n)->required();
  scaffold_cmd->add_option("--out", scaffold_out);

  // ---- grid -------------------------------------------------------------
  std::string grid_ladder, grid_source, grid_region, grid_out;
  int grid_dim = 2;
  auto* grid_cmd = app.add_subcommand("grid", "build an almost periodic grid");
  grid_cmd->add_option("--ladder", grid_ladder)->required();
  grid_cmd->add_option("--d", grid_dim, "dimension (default 2)");
  grid_cmd->add_option("--region", grid_region, "<lo>..<hi>x<lo>..<hi>")
      ->required();
  grid_cmd->add_option("--source", grid_source, "FILE or random:<seed>")
      ->required();
  grid_cmd->add_option("--out", grid_out);

  // ---- verify -------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "exact verifiers");
  verify_cmd->require_subcommand(1);

  std::string va_input, va_family;
  std::uint32_t va_min_len = 0;
  bool va_grid = false;
  auto* va_cmd = verify_cmd->add_subcommand("avoid", "forbidden-window check");
  va_cmd->add_option("--input", va_input)->required();
  va_cmd->add_option("--family", va_family)->required();
  va_cmd->add_option("--min-len", va_min_len);
  va_cmd->add_flag("--grid", va_grid);

  std::string vp_input, vp_pattern;
  std::uint64_t vp_window = 0;
  auto* vp_cmd = verify_cmd->add_subcommand("ap", "window recurrence check");
  vp_cmd->add_option("--input", vp_input)->required();
  vp_cmd->add_option("--pattern", vp_pattern)->required();
  vp_cmd->add_option("--window", vp_window)->required();

  std::string vl_input, vl_ladder;
  std::int64_t vl_level = -1;
  auto* vl_cmd = verify_cmd->add_subcommand("ladder", "prefix periodicity check");
  vl_cmd->add_option("--input", vl_input)->required();
  vl_cmd->add_option("--ladder", vl_ladder)->required();
  vl_cmd->add_option("--s", vl_level, "single level (default: all)");

  // ---- decompose -----------------------------------------------------------
  std::string dec_ladder, dec_window;
  auto* dec_cmd = app.add_subcommand("decompose", "window-to-source intervals");
  dec_cmd->add_option("--ladder", dec_ladder)->required();
  dec_cmd->add_option("--window", dec_window, "<m>,<k>")->required();

  // ---- stats ------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "empirical diagnostics");
  stats_cmd->require_subcommand(1);
  std::string sc_input, sc_lengths, sc_out;
  auto* sc_cmd = stats_cmd->add_subcommand("complexity", "windowed lz78 table");
  sc_cmd->add_option("--input", sc_input)->required();
  sc_cmd->add_option("--lengths", sc_lengths, "l1,l2,...")->required();
  sc_cmd->add_option("--out", sc_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) {
      Rational alpha = parse_rational(plan_alpha);
      if (plan_dim == 1)
        emit(plan_out, plan_text(make_plan(alpha, plan_ceiling)));
      else
        emit(plan_out, plan_text(make_grid_plan(alpha, plan_dim, plan_ceiling)));
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      Rational alpha = parse_rational(gen_alpha);
      auto [lo, hi] = parse_range(gen_lengths);
      ForbiddenFamily family;
      if (gen_mode == "random") {
        family = gen_random_family(alpha, static_cast<std::uint32_t>(lo),
                                   static_cast<std::uint32_t>(hi), gen_seed);
      } else {
        LzFamilyResult result = gen_lz_family(
            alpha, static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi));
        for (auto n : result.truncated_lengths)
          std::cerr << "note: length " << n << " truncated to the budget cap\n";
        family = std::move(result.family);
      }
      emit(gen_out, write_family(family));
      return kExitOk;
    }

    if (sample_cmd->parsed()) {
      FamilyKind kind = sample_grid ? FamilyKind::kGrid : FamilyKind::kSequence;
      ForbiddenFamily family = load_family(sample_family, kind).family;
      SamplerConfig config;
      config.n = sample_n;
      config.max_rounds = sample_rounds;
      config.min_len = sample_min_len ? sample_min_len
                       : family.empty() ? 1
                                        : family.min_len();
      config.selection = sample_select == "random" ? SelectionRule::kRandom
                                                   : SelectionRule::kLeftmost;
      auto run_one = [&](std::uint64_t seed) {
        SamplerConfig c = config;
        c.seed = seed;
        return sample_grid ? resample_grid(family, c) : resample_run(family, c);
      };
      if (sample_seeds.empty()) {
        SampleTrace trace = run_one(sample_seed);
        emit(sample_out, sample_grid ? format_grid_rows(trace.rows)
                                     : format_sequence(trace.sequence()));
        if (!sample_stats.empty())
          write_text_file(sample_stats, trace_stats(trace, sample_seed));
        return trace.converged ? kExitOk : kExitVerdict;
      }
      auto [lo, hi] = parse_range(sample_seeds);
      if (hi < lo) throw std::runtime_error("empty seed range");
      bool all_converged = true;
#ifdef _OPENMP
      omp_set_num_threads(std::max(1, sample_jobs));
#endif
#pragma omp parallel for schedule(dynamic) reduction(&& : all_converged)
      for (std::int64_t seed = static_cast<std::int64_t>(lo);
           seed <= static_cast<std::int64_t>(hi); ++seed) {
        SampleTrace trace = run_one(static_cast<std::uint64_t>(seed));
        write_text_file(with_seed(sample_out, seed),
                        sample_grid ? format_grid_rows(trace.rows)
                                    : format_sequence(trace.sequence()));
        if (!sample_stats.empty())
          write_text_file(with_seed(sample_stats, seed),
                          trace_stats(trace, seed));
        all_converged = all_converged && trace.converged;
      }
      return all_converged ? kExitOk : kExitVerdict;
    }

    if (scaffold_cmd->parsed()) {
      PeriodLadder ladder = PeriodLadder::parse(scaffold_ladder);
      std::string source =
          load_source(scaffold_source, fresh_count(ladder, scaffold_n));
      emit(scaffold_out,
           format_sequence(build_sequence(source, ladder, scaffold_n)));
      return kExitOk;
    }

    if (grid_cmd->parsed()) {
      GridLadder ladder;
      ladder.dim = grid_dim;
      ladder.periods = PeriodLadder::parse(grid_ladder).periods();
      GridScaffold scaffold(ladder);
      GridFile file;
      file.dim = grid_dim;
      file.region = parse_region(grid_region, grid_dim);
      std::string source =
          load_source(grid_source, scaffold.source_demand(file.region));
      file.cells = scaffold.build_region(source, file.region);
      emit(grid_out, format_grid_file(file));
      return kExitOk;
    }

    if (va_cmd->parsed()) {
      FamilyKind kind = va_grid ? FamilyKind::kGrid : FamilyKind::kSequence;
      ForbiddenFamily family = load_family(va_family, kind).family;
      std::uint32_t min_len =
          va_min_len ? va_min_len : family.empty() ? 1 : family.min_len();
      if (va_grid) {
        auto rows = parse_grid_rows(read_text_file(va_input));
        AvoidanceResult res = verify_grid_avoidance(rows, family, min_len);
        if (res.ok) return kExitOk;
        std::cout << "violation row=" << res.row << " col=" << res.col
                  << " side=" << res.length << "\n";
        return kExitVerdict;
      }
      std::string bits = parse_sequence(read_text_file(va_input));
      AvoidanceResult res = verify_avoidance(bits, family, min_len);
      if (res.ok) return kExitOk;
      std::cout << "violation position=" << res.position
                << " length=" << res.length << "\n";
      return kExitVerdict;
    }

    if (vp_cmd->parsed()) {
      std::string bits = parse_sequence(read_text_file(vp_input));
      if (!is_bit_string(vp_pattern) || vp_pattern.empty())
        throw std::runtime_error("pattern must be a nonempty bit string");
      if (window_recurrence_holds(bits, vp_pattern, vp_window)) return kExitOk;
      for (std::uint64_t start = 0; start + vp_window <= bits.size(); ++start) {
        std::string_view window =
            std::string_view(bits).substr(start, vp_window);
        if (window.find(vp_pattern) == std::string_view::npos) {
          std::cout << "window at " << start << " misses the pattern\n";
          break;
        }
      }
      return kExitVerdict;
    }

    if (vl_cmd->parsed()) {
      PeriodLadder ladder = PeriodLadder::parse(vl_ladder);
      std::string bits = parse_sequence(read_text_file(vl_input));
      std::size_t from = vl_level >= 0 ? static_cast<std::size_t>(vl_level) : 0;
      std::size_t to = vl_level >= 0 ? from + 1 : ladder.depth() - 1;
      for (std::size_t s = from; s < to; ++s) {
        auto mismatch = ladder_periodicity_mismatch(bits, ladder, s);
        if (mismatch) {
          std::cout << "mismatch level=" << s << " position=" << *mismatch
                    << "\n";
          return kExitVerdict;
        }
      }
      return kExitOk;
    }

    if (dec_cmd->parsed()) {
      PeriodLadder ladder = PeriodLadder::parse(dec_ladder);
      auto comma = dec_window.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error("window must be <m>,<k>");
      std::uint64_t m = std::stoull(dec_window.substr(0, comma));
      std::uint64_t k = std::stoull(dec_window.substr(comma + 1));
      WindowDecomposition dec = decompose_window(m, k, ladder);
      std::cout << "window=[" << m << "," << m + k << ")\n";
      std::cout << "cutoff_rank=" << dec.cutoff_rank << "\n";
      std::cout << "small_rank_count=" << dec.small_rank_count << "\n";
      std::cout << "interval_total=" << dec.total_interval_len << "\n";
      std::cout << "density_ok=" << (dec.density_ok ? 1 : 0) << "\n";
      for (const auto& iv : dec.intervals)
        std::cout << "interval=[" << iv.a << "," << iv.b << ") omega_pos="
                  << iv.omega_pos << "\n";
      return kExitOk;
    }

    if (sc_cmd->parsed()) {
      std::string bits = parse_sequence(read_text_file(sc_input));
      std::vector<std::uint32_t> lengths;
      std::size_t pos = 0;
      while (pos < sc_lengths.size()) {
        std::size_t comma = sc_lengths.find(',', pos);
        if (comma == std::string::npos) comma = sc_lengths.size();
        lengths.push_back(
            static_cast<std::uint32_t>(std::stoul(sc_lengths.substr(pos, comma - pos))));
        pos = comma + 1;
      }
      emit(sc_out, complexity_csv(complexity_profile(bits, lengths)));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
