#include "avoid/forbidden_family.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "avoid/analysis.hpp"
#include "avoid/bits.hpp"

namespace avoid {

namespace {

constexpr std::uint64_t kMaxMaterialize = 1u << 26;
constexpr std::uint64_t kMaxBudgetExponent = 1u << 22;  // bits of 2^{n*p}

void check_alpha(const Rational& alpha) {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("alpha must lie in (0,1), got " +
                                format_rational(alpha));
}

std::uint64_t budget_side(const ForbiddenFamily& f, std::uint32_t key) {
  // Grid families are budgeted against the cube volume.
  return f.kind == FamilyKind::kGrid
             ? static_cast<std::uint64_t>(key) * key
             : static_cast<std::uint64_t>(key);
}

}  // namespace

BigInt AlphaBudget::cap(std::uint64_t n) const {
  check_alpha(alpha);
  BigInt p = numerator(alpha), q = denominator(alpha);
  BigInt np = p * n;
  if (np > kMaxBudgetExponent)
    throw std::invalid_argument("budget exponent too large to evaluate");
  BigInt power = pow2(np.convert_to<std::uint64_t>());
  return floor_root(power, q.convert_to<unsigned long>());
}

bool AlphaBudget::allows(std::uint64_t count, std::uint64_t n) const {
  check_alpha(alpha);
  BigInt p = numerator(alpha), q = denominator(alpha);
  BigInt np = p * n;
  if (np > kMaxBudgetExponent)
    throw std::invalid_argument("budget exponent too large to evaluate");
  BigInt lhs;
  mpz_ui_pow_ui(lhs.backend().data(), static_cast<unsigned long>(count),
                q.convert_to<unsigned long>());
  return lhs <= pow2(np.convert_to<std::uint64_t>());
}

bool ForbiddenFamily::empty() const {
  for (const auto& [k, set] : entries)
    if (!set.empty()) return false;
  return true;
}

std::uint32_t ForbiddenFamily::min_len() const {
  for (const auto& [k, set] : entries)
    if (!set.empty()) return k;
  return 0;
}

std::uint32_t ForbiddenFamily::max_len() const {
  std::uint32_t best = 0;
  for (const auto& [k, set] : entries)
    if (!set.empty()) best = k;
  return best;
}

std::size_t ForbiddenFamily::entry_bits(std::uint32_t key) const {
  return kind == FamilyKind::kGrid ? std::size_t(key) * key : key;
}

std::size_t ForbiddenFamily::total_strings() const {
  std::size_t n = 0;
  for (const auto& [k, set] : entries) n += set.size();
  return n;
}

bool ForbiddenFamily::contains(std::string_view x) const {
  std::uint32_t key;
  if (kind == FamilyKind::kGrid) {
    // x is a side*side square; recover the side.
    std::uint32_t side = 0;
    while (std::size_t(side) * side < x.size()) ++side;
    if (std::size_t(side) * side != x.size()) return false;
    key = side;
  } else {
    key = static_cast<std::uint32_t>(x.size());
  }
  auto it = entries.find(key);
  return it != entries.end() && it->second.count(std::string(x)) > 0;
}

void ForbiddenFamily::validate() const {
  check_alpha(alpha);
  for (const auto& [k, set] : entries) {
    if (k == 0) throw std::invalid_argument("length key 0 is not allowed");
    for (const auto& s : set) {
      if (s.size() != entry_bits(k))
        throw std::invalid_argument("entry under key " + std::to_string(k) +
                                    " has length " + std::to_string(s.size()));
      if (!is_bit_string(s))
        throw std::invalid_argument("entry under key " + std::to_string(k) +
                                    " has non-bit characters");
    }
  }
}

std::vector<std::string> ForbiddenFamily::budget_warnings() const {
  std::vector<std::string> out;
  AlphaBudget budget{alpha};
  for (const auto& [k, set] : entries) {
    if (set.empty()) continue;
    if (!budget.allows(set.size(), budget_side(*this, k)))
      out.push_back("length " + std::to_string(k) + ": " +
                    std::to_string(set.size()) + " entries exceed cap " +
                    budget.cap(budget_side(*this, k)).str());
  }
  return out;
}

ParsedFamily parse_family(std::string_view text, FamilyKind kind) {
  ParsedFamily out;
  out.family.kind = kind;
  bool have_alpha = false;
  bool have_section = false;
  std::uint32_t section = 0;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("family file line " + std::to_string(lineno) +
                                ": " + what);
  };
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') {
      if (pos > text.size()) break;
      continue;
    }
    if (!have_alpha) {
      if (!line.starts_with("alpha=")) fail("expected alpha=<p>/<q> header");
      out.family.alpha = parse_rational(line.substr(6));
      check_alpha(out.family.alpha);
      have_alpha = true;
    } else if (line.starts_with("length ")) {
      auto rest = line.substr(7);
      std::uint64_t n = 0;
      if (rest.empty()) fail("missing section length");
      for (char c : rest) {
        if (c < '0' || c > '9') fail("bad section length");
        n = n * 10 + (c - '0');
        if (n > 0xffffffffull) fail("section length out of range");
      }
      if (n == 0) fail("section length must be positive");
      section = static_cast<std::uint32_t>(n);
      have_section = true;
      out.family.entries[section];  // an empty section is legal
    } else {
      if (!have_section) fail("bitstring before any length section");
      if (!is_bit_string(line)) fail("non-bit characters in entry");
      std::size_t want = out.family.entry_bits(section);
      if (line.size() != want)
        fail("entry of length " + std::to_string(line.size()) +
             " in a section expecting " + std::to_string(want) + " bits");
      auto [it, fresh] = out.family.entries[section].insert(std::string(line));
      if (!fresh)
        out.warnings.push_back("line " + std::to_string(lineno) +
                               ": duplicate entry ignored");
    }
    if (pos > text.size()) break;
  }
  if (!have_alpha) fail("missing alpha header");
  for (auto& w : out.family.budget_warnings()) out.warnings.push_back(w);
  return out;
}

std::string write_family(const ForbiddenFamily& family) {
  std::ostringstream os;
  os << "alpha=" << format_rational(family.alpha) << "\n";
  for (const auto& [k, set] : family.entries) {
    if (set.empty()) continue;
    os << "length " << k << "\n";
    for (const auto& s : set) os << s << "\n";  // std::set is already sorted
  }
  return os.str();
}

ForbiddenFamily gen_random_family(const Rational& alpha, std::uint32_t len_lo,
                                  std::uint32_t len_hi, std::uint64_t seed) {
  check_alpha(alpha);
  if (len_lo == 0 || len_hi < len_lo)
    throw std::invalid_argument("empty or invalid length range");

  ForbiddenFamily family;
  family.alpha = alpha;
  AlphaBudget budget{alpha};
  std::mt19937_64 gen(seed);

  for (std::uint32_t n = len_lo; n <= len_hi; ++n) {
    BigInt cap = budget.cap(n);
    BigInt slots = n >= 64 ? BigInt(0) : pow2(n) - 1;
    BigInt want_big = (n < 64 && slots < cap) ? slots : cap;
    if (want_big > kMaxMaterialize)
      throw std::invalid_argument("family too large to materialize at length " +
                                  std::to_string(n));
    auto want = want_big.convert_to<std::uint64_t>();
    std::set<std::string>& dst = family.entries[n];
    if (n <= 24 && want * 4 >= (1ull << n) * 3) {
      // Dense case: partial Fisher-Yates over the full enumeration.
      std::vector<std::uint64_t> all(1ull << n);
      std::iota(all.begin(), all.end(), 0);
      for (std::uint64_t i = 0; i < want; ++i) {
        std::uint64_t j = i + gen() % (all.size() - i);
        std::swap(all[i], all[j]);
        dst.insert(u64_to_bits(all[i], n));
      }
    } else {
      std::set<std::uint64_t> seen;
      while (seen.size() < want) {
        std::uint64_t v = gen();
        if (n < 64) v &= (1ull << n) - 1;
        if (seen.insert(v).second) dst.insert(u64_to_bits(v, n));
      }
    }
  }
  return family;
}

LzFamilyResult gen_lz_family(const Rational& alpha, std::uint32_t len_lo,
                             std::uint32_t len_hi, std::uint32_t enum_cap) {
  check_alpha(alpha);
  if (len_lo == 0 || len_hi < len_lo)
    throw std::invalid_argument("empty or invalid length range");
  if (len_hi > enum_cap)
    throw std::invalid_argument("length " + std::to_string(len_hi) +
                                " above enumeration cap " +
                                std::to_string(enum_cap));

  LzFamilyResult out;
  out.family.alpha = alpha;
  AlphaBudget budget{alpha};
  BigInt p = numerator(alpha), q = denominator(alpha);

  for (std::uint32_t n = len_lo; n <= len_hi; ++n) {
    const std::uint64_t total = 1ull << n;
    std::vector<std::uint32_t> phrases(total);
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(total); ++v)
      phrases[v] = static_cast<std::uint32_t>(
          lz78_phrase_estimate(u64_to_bits(static_cast<std::uint64_t>(v), n)));

    // estimate < alpha*n  <=>  estimate*q < n*p, in integers
    std::vector<std::uint64_t> hits;
    for (std::uint64_t v = 0; v < total; ++v)
      if (BigInt(phrases[v]) * q < BigInt(n) * p) hits.push_back(v);

    std::sort(hits.begin(), hits.end(), [&](std::uint64_t a, std::uint64_t b) {
      if (phrases[a] != phrases[b]) return phrases[a] < phrases[b];
      return u64_to_bits(a, n) < u64_to_bits(b, n);
    });
    BigInt cap = budget.cap(n);
    if (cap < BigInt(hits.size())) {
      hits.resize(cap.convert_to<std::size_t>());
      out.truncated_lengths.push_back(n);
    }
    auto& dst = out.family.entries[n];
    for (auto v : hits) dst.insert(u64_to_bits(v, n));
  }
  return out;
}

}  // namespace avoid
