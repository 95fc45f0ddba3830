#include "avoid/rational.hpp"

#include <stdexcept>

namespace avoid {

Rational parse_rational(std::string_view text) {
  auto bad = [&] {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  };
  if (text.empty()) bad();
  std::string num, den = "1";
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    num = std::string(text);
  } else {
    num = std::string(text.substr(0, slash));
    den = std::string(text.substr(slash + 1));
  }
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!is_int(num) || !is_int(den)) bad();
  BigInt n(num), d(den);
  if (d == 0) bad();
  return Rational(n, d);
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

BigInt pow2(std::uint64_t e) {
  BigInt v = 1;
  v <<= static_cast<unsigned long>(e);
  return v;
}

BigInt ceil_rational(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);  // d > 0 canonically
  BigInt q;
  mpz_cdiv_q(q.backend().data(), n.backend().data(), d.backend().data());
  return q;
}

BigInt floor_root(const BigInt& x, unsigned long q) {
  if (x < 0) throw std::invalid_argument("floor_root of a negative value");
  if (q == 0) throw std::invalid_argument("floor_root with q = 0");
  BigInt r;
  mpz_root(r.backend().data(), x.backend().data(), q);
  return r;
}

}  // namespace avoid
