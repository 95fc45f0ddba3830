#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace avoid {

inline bool is_bit_string(std::string_view s) {
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return true;
}

// Most significant bit first, so "110" -> 6.
inline std::uint64_t bits_to_u64(std::string_view s) {
  std::uint64_t v = 0;
  for (char c : s) v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  return v;
}

inline std::string u64_to_bits(std::uint64_t v, unsigned len) {
  std::string s(len, '0');
  for (unsigned i = 0; i < len; ++i)
    if ((v >> (len - 1 - i)) & 1u) s[i] = '1';
  return s;
}

// One engine draw per bit keeps the stream layout independent of word
// packing; reproducibility matters more than draw economy here.
inline char draw_bit_char(std::mt19937_64& gen) {
  return static_cast<char>('0' + (gen() & 1u));
}

inline std::string draw_bits(std::mt19937_64& gen, std::size_t n) {
  std::string s(n, '0');
  for (auto& c : s) c = draw_bit_char(gen);
  return s;
}

}  // namespace avoid
