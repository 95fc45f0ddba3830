#include "avoid/aho_corasick.hpp"

#include <deque>
#include <stdexcept>

namespace avoid {

void AhoCorasick::add_pattern(std::string_view pattern) {
  if (built_) throw std::logic_error("add_pattern after build");
  if (pattern.empty()) throw std::invalid_argument("empty pattern");
  std::int32_t node = 0;
  for (char c : pattern) {
    int b = c - '0';
    if (b != 0 && b != 1) throw std::invalid_argument("non-bit pattern");
    if (nodes_[node].next[b] == 0) {
      nodes_[node].next[b] = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back({});
    }
    node = nodes_[node].next[b];
  }
  if (nodes_[node].match_len == 0) ++pattern_count_;
  nodes_[node].match_len = static_cast<std::uint32_t>(pattern.size());
}

void AhoCorasick::build() {
  // BFS fills failure links and flattens them into the goto table.
  std::deque<std::int32_t> queue;
  for (int b = 0; b < 2; ++b)
    if (nodes_[0].next[b]) queue.push_back(nodes_[0].next[b]);
  while (!queue.empty()) {
    std::int32_t u = queue.front();
    queue.pop_front();
    Node& nu = nodes_[u];
    nu.dict_link =
        nodes_[nu.fail].match_len ? nu.fail : nodes_[nu.fail].dict_link;
    for (int b = 0; b < 2; ++b) {
      std::int32_t v = nu.next[b];
      std::int32_t w = nodes_[nu.fail].next[b];
      if (v) {
        nodes_[v].fail = w;
        queue.push_back(v);
      } else {
        nu.next[b] = w;
      }
    }
  }
  built_ = true;
}

}  // namespace avoid
