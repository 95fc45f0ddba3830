#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace avoid {

// Multi-pattern matcher over the alphabet {'0','1'} with a dense goto
// table and dictionary-suffix links, so every match of every pattern is
// reported in one left-to-right pass.
class AhoCorasick {
 public:
  AhoCorasick() { nodes_.push_back({}); }

  void add_pattern(std::string_view pattern);
  void build();  // after the last add_pattern

  bool empty() const { return pattern_count_ == 0; }
  std::size_t pattern_count() const { return pattern_count_; }

  // on_match(end_index, length): window is [end_index - length + 1, end+1).
  template <typename F>
  void scan(std::string_view text, F&& on_match) const {
    std::int32_t state = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      state = nodes_[state].next[text[i] - '0'];
      for (std::int32_t hit = nodes_[state].match_len ? state
                                                      : nodes_[state].dict_link;
           hit > 0; hit = nodes_[hit].dict_link)
        on_match(i, static_cast<std::uint32_t>(nodes_[hit].match_len));
    }
  }

 private:
  struct Node {
    std::array<std::int32_t, 2> next{0, 0};
    std::int32_t fail = 0;
    std::int32_t dict_link = 0;  // nearest suffix that is a pattern
    std::uint32_t match_len = 0;
  };

  std::vector<Node> nodes_;
  std::size_t pattern_count_ = 0;
  bool built_ = false;
};

}  // namespace avoid
