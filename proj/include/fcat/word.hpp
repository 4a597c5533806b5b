#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace fcat {

class CategorySpec;

// A tensor factor: either a simple label or a semisimple sum ⊕ j^{m_j}.
class Letter {
 public:
  Letter() = default;
  explicit Letter(int label) : label_(label) {}

  static Letter sum(std::vector<int> multiplicities);

  bool is_simple() const { return label_ >= 0; }
  int label() const { return label_; }
  int multiplicity(int j) const;

  // (label, copy) pairs in deterministic order
  std::vector<std::pair<int, int>> summands() const;

  auto operator<=>(const Letter&) const = default;
  bool operator==(const Letter&) const = default;

 private:
  int label_ = -1;
  std::vector<int> mult_;
};

using Word = std::vector<Letter>;

Word make_word(std::initializer_list<int> labels);
Word concat(const Word& a, const Word& b);
Word concat(const Word& a, const Word& b, const Word& c);
Word slice(const Word& w, std::size_t begin, std::size_t end);
bool is_simple_word(const Word& w);

Letter dual_letter(const CategorySpec& spec, const Letter& x);
Word dual_word(const CategorySpec& spec, const Word& w);

// "tau,tau" -> word; empty string -> unit word
Word parse_word(const CategorySpec& spec, const std::string& text);
std::string format_word(const CategorySpec& spec, const Word& w);

}  // namespace fcat
