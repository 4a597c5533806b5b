#include "fcat/word.hpp"

#include <sstream>

#include "fcat/fusion_data.hpp"

namespace fcat {

Letter Letter::sum(std::vector<int> multiplicities) {
  Letter x;
  x.mult_ = std::move(multiplicities);
  return x;
}

int Letter::multiplicity(int j) const {
  if (is_simple()) return j == label_ ? 1 : 0;
  return j < static_cast<int>(mult_.size()) ? mult_[j] : 0;
}

std::vector<std::pair<int, int>> Letter::summands() const {
  if (is_simple()) return {{label_, 0}};
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < static_cast<int>(mult_.size()); ++j)
    for (int r = 0; r < mult_[j]; ++r) out.emplace_back(j, r);
  return out;
}

Word make_word(std::initializer_list<int> labels) {
  Word w;
  for (int l : labels) w.emplace_back(l);
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Word concat(const Word& a, const Word& b, const Word& c) { return concat(concat(a, b), c); }

Word slice(const Word& w, std::size_t begin, std::size_t end) {
  if (begin > end || end > w.size()) throw BadPosition("slice out of range");
  return Word(w.begin() + static_cast<long>(begin), w.begin() + static_cast<long>(end));
}

bool is_simple_word(const Word& w) {
  for (const auto& x : w)
    if (!x.is_simple()) return false;
  return true;
}

Letter dual_letter(const CategorySpec& spec, const Letter& x) {
  if (x.is_simple()) return Letter(spec.dual[x.label()]);
  std::vector<int> m(spec.rank(), 0);
  for (int j = 0; j < spec.rank(); ++j) m[spec.dual[j]] = x.multiplicity(j);
  return Letter::sum(std::move(m));
}

Word dual_word(const CategorySpec& spec, const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(dual_letter(spec, *it));
  return out;
}

Word parse_word(const CategorySpec& spec, const std::string& text) {
  Word w;
  if (text.empty()) return w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) w.emplace_back(spec.index(tok));
  return w;
}

std::string format_word(const CategorySpec& spec, const Word& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    if (w[i].is_simple()) {
      out += spec.id(w[i].label());
    } else {
      std::string s;
      for (int j = 0; j < spec.rank(); ++j) {
        int m = w[i].multiplicity(j);
        if (!m) continue;
        if (!s.empty()) s += "+";
        s += (m > 1 ? std::to_string(m) + "*" : "") + spec.id(j);
      }
      out += "(" + s + ")";
    }
  }
  return out + "]";
}

}  // namespace fcat
