#include "cwp/alphabet.hpp"

namespace cwp {

AlphabetRef make_plain_alphabet(const std::vector<std::string>& tokens) {
  auto a = std::make_shared<Alphabet>();
  for (const auto& t : tokens) a->add(Letter{t, -1, {}, -1, -1});
  return a;
}

Word inverse_word(const Alphabet& a, const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(a.inv(*it));
  return r;
}

std::string word_to_string(const Alphabet& a, const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += a[w[i]].token;
  }
  return s;
}

}  // namespace cwp
