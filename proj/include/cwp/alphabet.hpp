#ifndef CWP_ALPHABET_HPP
#define CWP_ALPHABET_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cwp/error.hpp"

namespace cwp {

using LetterId = std::int32_t;

// A letter of the symmetric generating set. For group alphabets each letter
// carries its parabolic factor (0-based), its exponent vector over that
// factor's basis, its inverse letter, and its rank in the factor's ordered
// extended set Y. Free-form alphabets (plain strings) leave factor = -1.
struct Letter {
  std::string token;
  int factor = -1;
  std::vector<std::int64_t> vec;
  LetterId inverse = -1;
  int y_rank = -1;  // position within the ordered Y of its factor
};

class Alphabet {
 public:
  LetterId add(Letter l) {
    auto it = by_token_.find(l.token);
    if (it != by_token_.end()) throw Error("duplicate letter token: " + l.token);
    LetterId id = static_cast<LetterId>(letters_.size());
    by_token_.emplace(l.token, id);
    letters_.push_back(std::move(l));
    return id;
  }

  LetterId id_of(const std::string& token) const {
    auto it = by_token_.find(token);
    if (it == by_token_.end()) throw Error("unknown letter token: " + token);
    return it->second;
  }
  bool has(const std::string& token) const { return by_token_.count(token) != 0; }

  const Letter& operator[](LetterId id) const { return letters_.at(id); }
  Letter& mutable_ref(LetterId id) { return letters_.at(id); }
  int size() const { return static_cast<int>(letters_.size()); }
  LetterId inv(LetterId id) const {
    LetterId r = letters_.at(id).inverse;
    if (r < 0) throw Error("letter has no inverse: " + letters_.at(id).token);
    return r;
  }
  int factor_of(LetterId id) const { return letters_.at(id).factor; }

  // Fixed total order used by every shortlex enumeration over Sigma.
  // Letters are created in order (factor ascending, Y-rank ascending), so the
  // id order is the ordering.
  bool less(LetterId a, LetterId b) const { return a < b; }

 private:
  std::vector<Letter> letters_;
  std::map<std::string, LetterId> by_token_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

// Builds a plain (non-group) alphabet from tokens; inverses unset.
AlphabetRef make_plain_alphabet(const std::vector<std::string>& tokens);

using Word = std::vector<LetterId>;

// Formal inverse: reverse the word and invert each letter.
Word inverse_word(const Alphabet& a, const Word& w);

std::string word_to_string(const Alphabet& a, const Word& w);

}  // namespace cwp

#endif
