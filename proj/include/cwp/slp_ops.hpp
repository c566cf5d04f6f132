#ifndef CWP_SLP_OPS_HPP
#define CWP_SLP_OPS_HPP

#include <optional>
#include <variant>
#include <vector>

#include "cwp/program.hpp"

namespace cwp {

// ---- core SLP calculus (Symbols-only programs) ----

// Per-variable value lengths, one bottom-up pass with exact sums.
std::vector<BigInt> var_lengths(const Program& p);
BigInt value_length(const Program& p);

// Removes variables unreachable from the start; start becomes the unique
// variable of maximal height.
Program trim(const Program& p);

// Chomsky normal form: every rhs a single letter or a pair of variables,
// except that a program with empty value is the one-variable epsilon program.
// Long rhs split left-associatively; chain rules inlined.
Program to_cnf(const Program& p);

// SLP with value val(p)[i:j).
Program extract_substring(const Program& p, const BigInt& i, const BigInt& j);

// Concatenation of programs and explicit words, in order.
using ConcatPart = std::variant<Program, Word>;
Program concat(AlphabetRef alphabet, const std::vector<ConcatPart>& parts);

// Restriction of p to A: start variable A, exactly the variables reachable
// from A.
Program restriction(const Program& p, Var a);

int height_of(const Program& p, Var a);

struct Dfa {
  int states = 0;
  int start = 0;
  std::vector<std::vector<int>> delta;  // delta[state][letter]
  std::vector<bool> accepting;
};

// val(p) in L(m), by composing per-variable state maps bottom-up.
bool fsa_membership(const Program& p, const Dfa& m);

// Explicit value; refuses if |val(p)| > max_len.
Word decompress(const Program& p, std::size_t max_len);

// |p| <= max(C log2 |val(p)|, 1), for |val(p)| > 1. C given as a rational
// num/den to keep the test exact.
bool is_compact(const Program& p, long c_num, long c_den = 1);

// Counted run-time check of Prop (slp_results)(ii): |val(p)| <= 3^{|p|/3}.
void check_value_bound(const Program& p);

// Formal inverse program: value is the reversed word with inverted letters.
Program inverse_program(const Program& p);

}  // namespace cwp

#endif
