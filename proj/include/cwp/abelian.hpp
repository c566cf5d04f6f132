#ifndef CWP_ABELIAN_HPP
#define CWP_ABELIAN_HPP

#include <string>
#include <vector>

#include "cwp/bigint.hpp"
#include "cwp/program.hpp"

namespace cwp {

using ExpVec = std::vector<BigInt>;

struct ExtraGen {
  std::string name;
  std::vector<std::int64_t> vec;
};

// One free abelian factor H = Z^rank with its extended ordered generating set
// Y = {z_i^{+-M}} u {z_i^{+-1}} u X, as used for shortlex normal forms.
// Torsion is excluded (e = 1 throughout).
struct FactorSpec {
  int rank = 0;
  std::vector<ExtraGen> extras;
  std::int64_t M = 0;
  // Ordered Y: entries are global letter ids, index = position in the order.
  std::vector<LetterId> y_ids;
  // layout of y_ids: for i < rank: positions 2i, 2i+1 are z_i^{+M}, z_i^{-M};
  // then 2(rank+i), .. are z_i^{+1}, z_i^{-1}; then extras x, x^{-1}.
  LetterId m_letter(int i, bool pos) const { return y_ids[2 * i + (pos ? 0 : 1)]; }
  LetterId unit_letter(int i, bool pos) const { return y_ids[2 * rank + 2 * i + (pos ? 0 : 1)]; }
  LetterId extra_letter(int k, bool pos) const {
    return y_ids[4 * rank + 2 * k + (pos ? 0 : 1)];
  }
  int y_size() const { return static_cast<int>(y_ids.size()); }
};

// Computes M and the ordered Y for a factor; letters are appended to the
// alphabet with tokens z<k>, z<k>^-1, z<k>^<M>, z<k>^-<M> (k starting at
// first_basis_index) and extra generators by name. Rejects zero extras.
FactorSpec build_factor_spec(Alphabet& alphabet, int rank,
                             const std::vector<ExtraGen>& extras,
                             int first_basis_index);

// Exponent vector of val(p); every letter of p must belong to factor f.
ExpVec abelian_vector(const Program& p, const FactorSpec& f);
ExpVec word_vector(const Alphabet& a, const Word& w, const FactorSpec& f);

// SLP with value x^n by the binary doubling construction
// (size popcount(n) + 2 floor(log2 n), <= 3 log2(n) + 1).
Program power_slp(AlphabetRef alphabet, LetterId x, const BigInt& n);

// Compact SLP with value prod_i basis_i^{v_i}, written left to right.
Program compact_vector_slp(AlphabetRef alphabet, const FactorSpec& f, const ExpVec& v);

// Letter multiset of the shortlex-least word over Y representing v,
// as counts indexed by Y-position. The slex word is this multiset sorted.
std::vector<BigInt> canonical_profile(const FactorSpec& f, const ExpVec& v);

// Geodesic length over Y of the element v.
BigInt y_geodesic_length(const FactorSpec& f, const ExpVec& v);

// The shortlex-least word itself (refuses if longer than cap).
Word slex_word(const FactorSpec& f, const ExpVec& v, std::size_t cap = 1u << 20);

// Compact SLP whose value is the slex word of the given profile / vector.
Program profile_slp(AlphabetRef alphabet, const FactorSpec& f,
                    const std::vector<BigInt>& profile);
Program slex_slp(AlphabetRef alphabet, const FactorSpec& f, const Program& p);
Program slex_vector_slp(AlphabetRef alphabet, const FactorSpec& f, const ExpVec& v);

}  // namespace cwp

#endif
