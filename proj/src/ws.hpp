#ifndef CWP_SRC_WS_HPP
#define CWP_SRC_WS_HPP

// Internal pipeline workspace: an append-only, hash-consed arena of CNF
// productions over a group alphabet, with O(1) incremental per-node metrics
// (length, run count, boundary factors, purity) and the component-root
// bookkeeping of Prop (comproot). Not part of the public API.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cwp/group.hpp"
#include "cwp/program.hpp"

namespace cwp::wsd {

using cwp::Var;

struct Node {
  Var x = -1, y = -1;    // pair
  LetterId letter = -1;  // leaf
  bool is_leaf() const { return letter >= 0; }
};

// Letter-count profile of one run, indexed by Y-position of the factor.
using Profile = std::shared_ptr<const std::vector<BigInt>>;

struct RunInfo {
  int fac = -1;
  Profile prof;
  bool sorted = true;
  int first_rank = -1, last_rank = -1;
};

struct NfStatus {
  bool pure = false;
  bool interior_ok = true;  // all strictly interior runs are canonical
  RunInfo first, last;      // for pure nodes first == last == the whole run
};

struct Ws {
  const GroupContext& ctx;
  std::vector<Node> node;
  std::vector<BigInt> len, hat;
  std::vector<std::int32_t> height;
  std::vector<std::int16_t> fac_first, fac_last;
  std::vector<std::uint8_t> pure;
  std::vector<Var> fcr, lcr;  // component-root info; -2 when unknown

  std::unordered_map<std::uint64_t, Var> pair_memo;
  std::vector<Var> leaf_memo;

  std::unordered_map<Var, ExpVec> vecsum_memo;      // pure nodes
  std::unordered_map<Var, Var> comproot_memo;
  std::unordered_map<Var, Var> invnf_memo;          // nf of formal inverse
  std::unordered_map<Var, Var> relabel_memo;        // geodesic slex relabel
  std::unordered_map<Var, NfStatus> nf_memo;
  // canonical slex profiles keyed by (factor, vector)
  std::map<std::pair<int, ExpVec>, std::vector<BigInt>> canon_memo;

  // derived (syllable-level) alphabet shared by all derived programs
  std::shared_ptr<Alphabet> syl_alpha;
  std::map<std::pair<int, ExpVec>, LetterId> syl_ids;
  std::map<std::pair<Var, bool>, Program> derived_memo;

  explicit Ws(const GroupContext& c);

  int count() const { return static_cast<int>(node.size()); }
  bool merges(Var x, Var y) const { return fac_last[x] == fac_first[y]; }
  BigInt length(Var v) const { return v < 0 ? BigInt(0) : len[v]; }
  BigInt hat_len(Var v) const { return v < 0 ? BigInt(0) : hat[v]; }
  bool invariant(Var v) const { return v >= 0 && fcr[v] >= 0; }

  Var leaf(LetterId l);
  Var pair(Var x, Var y);  // both nonempty
  Var cat(Var x, Var y);   // either may be -1 (empty)
  Var cat3(Var a, Var b, Var c) { return cat(cat(a, b), c); }
  Var word(const Word& w);  // -1 for the empty word
  Var power(LetterId l, const BigInt& n);  // doubling chain, n >= 1

  Var import(const Program& p);          // SLP over ctx.alphabet; -1 if empty value
  Program export_prog(Var v) const;      // -1 => epsilon program
  // appends the sub-DAGs of the given roots to rhs as Symbols productions;
  // returns the production index of each root
  std::vector<Var> export_fragment(const std::vector<Var>& roots,
                                   std::vector<Rhs>& rhs) const;

  // raw index of the start of run k (0 <= k <= hat)
  BigInt run_start(Var v, BigInt k) const;
  // extraction (hash-consed CNF); -1 for empty results
  Var prefix(Var v, const BigInt& i);
  Var suffix(Var v, const BigInt& i);
  Var range(Var v, const BigInt& i, const BigInt& j);
  Var hat_prefix(Var v, const BigInt& k) { return v < 0 || k == 0 ? -1 : prefix(v, run_start(v, k)); }
  Var hat_suffix(Var v, const BigInt& k) { return v < 0 ? -1 : suffix(v, run_start(v, k)); }
  Var hat_range(Var v, const BigInt& k, const BigInt& l) {
    if (v < 0 || k == l) return -1;
    return range(v, run_start(v, k), run_start(v, l));
  }

  // k-th run of val(v) as a syllable
  Syllable syl_at(Var v, const BigInt& k) const;
  const ExpVec& vec_of(Var v);  // pure v
  // first `limit` runs (throws TooLongError beyond the cap)
  std::vector<Syllable> read_syllables(Var v, std::size_t cap);

  const std::vector<BigInt>& canonical(int fac, const ExpVec& v);
  BigInt geo_len(int fac, const ExpVec& v);
  BigInt geo_len(const std::vector<Syllable>& sylls);
  Var compact_syllable(const Syllable& s);               // slex SLP of one syllable
  Var compact_syllables(const std::vector<Syllable>& s); // concatenation

  // nf-reducedness of val(v) (profile characterisation; memoised per node)
  const NfStatus& nf_status(Var v);
  bool is_nf_reduced(Var v);

  // Prop (comproot): value-preserving invariant-ised equivalent of v
  Var comproot(Var v);

  // nf(val(v)^-1) for v with geodesic derived word (re-slexes components)
  Var nf_invert(Var v);
  // nf(val(v)) for v with geodesic derived word (Lemma geo2slextcslp core)
  Var slex_relabel(Var v);

  // nf(alpha . val(v)) / nf(val(v) . beta) for nf-reduced v, |alpha| bounded;
  // exact bounded head/tail syllable merge
  Var nf_prepend(const Word& alpha, Var v);
  Var nf_append(Var v, const Word& beta);
  // nf(alpha . val(v) . beta^{-1})
  Var nf_conjugate(const Word& alpha, Var v, const Word& beta);

  // nf of a concatenation of parts via syllable-stack reduction, materialising
  // the derived word (Prop slpshort); cap bounds the run count
  Var short_nf(const std::vector<Var>& parts, const std::vector<Word>& words,
               const std::vector<int>& order, std::size_t cap);

  // derived programs over the shared syllable alphabet (v invariant)
  Program derived_program(Var v, bool invert = false);
  bool derived_eq(Var a, Var b);
  BigInt derived_lcp(Var a, Var b);
  // lcp of derived(nf(a^-1)) and derived(b) without materialising the inverse
  BigInt derived_lcp_inv(Var a, Var b);

  bool eq(Var a, Var b);  // letter-level compressed equality

  LetterId syl_letter(const Syllable& s);
  AlphabetRef syl_alpha_ref() const { return syl_alpha; }

 private:
  Var fresh(Node n, const BigInt& l, const BigInt& h, int ff, int fl, bool pu, Var fc, Var lc);
  void comproot_step(Var v);
};

}  // namespace cwp::wsd

#endif
