#ifndef CWP_PIPELINE_HPP
#define CWP_PIPELINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwp/group.hpp"
#include "cwp/program.hpp"

namespace cwp {

// Per-variable component-root index produced by ensure_component_roots.
struct RootIndex {
  // for every variable: root of the first/last component of its value, and
  // the factor when the whole value lies in one Sigma_i^*
  std::vector<Var> first_comp_root, last_comp_root;
  std::vector<int> pure_factor;  // -1 when mixed
};

// Prop (comproot): CNF program with the same value in which, for every
// variable A, every component of val(A) has a root in the restriction to A.
Program ensure_component_roots(const Program& p, const GroupContext& ctx,
                               RootIndex* roots = nullptr);

enum class SplitClass { NonSplitting, Splitting };

// Classifies the occurrence val(p)[start : start+len) per Def (split).
SplitClass split_check(const Program& p, const GroupContext& ctx, const BigInt& start,
                       const BigInt& sub_len);

// Cor (gamlen): compressed (derived-word) index <-> raw index conversion.
// raw_to_compressed requires the raw span to be a union of complete
// components (error otherwise).
std::pair<BigInt, BigInt> compressed_to_raw(const Program& p, const GroupContext& ctx,
                                            const BigInt& k, const BigInt& l);
std::pair<BigInt, BigInt> raw_to_compressed(const Program& p, const GroupContext& ctx,
                                            const BigInt& i, const BigInt& j);

// Derived-word length of the value.
BigInt hat_length(const Program& p, const GroupContext& ctx);

// Is val(p) in the normal-form language L0.
bool is_nf_reduced_slp(const Program& p, const GroupContext& ctx);

// Spec-described slow route for the same predicate (per-component
// compressed_equality against the slex SLP); used for cross-checks.
bool is_nf_reduced_slp_by_equality(const Program& p, const GroupContext& ctx);

// Lemma (ftwd): SLP for nf(val(p)), for p whose components are shortlex
// reduced and whose derived word is a quasigeodesic without backtracking.
// Witness tables search connectors up to |gamma| <= e'.
Program nf_from_quasigeodesic(const Program& p, const GroupContext& ctx);

// Prop (slpshort): SLP for nf(val(p)) of size <= C |w^_nf| log2 max(|w_nf|,2).
Program nf_short_hat(const Program& p, const GroupContext& ctx);
extern const long kShortHatSizeC;

// Prop (tslp-slp) / Prop (tcslp-tslp) / Thm (convert).
Program tslp_to_slp(const Program& u, const GroupContext& ctx);
Program tcslp_to_tslp(const Program& t, const GroupContext& ctx);
Program convert_tcslp(const Program& t, const GroupContext& ctx);

// Cor (addtail): SLP for nf(val(p) v), |v| <= L, val(p) nf-reduced.
Program append_bounded_suffix(const Program& p, const Word& v, const GroupContext& ctx);

// Thm (slextcslp): non-splitting geodesic nf-reduced TCSLP with value
// nf(val(g)) and J <= L, cuts compressed.
Program build_nf_tcslp(const Program& g, const GroupContext& ctx);

// Lemma (geo2slextcslp): same contract when the derived word of val(g) is
// already geodesic.
Program build_nf_tcslp_geodesic(const Program& g, const GroupContext& ctx);

struct CwpReport {
  bool trivial = false;
  bool abelian_filter_hit = false;
  std::string nf_length;       // |nf(val)| in decimal
  std::string nf_hat_length;   // |nf(val)^| in decimal
  std::int64_t input_size = 0;
  std::int64_t nf_slp_size = 0;
  double ms_build = 0, ms_total = 0;
};

// Theorem A: does val(g) represent the identity.
bool solve_cwp(const Program& g, const GroupContext& ctx, CwpReport* report = nullptr);

// nf(val(g)) as an nf-reduced SLP (build_nf_tcslp composed with convert).
Program nf_slp(const Program& g, const GroupContext& ctx, CwpReport* report = nullptr);

// A position on the derived word of an nf-reduced program value.
struct SlpCursor {
  const Program* prog;
  BigInt hat_pos;
};

// Cor (wdfsa) realised as a bounded search: some eta over Sigma with
// |eta| <= L such that prefix1 . eta =_G prefix2, or nullopt. Prefixes are
// the hat_pos-component prefixes addressed by the cursors.
std::optional<Word> bounded_difference_search(const GroupContext& ctx, const SlpCursor& u,
                                              const SlpCursor& v);

}  // namespace cwp

#endif
