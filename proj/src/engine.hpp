#ifndef CWP_SRC_ENGINE_HPP
#define CWP_SRC_ENGINE_HPP

// Internal machinery shared by the pipeline translation units: shortlex word
// enumeration, the corresponding-vertex (claim) procedure of the final
// section, and the TSLP conversion engine.

#include <functional>
#include <map>
#include <optional>

#include "ws.hpp"

namespace cwp::eng {

using wsd::Ws;

// Shortlex enumeration of words over Sigma up to length max_len; calls f on
// each word (epsilon first); stops when f returns true. Returns the witness.
std::optional<Word> shortlex_search(const GroupContext& ctx, int max_len,
                                    const std::function<bool(const Word&)>& f);

// nf_prepend / nf_append with interaction counts: consumed = runs of v merged
// away, emitted = runs replacing them.
Var nf_prepend_counted(Ws& ws, const Word& alpha, Var v, BigInt* consumed,
                       BigInt* emitted);
Var nf_append_counted(Ws& ws, Var v, const Word& beta, BigInt* consumed,
                      BigInt* emitted);

struct ProbeHit {
  Word eta;    // labels a Gamma-path from the v1-side vertex to the v2-side vertex
  BigInt other;  // position on the other side (q2 for probe_v1, q1 for probe_v2)
};

// Corresponding-vertex tests on the hyperbolic triangle with sides
// v1 = val(vb), v2 = val(vc), v3 = nf(v1 v2); corner b joins v1 and v2.
// Probes realise the claim procedure: candidates are generated exactly
// (free-product residual geometry) unless exhaustive is set, and every hit is
// validated through nf-program construction plus compressed equality.
struct Corr {
  Ws& ws;
  Var vb, vc;
  BigInt n1, n2;   // hat lengths
  BigInt canc;     // exact cancellation depth at the corner b
  int L;
  bool exhaustive;

  Corr(Ws& w, Var b, Var c);

  // vertex on v1 at hat-distance l from b (prefix length n1 - l).
  // check = run the claim-procedure equality validation on the hit (always on
  // in exhaustive mode); existence probes inside binary searches skip it and
  // the selected witness is validated before use.
  std::optional<ProbeHit> probe_v1(const BigInt& l, bool check = true);
  // vertex on v2 at prefix length q2 from b
  std::optional<ProbeHit> probe_v2(const BigInt& q2, bool check = true);

 private:
  std::optional<ProbeHit> probe(const BigInt& fixed, bool on_v1, bool check);
  bool validate(const BigInt& l, const Word& eta, const BigInt& q2);
};

// Single-tether conversion nf(alpha val(v) beta^-1) for an nf-reduced node v,
// through the Prop (tslp-slp) machinery (public route). The workspace
// shortcut ws.nf_conjugate computes the same value directly.
Var tether_convert(Ws& ws, const Word& alpha, Var v, const Word& beta);

}  // namespace cwp::eng

#endif
