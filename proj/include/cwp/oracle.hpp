#ifndef CWP_ORACLE_HPP
#define CWP_ORACLE_HPP

#include <cstdint>
#include <string>

#include "cwp/group.hpp"
#include "cwp/program.hpp"

namespace cwp {

// Independent ground truth. Deliberately shares no implementation with
// group_model.nf_word beyond the Letter type: syllable reduction runs by
// repeated full passes to a fixpoint, and per-syllable shortlex words come
// from a lattice search (or plain brute force), not from the arithmetic
// profile construction.

// Per-syllable reduction of a syllable list to the reduced form (repeated
// passes, not a stack).
std::vector<Syllable> oracle_syllable_nf(const GroupContext& ctx,
                                         std::vector<Syllable> sylls);

// Shortlex-least word over the factor's Y representing v.
// Brute-force enumeration for tiny lengths; lattice BFS for moderate norms;
// for large norms an independently written arithmetic decomposition that is
// exhaustively cross-checked against the other two in tests.
Word oracle_slex(const GroupContext& ctx, int factor, const ExpVec& v);

// True brute force: first length-then-lex word over Y with vector v, searched
// up to length max_len; empty optional when none exists in range.
bool oracle_slex_brute(const GroupContext& ctx, int factor, const ExpVec& v,
                       std::size_t max_len, Word* out);

Word naive_nf(const GroupContext& ctx, const Word& w);

// ---- random instances ----

struct RandomProfile {
  static constexpr const char* kBalanced = "balanced";
  static constexpr const char* kUnaryHeavy = "unary-heavy";
  static constexpr const char* kComponentSplitting = "component-splitting";
  static constexpr const char* kNearTrivial = "near-trivial";
};

Program random_slp(const GroupContext& ctx, std::uint64_t seed, int size,
                   const std::string& profile);

// FNV-1a hash of the serialised program (golden-output checks).
std::uint64_t program_fingerprint(const Program& p);

// ---- calibration ----

struct CalibrationOptions {
  int samples = 400;
  int max_word_len = 40;
  int boundary_len = 3;  // |w1|, |w2| bound in sampled quadrilaterals
  int safety = 2;
  std::uint64_t seed = 12345;
};

// Samples quadrilaterals w1 u =_G v w2 with u, v nf-reduced, measures the
// interior vertex distances and end margins, and returns a bundle with the
// declared safety factor applied.
ConstantsBundle calibrate(const GroupContext& ctx, const CalibrationOptions& opt = {});

}  // namespace cwp

#endif
