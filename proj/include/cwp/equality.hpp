#ifndef CWP_EQUALITY_HPP
#define CWP_EQUALITY_HPP

#include "cwp/program.hpp"

namespace cwp {

// Deterministic polynomial equality of SLP values by recompression: rounds of
// maximal-block compression followed by pair compression under a greedy
// partition, applied to both programs simultaneously. Same alphabet required.
bool slp_equal(const Program& g, const Program& h);

// Length of the longest common prefix of the two values.
BigInt slp_compare_prefix(const Program& g, const Program& h);

// Equality for cut-SLPs: cut elimination, then slp_equal.
bool cslp_equal(const Program& g, const Program& h);

// Optional fast pre-filter: may answer "definitely unequal" cheaply (length,
// first/last letter); never answers "equal" on its own.
bool slp_unequal_prefilter(const Program& g, const Program& h);

}  // namespace cwp

#endif
