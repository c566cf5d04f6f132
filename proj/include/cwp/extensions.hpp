#ifndef CWP_EXTENSIONS_HPP
#define CWP_EXTENSIONS_HPP

#include "cwp/program.hpp"

namespace cwp {

struct GroupContext;

// Cut elimination for cut-SLPs with raw indices (no tethers): pushes cut
// operators toward the leaves; value preserved, polynomial size.
Program cslp_to_slp(const Program& p);

// Reference evaluation of a TCSLP by decompress-then-nf, bottom-up per
// variable (the value contract of tether rhs). Oracle support; refuses when
// any intermediate value exceeds max_len.
Word tcslp_value(const Program& p, const GroupContext& ctx, std::size_t max_len);

// Per-variable values of a TCSLP under the same contract.
std::vector<Word> tcslp_var_values(const Program& p, const GroupContext& ctx,
                                   std::size_t max_len);

// Rewrites every raw-index cut in a TCSLP to compressed (derived-word) form.
// Every cut must be non-splitting; a splitting cut is an error.
Program compressed_cut_normalize(const Program& p, const GroupContext& ctx);

}  // namespace cwp

#endif
