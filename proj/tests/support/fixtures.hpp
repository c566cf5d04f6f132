#ifndef CWP_TESTS_FIXTURES_HPP
#define CWP_TESTS_FIXTURES_HPP

#include <string>

#include "cwp/extensions.hpp"
#include "cwp/group.hpp"
#include "cwp/io.hpp"
#include "cwp/oracle.hpp"
#include "cwp/pipeline.hpp"
#include "cwp/slp_ops.hpp"

namespace cwpt {

using namespace cwp;

// Calibrated defaults shared by the test groups; produced once by
// oracle_harness.calibrate (see test_oracle) and frozen here.
inline ConstantsBundle default_bundle() {
  ConstantsBundle cb;
  cb.delta = 1;
  cb.K = 6;
  cb.L = 4;
  cb.e_prime = 4;
  cb.e1 = 4;
  cb.e2 = 16;
  cb.ff_slope = 1;
  cb.ff_intercept = 4;
  return cb;
}

// G* = Z^2 * Z  (letters z1, z2 | z3)
inline GroupContext gstar() {
  GroupContext ctx = make_group({{2, {}}, {1, {}}});
  ctx.constants = default_bundle();
  return ctx;
}

// Z * Z * Z (free group of rank 3 over the extended letters)
inline GroupContext f3() {
  GroupContext ctx = make_group({{1, {}}, {1, {}}, {1, {}}});
  ctx.constants = default_bundle();
  return ctx;
}

// Z^3 * Z^2
inline GroupContext g32() {
  GroupContext ctx = make_group({{3, {}}, {2, {}}});
  ctx.constants = default_bundle();
  return ctx;
}

// Z^2 (with one extra generator (1,1)) * Z
inline GroupContext gx() {
  GroupContext ctx = make_group({{2, {{"w", {1, 1}}}}, {1, {}}});
  ctx.constants = default_bundle();
  return ctx;
}

// plain two-letter alphabet for string-level SLP tests
inline AlphabetRef ab_alphabet() { return make_plain_alphabet({"a", "b", "c", "d"}); }

inline LetterId L(const GroupContext& ctx, const std::string& token) {
  return ctx.alphabet->id_of(token);
}

inline Word parse_word(const GroupContext& ctx, const std::string& spaced) {
  Word w;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      w.push_back(ctx.alphabet->id_of(cur));
      cur.clear();
    }
  };
  for (char c : spaced) {
    if (c == ' ') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return w;
}

// the paper's doubling program with value (xy)^{2^n}
inline Program doubling_program(AlphabetRef a, LetterId x, LetterId y, int n) {
  std::vector<Rhs> rhs;
  Rhs base;
  base.syms = {Sym::letter(x), Sym::letter(y)};
  rhs.push_back(std::move(base));
  for (int i = 0; i < n; ++i) {
    Rhs r;
    r.syms = {Sym::var(static_cast<Var>(i)), Sym::var(static_cast<Var>(i))};
    rhs.push_back(std::move(r));
  }
  return Program(std::move(a), std::move(rhs), static_cast<Var>(n));
}

inline Program word_program(const GroupContext& ctx, const std::string& spaced) {
  return Program::from_word(ctx.alphabet, parse_word(ctx, spaced));
}

inline std::string word_str(const GroupContext& ctx, const Word& w) {
  return word_to_string(*ctx.alphabet, w);
}

}  // namespace cwpt

#endif
