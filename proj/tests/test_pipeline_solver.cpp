#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "cwp/equality.hpp"
#include "cwp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

namespace {

std::string value_str(const GroupContext& ctx, const Program& p) {
  return word_str(ctx, decompress(p, 400000));
}

Program concat2(const GroupContext& ctx, const Program& a, const Program& b) {
  return concat(ctx.alphabet, {a, b});
}

}  // namespace

TEST_CASE("build_nf_tcslp on the spec examples") {
  GroupContext ctx = gstar();
  // val = z1 z1^-1 -> empty
  Program g1 = word_program(ctx, "z1 z1^-1");
  Program t1 = build_nf_tcslp(g1, ctx);
  CHECK(tcslp_value(t1, ctx, 1000).empty());
  CHECK(value_length(convert_tcslp(t1, ctx)) == 0);
  // S -> B C, B -> z1 z3, C -> z3^-1 z1: nf = z1^2
  Program g2 = parse_program(
      "start S\nS = B C\nB = 'z1' 'z3'\nC = 'z3^-1' 'z1'\n", ctx.alphabet);
  Program t2 = build_nf_tcslp(g2, ctx);
  CHECK(word_str(ctx, tcslp_value(t2, ctx, 1000)) == "z1^2");
  Program s2 = convert_tcslp(t2, ctx);
  CHECK(value_str(ctx, s2) == "z1^2");
  CHECK(is_nf_reduced_slp(s2, ctx));
  // nf_slp agrees
  CHECK(value_str(ctx, nf_slp(g2, ctx)) == "z1^2");
}

TEST_CASE("build_nf_tcslp output is a valid nf-reduced TCSLP") {
  GroupContext ctx = gstar();
  Program g = random_slp(ctx, 5, 20, RandomProfile::kNearTrivial);
  Program t = build_nf_tcslp(g, ctx);
  CHECK(t.tether_bound() == ctx.consts().L);
  // every variable's value under the tether semantics is nf-reduced
  auto vals = tcslp_var_values(t, ctx, 60000);
  for (const Word& w : vals) CHECK(is_nf_reduced_word(ctx, w));
  // and the top value is nf of the input
  CHECK(word_str(ctx, vals[t.start()]) ==
        word_str(ctx, naive_nf(ctx, decompress(g, 30000))));
}

TEST_CASE("nf_slp against the oracle across profiles and groups") {
  std::vector<GroupContext> groups{gstar(), f3(), g32()};
  const char* profiles[] = {RandomProfile::kBalanced, RandomProfile::kUnaryHeavy,
                            RandomProfile::kComponentSplitting,
                            RandomProfile::kNearTrivial};
  for (const GroupContext& ctx : groups) {
    int done = 0;
    for (std::uint64_t seed = 0; done < 60; ++seed) {
      Program g = random_slp(ctx, seed, 14 + static_cast<int>(seed % 20),
                             profiles[seed % 4]);
      BigInt n = value_length(g);
      if (n == 0 || n > 10000) continue;
      Word input = decompress(g, 12000);
      Word expect = naive_nf(ctx, input);
      Program s = nf_slp(g, ctx);
      CHECK(is_nf_reduced_slp(s, ctx));
      CHECK(word_str(ctx, decompress(s, 30000)) == word_str(ctx, expect));
      ++done;
    }
  }
}

TEST_CASE("solve_cwp agrees with the oracle") {
  GroupContext ctx = gstar();
  // spec examples
  CHECK(solve_cwp(word_program(ctx, "z1 z3 z3^-1 z1^-1"), ctx));
  CHECK_FALSE(solve_cwp(word_program(ctx, "z1 z3 z1 z3^-1"), ctx));
  // trivial by construction without decompression: w = P P^-1
  Program p = doubling_program(ctx.alphabet, L(ctx, "z1"), L(ctx, "z3"), 20);
  CHECK(solve_cwp(concat2(ctx, p, inverse_program(p)), ctx));
  // random suite
  const char* profiles[] = {RandomProfile::kBalanced, RandomProfile::kUnaryHeavy,
                            RandomProfile::kComponentSplitting,
                            RandomProfile::kNearTrivial};
  int done = 0;
  for (std::uint64_t seed = 100; done < 120; ++seed) {
    Program g = random_slp(ctx, seed, 16, profiles[seed % 4]);
    BigInt n = value_length(g);
    if (n > 10000) continue;
    bool expect = naive_nf(ctx, decompress(g, 12000)).empty();
    CwpReport rep;
    CHECK(solve_cwp(g, ctx, &rep) == expect);
    ++done;
  }
}

TEST_CASE("beyond-decompression scale: P P^-1 with P = (z1 z3)^(2^60)") {
  GroupContext ctx = gstar();
  Program p = doubling_program(ctx.alphabet, L(ctx, "z1"), L(ctx, "z3"), 60);
  Program w = concat2(ctx, p, inverse_program(p));
  auto t0 = std::chrono::steady_clock::now();
  CwpReport rep;
  bool ans = solve_cwp(w, ctx, &rep);
  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();
  CHECK(ans);
  CHECK(secs <= 60.0);
  MESSAGE("P P^-1 at 2^60 solved in ", secs, " s");
  // conjugate of a nontrivial element
  Program mid = word_program(ctx, "z1");
  Program w2 = concat(ctx.alphabet, {p, mid, inverse_program(p)});
  CHECK_FALSE(solve_cwp(w2, ctx));
}

TEST_CASE("nontrivial conjugate with trivial abelianisation still solves") {
  GroupContext ctx = gstar();
  // commutator-shaped: abelianisation vanishes, element nontrivial
  Program p = doubling_program(ctx.alphabet, L(ctx, "z1"), L(ctx, "z3"), 30);
  Program comm = concat(
      ctx.alphabet,
      {p, word_program(ctx, "z2"), inverse_program(p), word_program(ctx, "z2^-1")});
  CwpReport rep;
  CHECK_FALSE(solve_cwp(comm, ctx, &rep));
  CHECK_FALSE(rep.abelian_filter_hit);  // had to run the full pipeline
}

TEST_CASE("exhaustive probe mode agrees with the guided mode") {
  GroupContext guided = gstar();
  GroupContext exhaustive = gstar();
  exhaustive.constants->exhaustive_search = true;
  int done = 0;
  for (std::uint64_t seed = 40; done < 12; ++seed) {
    Program g = random_slp(guided, seed, 10, RandomProfile::kNearTrivial);
    if (value_length(g) > 600 || value_length(g) == 0) continue;
    Program s1 = nf_slp(g, guided);
    Program s2 = nf_slp(g, exhaustive);
    CHECK(serialize_program(s1) == serialize_program(s2));
    ++done;
  }
}
