#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cwp/equality.hpp"
#include "cwp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

TEST_CASE("cslp_to_slp") {
  auto a = ab_alphabet();
  Program p = parse_program("start S\nS = rawcut A 1 3\nA = 'a' 'b' 'a' 'b'\n", a);
  Program s = cslp_to_slp(p);
  CHECK(s.is_slp());
  Word w = decompress(s, 10);
  CHECK(w == Word{a->id_of("b"), a->id_of("a")});
  // cut covering the full range behaves as a plain reference
  Program full = parse_program("start S\nS = rawcut A 0 4\nA = 'a' 'b' 'a' 'b'\n", a);
  CHECK(decompress(cslp_to_slp(full), 10).size() == 4);
  // nested cuts over (ab)^{2^10} with random ranges
  std::mt19937_64 rng(5);
  Program big = doubling_program(a, 0, 1, 10);
  for (int iter = 0; iter < 30; ++iter) {
    BigInt n = value_length(big);
    BigInt i1 = BigInt(rng()) % n, j1 = i1 + BigInt(rng()) % (n - i1 + 1);
    std::vector<Rhs> rhs = big.all_rhs();
    Rhs c1;
    c1.kind = RhsKind::CutRaw;
    c1.base = big.start();
    c1.lo = i1;
    c1.hi = j1;
    rhs.push_back(std::move(c1));
    BigInt m = j1 - i1;
    BigInt i2 = BigInt(rng()) % (m + 1), j2 = i2 + BigInt(rng()) % (m - i2 + 1);
    Rhs c2;
    c2.kind = RhsKind::CutRaw;
    c2.base = static_cast<Var>(rhs.size()) - 1;
    c2.lo = i2;
    c2.hi = j2;
    rhs.push_back(std::move(c2));
    Program nested(a, std::move(rhs), static_cast<Var>(rhs.size()) - 1);
    Program flat = cslp_to_slp(nested);
    Word whole = decompress(big, 3000);
    Word expect(whole.begin() + static_cast<std::size_t>(i1 + i2),
                whole.begin() + static_cast<std::size_t>(i1 + j2));
    CHECK(decompress(flat, 3000) == expect);
  }
}

TEST_CASE("tether semantics by decompress-then-nf") {
  GroupContext ctx = gstar();
  // A = B<z2, z3> with val(B) = z1: val(A) = nf(z2 z1 z3^-1) = z1 z2 z3^-1
  Program p = parse_program(
      "start A\nA = tether B | 'z2' | 'z3'\nB = 'z1'\n", ctx.alphabet, 4);
  Word v = tcslp_value(p, ctx, 1000);
  CHECK(word_str(ctx, v) == "z1 z2 z3^-1");
  // A = B<eps, eps> with nf-reduced val(B)
  Program q = parse_program(
      "start A\nA = tether B | | \nB = 'z1' 'z3'\n", ctx.alphabet, 4);
  CHECK(word_str(ctx, tcslp_value(q, ctx, 1000)) == "z1 z3");
  // A = B<z1^-1, eps> with val(B) = z1: cancellation
  Program r = parse_program(
      "start A\nA = tether B | 'z1^-1' | \nB = 'z1'\n", ctx.alphabet, 4);
  CHECK(tcslp_value(r, ctx, 1000).empty());
}

TEST_CASE("tether bound J is enforced") {
  GroupContext ctx = gstar();
  CHECK_THROWS(parse_program(
      "start A\nA = tether B | 'z1' 'z1' 'z1' | \nB = 'z1'\n", ctx.alphabet, 2));
}

TEST_CASE("size metric counts tether symbols") {
  GroupContext ctx = gstar();
  Program p = parse_program(
      "start A\nA = tether B | 'z2' | 'z3' 'z3'\nB = 'z1' 'z1'\n", ctx.alphabet, 4);
  // tether rhs: base + 3 letters = 4; B contributes 2
  CHECK(p.size() == 6);
  CHECK(p.size() >= p.var_count());
}

TEST_CASE("value bound holds for evaluated TCSLPs") {
  GroupContext ctx = gstar();
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 40; ++iter) {
    // small random TCSLP built from nf words with tethers
    Word base;
    for (int i = 0; i < static_cast<int>(rng() % 12); ++i)
      base.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    Word nfw = naive_nf(ctx, base);
    std::vector<Rhs> rhs;
    Rhs b;
    for (LetterId l : nfw) b.syms.push_back(Sym::letter(l));
    rhs.push_back(std::move(b));
    Rhs t;
    t.kind = RhsKind::Tether;
    t.base = 0;
    int la = static_cast<int>(rng() % 3), lb = static_cast<int>(rng() % 3);
    for (int i = 0; i < la; ++i)
      t.alpha.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    for (int i = 0; i < lb; ++i)
      t.beta.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    rhs.push_back(std::move(t));
    Program p(ctx.alphabet, std::move(rhs), 1, 4);
    Word val = tcslp_value(p, ctx, 100000);
    // |val| <= 3^{size/3} with the tether size metric
    double bound = std::pow(3.0, p.size() / 3.0);
    CHECK(static_cast<double>(val.size()) <= bound);
  }
}
