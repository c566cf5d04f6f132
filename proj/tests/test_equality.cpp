#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cwp/equality.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

namespace {

Program random_program(AlphabetRef a, std::mt19937_64& rng, int vars, int letters) {
  std::vector<Rhs> rhs;
  for (int i = 0; i < vars; ++i) {
    Rhs r;
    int pick = static_cast<int>(rng() % 3);
    if (i < 2 || pick == 0) {
      int n = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < n; ++k)
        r.syms.push_back(Sym::letter(static_cast<LetterId>(rng() % letters)));
    } else {
      int n = 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k <= n; ++k)
        r.syms.push_back(Sym::var(static_cast<Var>(rng() % i)));
    }
    rhs.push_back(std::move(r));
  }
  Program p(std::move(a), std::move(rhs), static_cast<Var>(vars - 1));
  return p;
}

}  // namespace

TEST_CASE("equal values with different shapes") {
  auto a = ab_alphabet();
  // (ab)^{2^6} vs the (abab)^{2^5} shape
  Program g = doubling_program(a, 0, 1, 6);
  std::vector<Rhs> rhs;
  Rhs base;
  base.syms = {Sym::letter(0), Sym::letter(1), Sym::letter(0), Sym::letter(1)};
  rhs.push_back(std::move(base));
  for (int i = 0; i < 5; ++i) {
    Rhs r;
    r.syms = {Sym::var(i), Sym::var(i)};
    rhs.push_back(std::move(r));
  }
  Program h(a, std::move(rhs), 5);
  CHECK(slp_equal(g, h));
  // (ab)^{2^6} vs (ba)^{2^6}
  Program ba = doubling_program(a, 1, 0, 6);
  CHECK_FALSE(slp_equal(g, ba));
}

TEST_CASE("random pairs against decompressed comparison") {
  auto a = ab_alphabet();
  std::mt19937_64 rng(424242);
  int done = 0;
  while (done < 500) {
    Program g = random_program(a, rng, 3 + static_cast<int>(rng() % 25), 3);
    if (value_length(g) > 10000) continue;
    Program h;
    if (rng() % 2) {
      // same value, rebuilt differently
      h = to_cnf(g);
      if (rng() % 2 && value_length(g) >= 2) {
        BigInt n = value_length(g);
        BigInt m = BigInt(rng() % 1000) % (n - 1) + 1;
        h = concat(a, {extract_substring(g, 0, m), extract_substring(g, m, n)});
      }
    } else {
      h = random_program(a, rng, 3 + static_cast<int>(rng() % 25), 3);
      if (value_length(h) > 10000) continue;
    }
    Word wg = decompress(g, 20000), wh = decompress(h, 20000);
    CHECK(slp_equal(g, h) == (wg == wh));
    ++done;
  }
}

TEST_CASE("huge equal and unequal values without decompression") {
  auto a = ab_alphabet();
  Program g = doubling_program(a, 0, 1, 60);
  Program h = doubling_program(a, 0, 1, 60);
  CHECK(slp_equal(g, h));
  // the two letters around the centre are "ba"; splicing them back in gives
  // an equal program, splicing "ab" a different one
  BigInt n = value_length(g);
  Program left = extract_substring(g, 0, n / 2 - 1);
  Program right = extract_substring(g, n / 2 + 1, n);
  Word same{a->id_of("b"), a->id_of("a")};
  Word diff{a->id_of("a"), a->id_of("b")};
  CHECK(slp_equal(g, concat(a, {left, same, right})));
  Program spliced = concat(a, {left, diff, right});
  CHECK(value_length(spliced) == n);
  CHECK_FALSE(slp_equal(g, spliced));
  // power blocks of different bases
  CHECK_FALSE(slp_equal(power_slp(a, 0, BigInt(1) << 50), power_slp(a, 1, BigInt(1) << 50)));
  CHECK(slp_equal(power_slp(a, 0, BigInt(1) << 50), power_slp(a, 0, BigInt(1) << 50)));
}

TEST_CASE("equivalence relation on sampled triples") {
  auto a = ab_alphabet();
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 60; ++iter) {
    Program x = random_program(a, rng, 8, 2);
    if (value_length(x) > 5000) continue;
    Program y = rng() % 2 ? to_cnf(x) : random_program(a, rng, 8, 2);
    Program z = rng() % 2 ? trim(y) : random_program(a, rng, 8, 2);
    if (value_length(y) > 5000 || value_length(z) > 5000) continue;
    bool xy = slp_equal(x, y), yz = slp_equal(y, z), xz = slp_equal(x, z);
    CHECK(slp_equal(x, x));
    CHECK(xy == slp_equal(y, x));
    if (xy && yz) CHECK(xz);
  }
}

TEST_CASE("length cross-check runs first") {
  auto a = ab_alphabet();
  Program g = doubling_program(a, 0, 1, 40);
  Program h = doubling_program(a, 0, 1, 41);
  CHECK_FALSE(slp_equal(g, h));  // lengths differ
  CHECK(slp_unequal_prefilter(g, h));
}

TEST_CASE("slp_compare_prefix") {
  auto a = ab_alphabet();
  Program g = parse_program("start S\nS = 'a' 'b' 'a' 'b'\n", a);
  Program h = parse_program("start S\nS = 'a' 'b' 'b' 'a'\n", a);
  CHECK(slp_compare_prefix(g, h) == 2);
  Program g2 = doubling_program(a, 0, 1, 6);
  CHECK(slp_compare_prefix(g2, g2) == value_length(g2));
  // random pairs against decompressed computation
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 60; ++iter) {
    Program x = random_program(a, rng, 10, 2);
    Program y = random_program(a, rng, 10, 2);
    if (value_length(x) > 4000 || value_length(y) > 4000) continue;
    Word wx = decompress(x, 5000), wy = decompress(y, 5000);
    std::size_t k = 0;
    while (k < wx.size() && k < wy.size() && wx[k] == wy[k]) ++k;
    CHECK(slp_compare_prefix(x, y) == k);
  }
}

TEST_CASE("cslp_equal with raw cuts") {
  auto a = ab_alphabet();
  Program g = parse_program("start S\nS = rawcut A 1 3\nA = 'a' 'b' 'a' 'b'\n", a);
  Program h = parse_program("start S\nS = 'b' 'a'\n", a);
  CHECK(cslp_equal(g, h));
  // empty cuts on both sides of equal programs
  Program e1 = parse_program("start S\nS = rawcut A 2 2\nA = 'a' 'b'\n", a);
  Program e2 = parse_program("start S\nS =\n", a);
  CHECK(cslp_equal(e1, e2));
  // random cut pairs against the oracle
  std::mt19937_64 rng(55);
  for (int iter = 0; iter < 60; ++iter) {
    Program base = random_program(a, rng, 12, 3);
    BigInt n = value_length(base);
    if (n == 0 || n > 5000) continue;
    BigInt i = BigInt(rng() % 1000) % n;
    BigInt j = i + BigInt(rng() % 1000) % (n - i + 1);
    std::vector<Rhs> rhs = base.all_rhs();
    Rhs cut;
    cut.kind = RhsKind::CutRaw;
    cut.base = base.start();
    cut.lo = i;
    cut.hi = j;
    rhs.push_back(std::move(cut));
    Program c(a, std::move(rhs), static_cast<Var>(rhs.size()) - 1);
    Word w = decompress(base, 6000);
    Word sub(w.begin() + static_cast<std::size_t>(i), w.begin() + static_cast<std::size_t>(j));
    CHECK(cslp_equal(c, Program::from_word(a, sub)));
  }
}
