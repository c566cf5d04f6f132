#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cwp/equality.hpp"
#include "cwp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

namespace {

Word random_word(const GroupContext& ctx, std::mt19937_64& rng, int maxlen) {
  int n = static_cast<int>(rng() % (maxlen + 1));
  Word w;
  for (int i = 0; i < n; ++i)
    w.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
  return w;
}

}  // namespace

TEST_CASE("derived_word and components") {
  GroupContext ctx = gstar();
  Word w = parse_word(ctx, "z3 z1 z1 z3");
  auto sylls = derived_word(ctx, w);
  REQUIRE(sylls.size() == 3);
  CHECK(sylls[0].factor == 1);
  CHECK(sylls[0].vec == ExpVec{1});
  CHECK(sylls[1].factor == 0);
  CHECK(sylls[1].vec == ExpVec{2, 0});
  CHECK(sylls[2].factor == 1);
  CHECK(sylls[2].vec == ExpVec{1});
  auto comps = components(ctx, w);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::make_tuple(std::size_t{0}, std::size_t{1}, 1));
  CHECK(comps[1] == std::make_tuple(std::size_t{1}, std::size_t{3}, 0));
  CHECK(comps[2] == std::make_tuple(std::size_t{3}, std::size_t{4}, 1));
  CHECK(derived_word(ctx, {}).empty());
  CHECK(derived_word(ctx, parse_word(ctx, "z1 z2")).size() == 1);
}

TEST_CASE("nf_word examples") {
  GroupContext ctx = gstar();
  // z1 z3 z3^-1 z1 -> the single letter z1^2
  Word w1 = nf_word(ctx, parse_word(ctx, "z1 z3 z3^-1 z1"));
  CHECK(word_str(ctx, w1) == "z1^2");
  // alternating word already reduced
  Word w2 = nf_word(ctx, parse_word(ctx, "z1 z3 z1 z3^-1"));
  CHECK(word_str(ctx, w2) == "z1 z3 z1 z3^-1");
  CHECK(nf_word(ctx, parse_word(ctx, "z1 z1^-1")).empty());
}

TEST_CASE("nf_word properties") {
  GroupContext ctx = gstar();
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    Word w = random_word(ctx, rng, 40);
    Word n1 = nf_word(ctx, w);
    CHECK(nf_word(ctx, n1) == n1);  // idempotent
    CHECK(is_nf_reduced_word(ctx, n1));
    // group element preserved: syllable algebra of w equals that of nf(w)
    auto r1 = reduce_syllables(derived_word(ctx, w));
    auto r2 = reduce_syllables(derived_word(ctx, n1));
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
      CHECK(r1[i].factor == r2[i].factor);
      CHECK(r1[i].vec == r2[i].vec);
    }
  }
  // uniqueness: equal elements get identical normal forms
  for (int iter = 0; iter < 200; ++iter) {
    Word u = random_word(ctx, rng, 25);
    Word v = u;
    // insert cancelling pairs and commute letters within factors
    for (int k = 0; k < 4; ++k) {
      std::size_t pos = v.empty() ? 0 : rng() % (v.size() + 1);
      LetterId l = static_cast<LetterId>(rng() % ctx.alphabet->size());
      Word ins{l, ctx.alphabet->inv(l)};
      v.insert(v.begin() + pos, ins.begin(), ins.end());
    }
    for (int k = 0; k + 1 < static_cast<int>(v.size()); ++k)
      if (ctx.factor_of(v[k]) == ctx.factor_of(v[k + 1]) && rng() % 2)
        std::swap(v[k], v[k + 1]);
    CHECK(nf_word(ctx, u) == nf_word(ctx, v));
  }
}

TEST_CASE("is_nf_reduced_slp") {
  GroupContext ctx = gstar();
  CHECK(is_nf_reduced_slp(word_program(ctx, "z1 z3 z1"), ctx));
  CHECK_FALSE(is_nf_reduced_slp(word_program(ctx, "z1 z1"), ctx));
  CHECK(is_nf_reduced_slp(Program::empty(ctx.alphabet), ctx));
  // huge nf-reduced value: (z1^2-letter)^{2^40} z3
  Program big = concat(
      ctx.alphabet,
      {power_slp(ctx.alphabet, L(ctx, "z1^2"), BigInt(1) << 40), Word{L(ctx, "z3")}});
  CHECK(is_nf_reduced_slp(big, ctx));
  // one extra unit letter keeps the run canonical ((z1^2)^k z1 is shortlex),
  // two violate |n_k| < M
  Program one = concat(
      ctx.alphabet,
      {power_slp(ctx.alphabet, L(ctx, "z1^2"), BigInt(1) << 40), Word{L(ctx, "z1")}});
  CHECK(is_nf_reduced_slp(one, ctx));
  Program bad = concat(ctx.alphabet, {power_slp(ctx.alphabet, L(ctx, "z1^2"), BigInt(1) << 40),
                                      Word{L(ctx, "z1"), L(ctx, "z1")}});
  CHECK_FALSE(is_nf_reduced_slp(bad, ctx));
}

TEST_CASE("fast nf-reduced predicate agrees with the compressed-equality route") {
  GroupContext ctx = gstar();
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    Word w = random_word(ctx, rng, 20);
    if (rng() % 2) w = nf_word(ctx, w);
    Program p = Program::from_word(ctx.alphabet, w);
    CHECK(is_nf_reduced_slp(p, ctx) == is_nf_reduced_slp_by_equality(p, ctx));
    CHECK(is_nf_reduced_slp(p, ctx) == is_nf_reduced_word(ctx, w));
  }
}

TEST_CASE("cross-implementation nf agreement (sample of criterion 11)") {
  GroupContext ctx = gstar();
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 3000; ++iter) {
    Word w = random_word(ctx, rng, 50);
    CHECK(nf_word(ctx, w) == naive_nf(ctx, w));
  }
  GroupContext c3 = f3();
  for (int iter = 0; iter < 1500; ++iter) {
    Word w = random_word(c3, rng, 50);
    CHECK(nf_word(c3, w) == naive_nf(c3, w));
  }
}

TEST_CASE("bounded_difference_search") {
  GroupContext ctx = gstar();
  Program u = Program::from_word(ctx.alphabet, nf_word(ctx, parse_word(ctx, "z1 z3 z2 z3")));
  // identical prefixes: eta = epsilon
  SlpCursor cu{&u, 2}, cv{&u, 2};
  auto eta = bounded_difference_search(ctx, cu, cv);
  REQUIRE(eta.has_value());
  CHECK(eta->empty());
  // prefixes differing by one letter
  Program v = Program::from_word(ctx.alphabet, nf_word(ctx, parse_word(ctx, "z1 z3 z1 z3")));
  SlpCursor cu2{&u, 2}, cv2{&v, 3};
  auto eta2 = bounded_difference_search(ctx, cu2, cv2);
  REQUIRE(eta2.has_value());
  CHECK(word_str(ctx, *eta2) == "z1");
  // far prefixes: none
  Program far = Program::from_word(
      ctx.alphabet, nf_word(ctx, parse_word(ctx, "z2 z3 z2 z3 z2 z3 z2 z3 z2 z3")));
  SlpCursor cu3{&u, 0}, cv3{&far, 10};
  CHECK_FALSE(bounded_difference_search(ctx, cu3, cv3).has_value());
  // paths from a shared origin: every u^-vertex at least K from the end has a
  // corresponding vertex on v = nf(u b), cross-checked over all v-positions
  std::mt19937_64 rng(41);
  const ConstantsBundle& cb = ctx.consts();
  for (int iter = 0; iter < 25; ++iter) {
    Word base = nf_word(ctx, random_word(ctx, rng, 30));
    if (base.empty()) continue;
    Word b = random_word(ctx, rng, 2);
    Word ext = base;
    ext.insert(ext.end(), b.begin(), b.end());
    Word vnf = nf_word(ctx, ext);
    Program up = Program::from_word(ctx.alphabet, base);
    Program vp = Program::from_word(ctx.alphabet, vnf);
    BigInt nu = hat_length(up, ctx), nv = hat_length(vp, ctx);
    for (BigInt k = 0; k + cb.K <= nu; ++k) {
      bool found = false;
      for (BigInt l = 0; l <= nv && !found; ++l) {
        SlpCursor c1{&up, k}, c2{&vp, l};
        if (bounded_difference_search(ctx, c1, c2)) found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("sigma_length equals the normal-form length") {
  GroupContext ctx = gstar();
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 100; ++iter) {
    Word w = random_word(ctx, rng, 12);
    auto reduced = reduce_syllables(derived_word(ctx, w));
    BigInt len = sigma_length(ctx, reduced);
    Word nf = naive_nf(ctx, w);
    CHECK(len == nf.size());
  }
}
