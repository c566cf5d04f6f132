#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cwp/equality.hpp"
#include "cwp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

namespace {

// Oracle-built nf-reduced non-splitting TCSLPs with tracked explicit values.
struct TcGen {
  const GroupContext& ctx;
  std::mt19937_64 rng;
  std::vector<Rhs> rhs;
  std::vector<Word> val;  // tracked explicit values (all nf-reduced)

  explicit TcGen(const GroupContext& c, std::uint64_t seed) : ctx(c), rng(seed) {}

  Word rand_word(int maxlen) {
    Word w;
    int n = static_cast<int>(rng() % (maxlen + 1));
    for (int i = 0; i < n; ++i)
      w.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    return w;
  }

  Var push(Rhs r, Word v) {
    rhs.push_back(std::move(r));
    val.push_back(std::move(v));
    return static_cast<Var>(rhs.size()) - 1;
  }

  Var base_word(int maxlen) {
    Word nfw = naive_nf(ctx, rand_word(maxlen));
    Rhs r;
    for (LetterId l : nfw) r.syms.push_back(Sym::letter(l));
    return push(std::move(r), nfw);
  }

  Var tether(Var b, int maxj) {
    Word alpha = rand_word(maxj), beta = rand_word(maxj);
    Word joined = alpha;
    joined.insert(joined.end(), val[b].begin(), val[b].end());
    Word bi = inverse_word(*ctx.alphabet, beta);
    joined.insert(joined.end(), bi.begin(), bi.end());
    Word v = naive_nf(ctx, joined);
    Rhs r;
    r.kind = RhsKind::Tether;
    r.base = b;
    r.alpha = std::move(alpha);
    r.beta = std::move(beta);
    return push(std::move(r), std::move(v));
  }

  std::optional<Var> hat_cut(Var b) {
    auto comps = components(ctx, val[b]);
    std::size_t hn = comps.size();
    if (hn == 0) return std::nullopt;
    std::size_t k = rng() % (hn + 1), l = k + rng() % (hn - k + 1);
    std::size_t i = k == hn ? val[b].size() : std::get<0>(comps[k]);
    std::size_t j = l == hn ? val[b].size() : std::get<0>(comps[l]);
    Rhs r;
    r.kind = RhsKind::CutHat;
    r.base = b;
    r.lo = k;
    r.hi = l;
    return push(std::move(r), Word(val[b].begin() + i, val[b].begin() + j));
  }

  std::optional<Var> pair(Var x, Var y) {
    Word joined = val[x];
    joined.insert(joined.end(), val[y].begin(), val[y].end());
    if (!is_nf_reduced_word(ctx, joined)) return std::nullopt;
    // non-splitting also requires the boundary not to sit inside a component
    if (!val[x].empty() && !val[y].empty() &&
        ctx.factor_of(val[x].back()) == ctx.factor_of(val[y].front()))
      return std::nullopt;
    Rhs r;
    r.syms = {Sym::var(x), Sym::var(y)};
    return push(std::move(r), std::move(joined));
  }

  // builds one TCSLP with cuts and tethers; returns it with its value
  std::pair<Program, Word> build(int ops, int maxj) {
    std::vector<Var> pool;
    pool.push_back(base_word(18));
    for (int i = 0; i < ops; ++i) {
      int roll = static_cast<int>(rng() % 4);
      Var pick = pool[rng() % pool.size()];
      if (roll == 0) {
        pool.push_back(base_word(14));
      } else if (roll == 1) {
        pool.push_back(tether(pick, maxj));
      } else if (roll == 2) {
        if (auto v = hat_cut(pick)) pool.push_back(*v);
      } else {
        Var q = pool[rng() % pool.size()];
        if (auto v = pair(pick, q)) pool.push_back(*v);
      }
      if (val[pool.back()].size() > 8000) pool.pop_back();
    }
    Var start = pool.back();
    Program p(ctx.alphabet, rhs, start, maxj);
    return {trim(p), val[start]};
  }
};

std::string value_str(const GroupContext& ctx, const Program& p) {
  return word_str(ctx, decompress(p, 200000));
}

}  // namespace

TEST_CASE("tslp_to_slp: tether over a short value") {
  GroupContext ctx = gstar();
  Program u = parse_program(
      "start A\nA = tether B | 'z2' | 'z3'\nB = 'z1'\n", ctx.alphabet, 4);
  Program s = tslp_to_slp(u, ctx);
  CHECK(s.is_slp());
  CHECK(value_str(ctx, s) == "z1 z2 z3^-1");
  CHECK(value_str(ctx, s) == word_str(ctx, tcslp_value(u, ctx, 1000)));
}

TEST_CASE("tslp_to_slp: no tethers leaves the value unchanged") {
  GroupContext ctx = gstar();
  Program u = word_program(ctx, "z1 z3 z2 z3");
  Program s = tslp_to_slp(u, ctx);
  CHECK(value_str(ctx, s) == "z1 z3 z2 z3");
}

TEST_CASE("tslp_to_slp: long values through the ladder machinery") {
  GroupContext ctx = gstar();
  // a long nf-reduced value: alternating (z1^2)^k z3 blocks
  std::vector<ConcatPart> parts;
  Word flat;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    int reps = 1 + static_cast<int>(rng() % 3);
    for (int r = 0; r < reps; ++r) flat.push_back(L(ctx, "z1^2"));
    flat.push_back(L(ctx, i % 2 ? "z3" : "z3^-1"));
  }
  Program base = Program::from_word(ctx.alphabet, flat);
  REQUIRE(is_nf_reduced_slp(base, ctx));
  // wrap in tethers that keep the value long
  std::vector<Rhs> rhs = base.all_rhs();
  Rhs t1;
  t1.kind = RhsKind::Tether;
  t1.base = base.start();
  t1.alpha = parse_word(ctx, "z2");
  t1.beta = parse_word(ctx, "z3");
  rhs.push_back(std::move(t1));
  Rhs t2;
  t2.kind = RhsKind::Tether;
  t2.base = static_cast<Var>(rhs.size()) - 1;
  t2.alpha = parse_word(ctx, "z1^-1");
  t2.beta = {};
  rhs.push_back(std::move(t2));
  Var start = static_cast<Var>(rhs.size()) - 1;
  Program u(ctx.alphabet, std::move(rhs), start, 4);
  Program s = tslp_to_slp(u, ctx);
  Word expect = naive_nf(ctx, tcslp_value(u, ctx, 100000));
  CHECK(value_str(ctx, s) == word_str(ctx, expect));
  CHECK(is_nf_reduced_slp(s, ctx));
}

TEST_CASE("tcslp_to_tslp: cut through a pair and through a tether") {
  GroupContext ctx = gstar();
  // cut over a cut-free subtree with rho(B) = C D
  Program t = parse_program(
      "start A\n"
      "A = cut B 1 3\n"
      "B = C D\n"
      "C = 'z1' 'z3'\n"
      "D = 'z2' 'z3^-1'\n",
      ctx.alphabet, 4);
  Program u = tcslp_to_tslp(t, ctx);
  CHECK_FALSE(u.has_cuts());
  CHECK(word_str(ctx, tcslp_value(u, ctx, 1000)) ==
        word_str(ctx, tcslp_value(t, ctx, 1000)));
  // cut of the full range is an identity rewrite
  Program full = parse_program(
      "start A\nA = cut B 0 2\nB = 'z1' 'z3'\n", ctx.alphabet, 4);
  Program uf = tcslp_to_tslp(full, ctx);
  CHECK_FALSE(uf.has_cuts());
  CHECK(word_str(ctx, tcslp_value(uf, ctx, 1000)) == "z1 z3");
}

TEST_CASE("convert: 200 oracle-built nf-reduced TCSLPs (criterion 9 sample)") {
  GroupContext ctx = gstar();
  const int J = ctx.consts().L;
  int done = 0, no_witness = 0;
  for (std::uint64_t seed = 1; done < 200; ++seed) {
    TcGen gen(ctx, seed);
    auto [t, want] = gen.build(10, J);
    if (want.size() > 8000) continue;
    try {
      Program s = convert_tcslp(t, ctx);
      CHECK(s.is_slp());
      CHECK(decompress(s, 20000) == want);
      CHECK(is_nf_reduced_slp(s, ctx));
      // compressed-equality cross-check
      CHECK(slp_equal(to_cnf(s), to_cnf(Program::from_word(ctx.alphabet, want))));
    } catch (const NoWitnessError&) {
      ++no_witness;
    }
    ++done;
  }
  CHECK(no_witness == 0);
}

TEST_CASE("convert on a second group (Z*Z*Z)") {
  GroupContext ctx = f3();
  const int J = ctx.consts().L;
  int done = 0, no_witness = 0;
  for (std::uint64_t seed = 1; done < 60; ++seed) {
    TcGen gen(ctx, seed * 31 + 7);
    auto [t, want] = gen.build(8, J);
    if (want.size() > 6000) continue;
    try {
      Program s = convert_tcslp(t, ctx);
      CHECK(decompress(s, 20000) == want);
    } catch (const NoWitnessError&) {
      ++no_witness;
    }
    ++done;
  }
  CHECK(no_witness == 0);
}

TEST_CASE("append_bounded_suffix") {
  GroupContext ctx = gstar();
  // z1 . z1^-1 -> empty
  Program p = word_program(ctx, "z1");
  Program s = append_bounded_suffix(p, parse_word(ctx, "z1^-1"), ctx);
  CHECK(value_length(s) == 0);
  // z1 z3 . z3 -> z1 z3^2 (the M-letter)
  Program q = word_program(ctx, "z1 z3");
  Program s2 = append_bounded_suffix(q, parse_word(ctx, "z3"), ctx);
  CHECK(value_str(ctx, s2) == "z1 z3^2");
  // random agreement with the oracle
  std::mt19937_64 rng(6);
  for (int iter = 0; iter < 50; ++iter) {
    Word base;
    for (int i = 0; i < static_cast<int>(rng() % 30); ++i)
      base.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    Word nfw = naive_nf(ctx, base);
    Word v;
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i)
      v.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
    Program in = Program::from_word(ctx.alphabet, nfw);
    Program out = append_bounded_suffix(in, v, ctx);
    Word joined = nfw;
    joined.insert(joined.end(), v.begin(), v.end());
    CHECK(value_str(ctx, out) == word_str(ctx, naive_nf(ctx, joined)));
  }
}

TEST_CASE("determinism: identical inputs give identical outputs") {
  GroupContext ctx = gstar();
  TcGen g1(ctx, 99), g2(ctx, 99);
  auto [t1, w1] = g1.build(10, ctx.consts().L);
  auto [t2, w2] = g2.build(10, ctx.consts().L);
  CHECK(serialize_program(t1) == serialize_program(t2));
  Program s1 = convert_tcslp(t1, ctx);
  Program s2 = convert_tcslp(t2, ctx);
  CHECK(serialize_program(s1) == serialize_program(s2));
}
