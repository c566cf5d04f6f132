#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "cwp/equality.hpp"
#include "cwp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cwp;
using namespace cwpt;

namespace {

std::string value_str(const GroupContext& ctx, const Program& p) {
  return word_str(ctx, decompress(p, 200000));
}

// exhaustive audit: every component of every variable's value has a root,
// i.e. a derivation node below the variable covering exactly that occurrence
bool roots_audit(const GroupContext& ctx, const Program& p) {
  Program q = to_cnf(p);
  std::vector<BigInt> len = var_lengths(q);
  if (len[q.start()] > 12000) return true;  // audit is decompression-based
  std::vector<Word> val(q.var_count());
  for (Var v : q.topo_order()) {
    Word w;
    for (const Sym& s : q.rhs(v).syms) {
      if (s.is_var()) {
        w.insert(w.end(), val[s.as_var()].begin(), val[s.as_var()].end());
      } else {
        w.push_back(s.as_letter());
      }
    }
    val[v] = std::move(w);
  }
  std::function<bool(Var, std::size_t, std::size_t)> covers =
      [&](Var a, std::size_t i, std::size_t j) {
        if (i == 0 && j == val[a].size()) return true;
        const Rhs& r = q.rhs(a);
        if (r.syms.size() != 2 || !r.syms[0].is_var()) return false;
        Var x = r.syms[0].as_var(), y = r.syms[1].as_var();
        std::size_t nx = val[x].size();
        if (j <= nx) return covers(x, i, j);
        if (i >= nx) return covers(y, i - nx, j - nx);
        return false;
      };
  for (Var a = 0; a < q.var_count(); ++a) {
    for (auto [i, j, f] : components(ctx, val[a])) {
      (void)f;
      if (!covers(a, i, j)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("ensure_component_roots on the spec example") {
  GroupContext ctx = gstar();
  Program p = parse_program(
      "start S\nS = B C\nB = 'z3' 'z1'\nC = 'z1' 'z3'\n", ctx.alphabet);
  CHECK_FALSE(roots_audit(ctx, p));  // the middle z1 z1 component spans B|C
  Program q = ensure_component_roots(p, ctx);
  CHECK(value_str(ctx, q) == "z3 z1 z1 z3");
  CHECK(roots_audit(ctx, q));
  // a variable with value exactly z1 z1 exists
  bool found = false;
  for (Var v = 0; v < q.var_count(); ++v) {
    Program r = restriction(q, v);
    if (value_length(r) == 2 && value_str(ctx, r) == "z1 z1") found = true;
  }
  CHECK(found);
  // already-rooted program: value unchanged
  Program q2 = ensure_component_roots(q, ctx);
  CHECK(value_str(ctx, q2) == "z3 z1 z1 z3");
  CHECK(roots_audit(ctx, q2));
}

TEST_CASE("ensure_component_roots: random component-splitting programs") {
  GroupContext ctx = gstar();
  int audited = 0;
  for (std::uint64_t seed = 0; audited < 120; ++seed) {
    Program p = random_slp(ctx, seed, 24, RandomProfile::kComponentSplitting);
    if (value_length(p) > 10000 || value_length(p) == 0) continue;
    Program q = ensure_component_roots(p, ctx);
    CHECK(slp_equal(to_cnf(p), q));
    CHECK(roots_audit(ctx, q));
    CHECK(height_of(q, q.start()) <= 2 * p.var_count() + 2);
    ++audited;
  }
}

TEST_CASE("hat_length and index conversion") {
  GroupContext ctx = gstar();
  Program p = word_program(ctx, "z3 z1 z1 z3");
  CHECK(hat_length(p, ctx) == 3);
  auto [i, j] = compressed_to_raw(p, ctx, 1, 2);
  CHECK(i == 1);
  CHECK(j == 3);
  auto [k, l] = raw_to_compressed(p, ctx, 1, 3);
  CHECK(k == 1);
  CHECK(l == 2);
  auto [k0, l0] = raw_to_compressed(p, ctx, 0, 4);
  CHECK(k0 == 0);
  CHECK(l0 == 3);
  CHECK_THROWS_AS(raw_to_compressed(p, ctx, 1, 2), IndexError);
  // random programs against a scan of the decompressed value
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 40; ++iter) {
    Program r = random_slp(ctx, 1000 + iter, 16, RandomProfile::kBalanced);
    BigInt n = value_length(r);
    if (n == 0 || n > 4000) continue;
    Word w = decompress(r, 5000);
    auto comps = components(ctx, w);
    BigInt hn = comps.size();
    CHECK(hat_length(r, ctx) == hn);
    BigInt kk = BigInt(rng() % 1000) % (hn + 1);
    BigInt ll = kk + BigInt(rng() % 1000) % (hn - kk + 1);
    auto [ri, rj] = compressed_to_raw(r, ctx, kk, ll);
    std::size_t want_i =
        kk == hn ? w.size() : std::get<0>(comps[static_cast<std::size_t>(kk)]);
    std::size_t want_j =
        ll == hn ? w.size() : std::get<0>(comps[static_cast<std::size_t>(ll)]);
    CHECK(ri == want_i);
    CHECK(rj == want_j);
  }
}

TEST_CASE("split_check") {
  GroupContext ctx = gstar();
  Program p = word_program(ctx, "z1 z1 z3");
  // subword z1 z3 starting at 1 starts mid-component
  CHECK(split_check(p, ctx, 1, 2) == SplitClass::Splitting);
  // full word
  CHECK(split_check(p, ctx, 0, 3) == SplitClass::NonSplitting);
  // proper subword of a component (as a subword occurrence): non-splitting
  CHECK(split_check(p, ctx, 0, 1) == SplitClass::NonSplitting);
  CHECK(split_check(p, ctx, 1, 1) == SplitClass::NonSplitting);
}

TEST_CASE("compressed_cut_normalize") {
  GroupContext ctx = gstar();
  // cut B[1:3) where val(B) = z3 z1 z1 z3 -> B[[1:2))
  Program p = parse_program(
      "start S\nS = rawcut B 1 3\nB = 'z3' 'z1' 'z1' 'z3'\n", ctx.alphabet);
  Program q = compressed_cut_normalize(p, ctx);
  const Rhs& r = q.rhs(q.start());
  CHECK(r.kind == RhsKind::CutHat);
  CHECK(r.lo == 1);
  CHECK(r.hi == 2);
  // full range
  Program full = parse_program(
      "start S\nS = rawcut B 0 4\nB = 'z3' 'z1' 'z1' 'z3'\n", ctx.alphabet);
  const Rhs& rf = compressed_cut_normalize(full, ctx).rhs(0);
  CHECK(rf.lo == 0);
  CHECK(rf.hi == 3);
  // proper subword of a component: splitting-cut error
  Program bad = parse_program(
      "start S\nS = rawcut B 1 2\nB = 'z3' 'z1' 'z1' 'z3'\n", ctx.alphabet);
  CHECK_THROWS_AS(compressed_cut_normalize(bad, ctx), IndexError);
}

TEST_CASE("nf_short_hat") {
  GroupContext ctx = gstar();
  Program p = word_program(ctx, "z1 z1");
  Program s = nf_short_hat(p, ctx);
  CHECK(value_str(ctx, s) == "z1^2");
  CHECK(s.size() <= 4);
  Program eps = nf_short_hat(Program::empty(ctx.alphabet), ctx);
  CHECK(value_length(eps) == 0);
  // random products of <= 30 syllables with vectors up to 1e6, against the
  // syllable oracle; measured size bound with the module constant
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<ConcatPart> parts;
    std::vector<Syllable> sylls;
    int m = 1 + static_cast<int>(rng() % 10);
    for (int s2 = 0; s2 < m; ++s2) {
      int f = static_cast<int>(rng() % 2);
      const FactorSpec& fs = ctx.factors[f];
      ExpVec v(fs.rank);
      for (auto& c : v) c = BigInt(rng() % 2000001) - 1000000;
      sylls.push_back(Syllable{f, v});
      parts.emplace_back(compact_vector_slp(ctx.alphabet, fs, v));
    }
    Program q = concat(ctx.alphabet, parts);
    Program nf = nf_short_hat(q, ctx);
    auto want = oracle_syllable_nf(ctx, sylls);
    Program canon = Program::empty(ctx.alphabet);
    {
      std::vector<ConcatPart> cp;
      for (const Syllable& sy : want)
        cp.emplace_back(slex_vector_slp(ctx.alphabet, ctx.factors[sy.factor], sy.vec));
      if (!cp.empty()) canon = concat(ctx.alphabet, cp);
    }
    CHECK(slp_equal(nf, canon));
    CHECK(is_nf_reduced_slp(nf, ctx));
    BigInt w_len = value_length(nf);
    BigInt w_hat = hat_length(nf, ctx);
    if (w_hat > 0) {
      double logw = std::max(1.0, std::log2(std::max(2.0, w_len.convert_to<double>())));
      CHECK(static_cast<double>(nf.size()) <=
            kShortHatSizeC * w_hat.convert_to<double>() * logw + 1e-6);
    }
  }
}

TEST_CASE("nf_from_quasigeodesic") {
  GroupContext ctx = gstar();
  // already nf-reduced input comes back with equal value
  Program p = word_program(ctx, "z1 z3 z2 z3");
  Program q = nf_from_quasigeodesic(p, ctx);
  CHECK(slp_equal(to_cnf(p), to_cnf(q)));
  // nf word followed by one letter
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    Word base;
    {
      int n = static_cast<int>(rng() % 30);
      Word w;
      for (int i = 0; i < n; ++i)
        w.push_back(static_cast<LetterId>(rng() % ctx.alphabet->size()));
      base = nf_word(ctx, w);
    }
    LetterId extra = static_cast<LetterId>(rng() % ctx.alphabet->size());
    Word input = base;
    input.push_back(extra);
    Program in = Program::from_word(ctx.alphabet, input);
    Program out = nf_from_quasigeodesic(in, ctx);
    Word expect = naive_nf(ctx, input);
    CHECK(word_str(ctx, decompress(out, 10000)) == word_str(ctx, expect));
    CHECK(is_nf_reduced_slp(out, ctx));
  }
}

TEST_CASE("build_nf_tcslp_geodesic") {
  GroupContext ctx = gstar();
  // already nf-reduced: value unchanged
  Program p = word_program(ctx, "z1 z3 z1");
  CHECK(value_str(ctx, build_nf_tcslp_geodesic(p, ctx)) == "z1 z3 z1");
  // alternating syllables with non-slex components
  Program q = word_program(ctx, "z1 z1 z3");
  Program out = build_nf_tcslp_geodesic(q, ctx);
  CHECK(value_str(ctx, out) == "z1^2 z3");
  // non-geodesic derived word rejected
  CHECK_THROWS(build_nf_tcslp_geodesic(word_program(ctx, "z1 z3 z3^-1"), ctx));
  // random alternating-syllable programs agree with the oracle
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<ConcatPart> parts;
    Word flat;
    int prev = -1;
    int m = static_cast<int>(rng() % 8);
    for (int s = 0; s < m; ++s) {
      int f = static_cast<int>(rng() % 2);
      if (f == prev) f = 1 - f;
      const FactorSpec& fs = ctx.factors[f];
      Word run;
      int letters = 1 + static_cast<int>(rng() % 5);
      for (int i = 0; i < letters; ++i)
        run.push_back(fs.y_ids[rng() % fs.y_size()]);
      ExpVec v = word_vector(*ctx.alphabet, run, fs);
      bool zero = true;
      for (const BigInt& c : v) zero &= c == 0;
      if (zero) continue;
      parts.emplace_back(Program::from_word(ctx.alphabet, run));
      flat.insert(flat.end(), run.begin(), run.end());
      prev = f;
    }
    if (parts.empty()) continue;
    Program g = concat(ctx.alphabet, parts);
    Program out2 = build_nf_tcslp_geodesic(g, ctx);
    CHECK(word_str(ctx, decompress(out2, 20000)) == word_str(ctx, naive_nf(ctx, flat)));
  }
}
