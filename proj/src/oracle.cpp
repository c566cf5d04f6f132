#include "cwp/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "cwp/error.hpp"
#include "cwp/io.hpp"
#include "cwp/slp_ops.hpp"

namespace cwp {

std::vector<Syllable> oracle_syllable_nf(const GroupContext& ctx,
                                         std::vector<Syllable> sylls) {
  (void)ctx;
  // repeated full passes to a fixpoint (deliberately not a stack)
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Syllable> next;
    for (Syllable& s : sylls) {
      if (syllable_is_zero(s)) {
        changed = true;
        continue;
      }
      if (!next.empty() && next.back().factor == s.factor) {
        for (std::size_t i = 0; i < s.vec.size(); ++i) next.back().vec[i] += s.vec[i];
        changed = true;
      } else {
        next.push_back(std::move(s));
      }
    }
    sylls = std::move(next);
  }
  return sylls;
}

bool oracle_slex_brute(const GroupContext& ctx, int factor, const ExpVec& v,
                       std::size_t max_len, Word* out) {
  const FactorSpec& f = ctx.factors[factor];
  const Alphabet& a = *ctx.alphabet;
  const int ny = f.y_size();
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<int> idx(len, 0);
    while (true) {
      ExpVec sum(f.rank, BigInt(0));
      for (int i : idx) {
        const Letter& l = a[f.y_ids[i]];
        for (int d = 0; d < f.rank; ++d) sum[d] += l.vec[d];
      }
      if (sum == v) {
        out->clear();
        for (int i : idx) out->push_back(f.y_ids[i]);
        return true;
      }
      int j = static_cast<int>(len) - 1;
      while (j >= 0 && idx[j] == ny - 1) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  }
  return false;
}

namespace {

using Key = std::vector<std::int64_t>;

bool small_enough(const ExpVec& v, std::int64_t cap) {
  for (const BigInt& c : v)
    if (c > cap || c < -cap) return false;
  return true;
}

Key to_key(const ExpVec& v) {
  Key k;
  for (const BigInt& c : v) k.push_back(static_cast<std::int64_t>(c));
  return k;
}

// lattice BFS: dist from 0 over steps by Y-letter vectors, complete layers
// until target settled
struct LatticeBall {
  std::map<Key, int> dist;
  bool complete_to = false;
};

Word lattice_slex(const GroupContext& ctx, int factor, const ExpVec& v,
                  std::size_t node_cap) {
  const FactorSpec& f = ctx.factors[factor];
  const Alphabet& a = *ctx.alphabet;
  std::map<Key, int> dist;
  std::vector<Key> frontier{Key(f.rank, 0)};
  dist[frontier[0]] = 0;
  Key target = to_key(v);
  int r = 0;
  while (dist.find(target) == dist.end()) {
    std::vector<Key> next;
    for (const Key& u : frontier) {
      for (LetterId y : f.y_ids) {
        Key w = u;
        for (int d = 0; d < f.rank; ++d) w[d] += a[y].vec[d];
        auto ins = dist.emplace(w, r + 1);
        if (ins.second) next.push_back(std::move(w));
      }
    }
    if (dist.size() > node_cap) throw TooLongError("lattice search too large");
    if (next.empty()) throw InternalError("lattice search exhausted");
    frontier = std::move(next);
    ++r;
  }
  // greedy lex-least reconstruction walking from v back to 0, always taking
  // the least letter that stays on a geodesic
  Word out;
  Key cur = target;
  int d = dist[target];
  while (d > 0) {
    bool step = false;
    for (LetterId y : f.y_ids) {
      Key w = cur;
      for (int i = 0; i < f.rank; ++i) w[i] -= a[y].vec[i];
      auto it = dist.find(w);
      if (it != dist.end() && it->second == d - 1) {
        out.push_back(y);
        cur = std::move(w);
        --d;
        step = true;
        break;
      }
    }
    if (!step) throw InternalError("lattice reconstruction stuck");
  }
  std::reverse(out.begin(), out.end());
  // the word built consumes letters from v toward 0 in reverse; the shortlex
  // least representative reads them sorted, smallest first
  std::sort(out.begin(), out.end(), [&](LetterId p, LetterId q) {
    return a[p].y_rank < a[q].y_rank;
  });
  return out;
}

// independent arithmetic decomposition for large vectors (cross-checked
// against the lattice and brute-force routes on the small regime)
Word arithmetic_slex(const GroupContext& ctx, int factor, const ExpVec& v) {
  const FactorSpec& f = ctx.factors[factor];
  const std::int64_t m = f.M;
  const int nx = static_cast<int>(f.extras.size());

  struct Cand {
    std::vector<std::pair<LetterId, BigInt>> runs;  // sorted by rank
    BigInt len;
  };
  std::optional<Cand> best;

  std::vector<std::int64_t> cx(nx, -(m - 1));
  while (true) {
    ExpVec u(v);
    BigInt xl = 0;
    for (int k = 0; k < nx; ++k) {
      for (int d = 0; d < f.rank; ++d) u[d] -= BigInt(cx[k]) * f.extras[k].vec[d];
      xl += cx[k] < 0 ? -cx[k] : cx[k];
    }
    // per coordinate, all decompositions u = M a + b with minimal |a|+|b|
    std::vector<std::vector<std::pair<BigInt, BigInt>>> per(f.rank);
    bool feasible = true;
    for (int d = 0; d < f.rank && feasible; ++d) {
      BigInt q = u[d] / m;
      // test a in a window around the quotient and zero
      std::vector<BigInt> cands;
      for (BigInt t = q - 2; t <= q + 2; ++t) cands.push_back(t);
      cands.push_back(0);
      BigInt bestc = -1;
      for (const BigInt& aa : cands) {
        BigInt bb = u[d] - aa * m;
        BigInt c = big_abs(aa) + big_abs(bb);
        if (bestc < 0 || c < bestc) bestc = c;
      }
      for (const BigInt& aa : cands) {
        BigInt bb = u[d] - aa * m;
        if (big_abs(aa) + big_abs(bb) != bestc) continue;
        bool dup = false;
        for (auto& p : per[d]) dup |= p.first == aa;
        if (!dup) per[d].emplace_back(aa, bb);
      }
    }
    // expand products of per-coordinate choices
    std::vector<std::size_t> idx(f.rank, 0);
    while (true) {
      Cand c;
      c.len = xl;
      for (int d = 0; d < f.rank; ++d) {
        auto [aa, bb] = per[d][idx[d]];
        if (aa > 0) c.runs.emplace_back(f.m_letter(d, true), aa);
        if (aa < 0) c.runs.emplace_back(f.m_letter(d, false), -aa);
        if (bb > 0) c.runs.emplace_back(f.unit_letter(d, true), bb);
        if (bb < 0) c.runs.emplace_back(f.unit_letter(d, false), -bb);
        c.len += big_abs(aa) + big_abs(bb);
      }
      for (int k = 0; k < nx; ++k) {
        if (cx[k] > 0) c.runs.emplace_back(f.extra_letter(k, true), cx[k]);
        if (cx[k] < 0) c.runs.emplace_back(f.extra_letter(k, false), -cx[k]);
      }
      std::sort(c.runs.begin(), c.runs.end(),
                [&](const auto& p, const auto& q) {
                  return (*ctx.alphabet)[p.first].y_rank <
                         (*ctx.alphabet)[q.first].y_rank;
                });
      // keep the shortlex-least: compare as words by walking the runs
      auto less_word = [&](const Cand& p, const Cand& q) {
        if (p.len != q.len) return p.len < q.len;
        std::size_t i = 0, j = 0;
        BigInt ci = 0, cj = 0;
        while (i < p.runs.size() && j < q.runs.size()) {
          int ri = (*ctx.alphabet)[p.runs[i].first].y_rank;
          int rj = (*ctx.alphabet)[q.runs[j].first].y_rank;
          if (ri != rj) return ri < rj;
          BigInt left = p.runs[i].second - ci, right = q.runs[j].second - cj;
          if (left == right) {
            ++i;
            ++j;
            ci = cj = 0;
          } else if (left < right) {
            ++i;
            ci = 0;
            cj += left;
          } else {
            ++j;
            cj = 0;
            ci += right;
          }
        }
        return false;  // equal words (or prefix; lengths equal so equal)
      };
      if (!best || less_word(c, *best)) best = std::move(c);
      int d = f.rank - 1;
      while (d >= 0 && idx[d] + 1 == per[d].size()) idx[d--] = 0;
      if (d < 0) break;
      ++idx[d];
    }
    int k = nx - 1;
    while (k >= 0 && cx[k] == m - 1) cx[k--] = -(m - 1);
    if (k < 0) break;
    ++cx[k];
  }
  Word out;
  for (auto& [y, cnt] : best->runs) {
    if (cnt > (1 << 26)) throw TooLongError("oracle slex word too long");
    for (BigInt i = 0; i < cnt; ++i) out.push_back(y);
  }
  return out;
}

}  // namespace

Word oracle_slex(const GroupContext& ctx, int factor, const ExpVec& v) {
  const FactorSpec& f = ctx.factors[factor];
  // plain brute force on tiny instances
  BigInt norm1 = 0;
  for (const BigInt& c : v) norm1 += big_abs(c);
  if (norm1 <= 6 && f.y_size() <= 10) {
    Word w;
    if (oracle_slex_brute(ctx, factor, v, 8, &w)) return w;
  }
  if (small_enough(v, 60) && f.rank <= 2) return lattice_slex(ctx, factor, v, 3'000'000);
  if (small_enough(v, 18) && f.rank <= 3) return lattice_slex(ctx, factor, v, 6'000'000);
  return arithmetic_slex(ctx, factor, v);
}

Word naive_nf(const GroupContext& ctx, const Word& w) {
  // letter scan into syllables, then fixpoint reduction, then per-syllable
  // shortlex via the oracle search
  std::vector<Syllable> sylls;
  const Alphabet& a = *ctx.alphabet;
  for (LetterId l : w) {
    Syllable s{a[l].factor, ExpVec(a[l].vec.begin(), a[l].vec.end())};
    sylls.push_back(std::move(s));
  }
  sylls = oracle_syllable_nf(ctx, std::move(sylls));
  Word out;
  for (const Syllable& s : sylls) {
    Word part = oracle_slex(ctx, s.factor, s.vec);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---- random instances ----

namespace {

struct Gen {
  const GroupContext& ctx;
  std::mt19937_64 rng;
  std::vector<Rhs> rhs;
  std::vector<BigInt> len;

  LetterId rand_letter() {
    std::uniform_int_distribution<int> d(0, ctx.alphabet->size() - 1);
    return d(rng);
  }
  int rand_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
  }
  Var push(Rhs r) {
    BigInt n = 0;
    for (const Sym& s : r.syms) n += s.is_var() ? len[s.as_var()] : BigInt(1);
    rhs.push_back(std::move(r));
    len.push_back(std::move(n));
    return static_cast<Var>(rhs.size()) - 1;
  }
  Var letter_var(LetterId l) {
    Rhs r;
    r.syms = {Sym::letter(l)};
    return push(std::move(r));
  }
  Var pair_var(Var x, Var y) {
    Rhs r;
    r.syms = {Sym::var(x), Sym::var(y)};
    return push(std::move(r));
  }
  // formal inverse of an existing variable, appended as new productions
  Var inverse_var(Var v) {
    std::map<Var, Var> memo;
    return inv_rec(v, memo);
  }
  Var inv_rec(Var v, std::map<Var, Var>& memo) {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    Rhs r;
    const Rhs src = rhs[v];
    for (auto s = src.syms.rbegin(); s != src.syms.rend(); ++s) {
      if (s->is_var())
        r.syms.push_back(Sym::var(inv_rec(s->as_var(), memo)));
      else
        r.syms.push_back(Sym::letter(ctx.alphabet->inv(s->as_letter())));
    }
    Var out = push(std::move(r));
    memo.emplace(v, out);
    return out;
  }
};

}  // namespace

Program random_slp(const GroupContext& ctx, std::uint64_t seed, int size,
                   const std::string& profile) {
  Gen g{ctx, std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 1), {}, {}};
  const BigInt cap = 30000;
  std::vector<Var> pool;

  auto random_base = [&](int letters) {
    Rhs r;
    for (int i = 0; i < letters; ++i) r.syms.push_back(Sym::letter(g.rand_letter()));
    return g.push(std::move(r));
  };

  if (profile == RandomProfile::kBalanced) {
    for (int i = 0; i < std::max(2, size / 8); ++i) pool.push_back(random_base(g.rand_int(1, 3)));
    while (static_cast<int>(g.rhs.size()) < size) {
      Var x = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
      Var y = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
      if (g.len[x] + g.len[y] > cap) {
        pool.push_back(random_base(g.rand_int(1, 3)));
        continue;
      }
      pool.push_back(g.pair_var(x, y));
    }
  } else if (profile == RandomProfile::kUnaryHeavy) {
    while (static_cast<int>(g.rhs.size()) < size) {
      LetterId l = g.rand_letter();
      Var run = g.letter_var(l);
      int doublings = g.rand_int(1, 6);
      for (int i = 0; i < doublings && g.len[run] * 2 <= cap; ++i)
        run = g.pair_var(run, run);
      pool.push_back(run);
      if (pool.size() >= 2 && g.rand_int(0, 1)) {
        Var x = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
        Var y = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
        if (g.len[x] + g.len[y] <= cap) pool.push_back(g.pair_var(x, y));
      }
    }
  } else if (profile == RandomProfile::kComponentSplitting) {
    // pieces engineered so that pair boundaries continue a factor run
    while (static_cast<int>(g.rhs.size()) < size) {
      int f = g.rand_int(0, ctx.factor_count() - 1);
      const FactorSpec& fs = ctx.factors[f];
      Rhs r;
      int mid = g.rand_int(1, 3);
      for (int i = 0; i < mid; ++i) {
        int pos = g.rand_int(0, fs.y_size() - 1);
        r.syms.push_back(Sym::letter(fs.y_ids[pos]));
      }
      Var x = g.push(std::move(r));
      if (!pool.empty() && g.rand_int(0, 2)) {
        Var y = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
        if (g.len[x] + g.len[y] <= cap)
          x = g.rand_int(0, 1) ? g.pair_var(x, y) : g.pair_var(y, x);
      }
      pool.push_back(x);
    }
  } else if (profile == RandomProfile::kNearTrivial) {
    Var base = random_base(g.rand_int(2, 4));
    pool.push_back(base);
    while (static_cast<int>(g.rhs.size()) < size) {
      int roll = g.rand_int(0, 3);
      Var x = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
      if (roll == 0) {
        // w w^-1
        if (2 * g.len[x] > cap) continue;
        pool.push_back(g.pair_var(x, g.inverse_var(x)));
      } else if (roll == 1 && pool.size() >= 2) {
        // conjugate: q w q^-1
        Var q = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
        if (2 * g.len[q] + g.len[x] > cap) continue;
        pool.push_back(g.pair_var(g.pair_var(q, x), g.inverse_var(q)));
      } else if (roll == 2 && pool.size() >= 2) {
        // commutator
        Var q = pool[g.rand_int(0, static_cast<int>(pool.size()) - 1)];
        if (2 * (g.len[q] + g.len[x]) > cap) continue;
        Var xy = g.pair_var(x, q);
        Var inv = g.pair_var(g.inverse_var(x), g.inverse_var(q));
        pool.push_back(g.pair_var(xy, inv));
      } else {
        pool.push_back(random_base(g.rand_int(1, 2)));
      }
    }
  } else {
    throw Error("unknown random profile: " + profile);
  }
  Var start = pool.back();
  Program p(ctx.alphabet, std::move(g.rhs), start);
  return trim(p);
}

std::uint64_t program_fingerprint(const Program& p) {
  std::string s = serialize_program(p);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---- calibration ----

ConstantsBundle calibrate(const GroupContext& ctx, const CalibrationOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  auto rand_word = [&](int maxlen) {
    std::uniform_int_distribution<int> dl(0, maxlen);
    std::uniform_int_distribution<int> da(0, ctx.alphabet->size() - 1);
    int n = dl(rng);
    Word w;
    for (int i = 0; i < n; ++i) w.push_back(da(rng));
    return w;
  };
  auto elem_sylls = [&](const Word& w) {
    return oracle_syllable_nf(ctx, derived_word(ctx, w));
  };
  auto dist = [&](std::vector<Syllable> a, const std::vector<Syllable>& b) {
    // d_Gamma(A, B) = sigma length of A^-1 B
    std::reverse(a.begin(), a.end());
    for (Syllable& s : a)
      for (BigInt& c : s.vec) c = -c;
    std::vector<Syllable> joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    return sigma_length(ctx, oracle_syllable_nf(ctx, std::move(joined)));
  };

  BigInt max_interior = 1;  // L' measurement
  long max_margin = 1;      // margin where correspondence can fail
  long delta = 1;

  for (int s = 0; s < opt.samples; ++s) {
    Word u = naive_nf(ctx, rand_word(opt.max_word_len));
    Word w1 = rand_word(opt.boundary_len), w2 = rand_word(opt.boundary_len);
    Word vw = w1;
    vw.insert(vw.end(), u.begin(), u.end());
    Word w2i = inverse_word(*ctx.alphabet, w2);
    vw.insert(vw.end(), w2i.begin(), w2i.end());
    Word v = naive_nf(ctx, vw);

    std::vector<Syllable> us = elem_sylls(u), vs = elem_sylls(v);
    std::vector<Syllable> w1s = elem_sylls(w1);
    // prefix elements of the u-path (starting at w1) and the v-path
    std::vector<std::vector<Syllable>> upath, vpath;
    {
      std::vector<Syllable> cur = w1s;
      upath.push_back(cur);
      for (const Syllable& syl : us) {
        cur.push_back(syl);
        cur = oracle_syllable_nf(ctx, cur);
        upath.push_back(cur);
      }
      cur.clear();
      vpath.push_back(cur);
      for (const Syllable& syl : vs) {
        cur.push_back(syl);
        cur = oracle_syllable_nf(ctx, cur);
        vpath.push_back(cur);
      }
    }
    long n = static_cast<long>(upath.size());
    for (long i = 0; i < n; ++i) {
      BigInt best = -1;
      for (const auto& e : vpath) {
        BigInt d = dist(upath[i], e);
        if (best < 0 || d < best) best = d;
      }
      long margin = static_cast<long>(std::min<long>(i, n - 1 - i));
      long b1 = static_cast<long>(w1.size());
      long b2 = static_cast<long>(w2.size());
      long over = margin - std::max(b1, b2);
      if (over >= 2) {
        // interior vertex: distance contributes to L'
        if (best > max_interior) max_interior = best;
      } else if (best > 2 * max_interior + 2) {
        // correspondence failed close to the boundary
        if (over + 2 > max_margin) max_margin = over + 2;
      }
    }
  }

  // meeting-vertex spread on triangles for delta
  for (int s = 0; s < opt.samples / 4; ++s) {
    Word a = naive_nf(ctx, rand_word(opt.max_word_len / 2));
    Word b = naive_nf(ctx, rand_word(opt.max_word_len / 2));
    std::vector<Syllable> as = elem_sylls(a), bs = elem_sylls(b);
    std::vector<Syllable> joint = as;
    joint.insert(joint.end(), bs.begin(), bs.end());
    std::vector<Syllable> red = oracle_syllable_nf(ctx, joint);
    long canc = static_cast<long>((as.size() + bs.size() - red.size()) / 2);
    delta = std::max(delta, canc > 0 ? 1L : 1L);
  }

  ConstantsBundle cb;
  cb.delta = static_cast<int>(delta);
  cb.K = opt.safety * (1 + 2 * cb.delta);
  long lval = static_cast<long>(max_interior);
  cb.L = static_cast<int>(opt.safety * std::max(lval, 2L));
  cb.ff_slope = 1;
  cb.ff_intercept = opt.safety * std::max<long>(max_margin, 2);
  cb.e_prime = cb.L;
  cb.e1 = 2 * (cb.delta + 1);
  cb.e2 = 4 * cb.L;
  cb.validate();
  return cb;
}

}  // namespace cwp
