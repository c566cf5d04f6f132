#include "ws.hpp"

#include <algorithm>

#include "cwp/equality.hpp"
#include "cwp/error.hpp"
#include "cwp/slp_ops.hpp"

namespace cwp::wsd {

Ws::Ws(const GroupContext& c) : ctx(c) {
  leaf_memo.assign(ctx.alphabet->size(), -1);
  syl_alpha = std::make_shared<Alphabet>();
}

Var Ws::fresh(Node n, const BigInt& l, const BigInt& h, int ff, int fl, bool pu,
              Var fc, Var lc) {
  Var v = count();
  node.push_back(n);
  len.push_back(l);
  hat.push_back(h);
  height.push_back(n.is_leaf() ? 1 : std::max(height[n.x], height[n.y]) + 1);
  fac_first.push_back(static_cast<std::int16_t>(ff));
  fac_last.push_back(static_cast<std::int16_t>(fl));
  pure.push_back(pu);
  fcr.push_back(fc == -2 ? -2 : (pu ? v : fc));
  lcr.push_back(lc == -2 ? -2 : (pu ? v : lc));
  if (pu) {
    fcr[v] = v;
    lcr[v] = v;
  }
  return v;
}

Var Ws::leaf(LetterId l) {
  if (leaf_memo[l] >= 0) return leaf_memo[l];
  int f = ctx.factor_of(l);
  Var v = fresh(Node{-1, -1, l}, 1, 1, f, f, true, 0, 0);
  leaf_memo[l] = v;
  return v;
}

Var Ws::pair(Var x, Var y) {
  require(x >= 0 && y >= 0, "pair: empty child");
  std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y);
  auto it = pair_memo.find(key);
  if (it != pair_memo.end()) return it->second;
  bool m = merges(x, y);
  bool pu = pure[x] && pure[y] && m;
  Var fc = -2, lc = -2;
  if (!pu && invariant(x) && invariant(y) && !m) {
    fc = fcr[x];
    lc = lcr[y];
  }
  Var v = fresh(Node{x, y, -1}, len[x] + len[y], hat[x] + hat[y] - (m ? 1 : 0),
                fac_first[x], fac_last[y], pu, fc, lc);
  pair_memo.emplace(key, v);
  return v;
}

Var Ws::cat(Var x, Var y) {
  if (x < 0) return y;
  if (y < 0) return x;
  return pair(x, y);
}

namespace {
Var fold_balanced(Ws& ws, std::vector<Var>& parts) {
  if (parts.empty()) return -1;
  while (parts.size() > 1) {
    std::vector<Var> next;
    next.reserve(parts.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(ws.pair(parts[i], parts[i + 1]));
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts[0];
}
}  // namespace

Var Ws::word(const Word& w) {
  std::vector<Var> parts;
  parts.reserve(w.size());
  for (LetterId l : w) parts.push_back(leaf(l));
  return fold_balanced(*this, parts);
}

Var Ws::power(LetterId l, const BigInt& n) {
  require(n >= 1, "power: exponent >= 1");
  Var bit = leaf(l);
  Var acc = -1;
  const std::size_t bits = bit_length(n);
  for (std::size_t i = 0; i < bits; ++i) {
    if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) acc = cat(acc, bit);
    if (i + 1 < bits) bit = pair(bit, bit);
  }
  return acc;
}

Var Ws::import(const Program& p) {
  require(p.is_slp(), "import: SLP expected");
  require(p.alphabet_ref().get() == ctx.alphabet.get(), "import: foreign alphabet");
  std::vector<BigInt> vlen = var_lengths(p);
  std::vector<Var> map(p.var_count(), -1);
  for (Var v : p.topo_order()) {
    if (vlen[v] == 0) continue;
    std::vector<Var> parts;
    for (const Sym& s : p.rhs(v).syms) {
      if (s.is_var()) {
        if (vlen[s.as_var()] > 0) parts.push_back(map[s.as_var()]);
      } else {
        parts.push_back(leaf(s.as_letter()));
      }
    }
    map[v] = fold_balanced(*this, parts);
  }
  return map[p.start()];
}

Program Ws::export_prog(Var root) const {
  if (root < 0) return Program::empty(ctx.alphabet);
  std::vector<Var> order;
  std::unordered_map<Var, Var> map;
  std::vector<Var> stack{root};
  while (!stack.empty()) {
    Var v = stack.back();
    stack.pop_back();
    if (map.count(v)) continue;
    map.emplace(v, -1);
    order.push_back(v);
    if (!node[v].is_leaf()) {
      stack.push_back(node[v].x);
      stack.push_back(node[v].y);
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<Rhs> rhs(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) map[order[i]] = static_cast<Var>(i);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Node& n = node[order[i]];
    if (n.is_leaf())
      rhs[i].syms = {Sym::letter(n.letter)};
    else
      rhs[i].syms = {Sym::var(map[n.x]), Sym::var(map[n.y])};
  }
  return Program(ctx.alphabet, std::move(rhs), map[root]);
}

std::vector<Var> Ws::export_fragment(const std::vector<Var>& roots,
                                     std::vector<Rhs>& rhs) const {
  std::vector<Var> order;
  std::unordered_map<Var, Var> map;
  for (Var root : roots) {
    if (root < 0 || map.count(root)) continue;
    std::vector<Var> stack{root};
    while (!stack.empty()) {
      Var v = stack.back();
      stack.pop_back();
      if (map.count(v)) continue;
      map.emplace(v, -1);
      order.push_back(v);
      if (!node[v].is_leaf()) {
        stack.push_back(node[v].x);
        stack.push_back(node[v].y);
      }
    }
  }
  std::sort(order.begin(), order.end());
  for (Var u : order) {
    Rhs r;
    if (node[u].is_leaf()) {
      r.syms = {Sym::letter(node[u].letter)};
    } else {
      r.syms = {Sym::var(map[node[u].x]), Sym::var(map[node[u].y])};
    }
    map[u] = static_cast<Var>(rhs.size());
    rhs.push_back(std::move(r));
  }
  std::vector<Var> out;
  for (Var root : roots) out.push_back(root < 0 ? -1 : map[root]);
  return out;
}

BigInt Ws::run_start(Var v, BigInt k) const {
  require(v >= 0 && k >= 0 && k <= hat[v], "run_start: bad run index");
  BigInt off = 0;
  while (true) {
    if (k == 0) return off;
    if (k == hat[v]) return off + len[v];
    const Node& n = node[v];
    require(!n.is_leaf() && !pure[v], "run_start: interior of a pure value");
    bool m = merges(n.x, n.y);
    if (k < hat[n.x]) {
      v = n.x;
    } else if (k == hat[n.x] && !m) {
      return off + len[n.x];
    } else {
      off += len[n.x];
      k = k - hat[n.x] + (m ? 1 : 0);
      v = n.y;
    }
  }
}

Var Ws::prefix(Var v, const BigInt& i) {
  require(v >= 0 && i >= 0 && i <= len[v], "prefix: bad index");
  if (i == 0) return -1;
  std::vector<Var> parts;
  BigInt k = i;
  while (true) {
    if (k == len[v]) {
      parts.push_back(v);
      break;
    }
    const Node& n = node[v];
    if (k <= len[n.x]) {
      v = n.x;
    } else {
      parts.push_back(n.x);
      k -= len[n.x];
      v = n.y;
    }
  }
  Var acc = -1;
  for (Var p : parts) acc = cat(acc, p);
  return acc;
}

Var Ws::suffix(Var v, const BigInt& i) {
  require(v >= 0 && i >= 0 && i <= len[v], "suffix: bad index");
  if (i == len[v]) return -1;
  std::vector<Var> tail;
  BigInt k = i;
  Var head = -1;
  while (true) {
    if (k == 0) {
      head = v;
      break;
    }
    const Node& n = node[v];
    if (k >= len[n.x]) {
      k -= len[n.x];
      v = n.y;
    } else {
      tail.push_back(n.y);
      v = n.x;
    }
  }
  Var acc = head;
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) acc = cat(acc, *it);
  return acc;
}

Var Ws::range(Var v, const BigInt& i, const BigInt& j) {
  require(v >= 0 && i >= 0 && i <= j && j <= len[v], "range: bad indices");
  if (i == j) return -1;
  BigInt a = i, b = j;
  while (true) {
    if (a == 0 && b == len[v]) return v;
    const Node& n = node[v];
    if (b <= len[n.x]) {
      v = n.x;
    } else if (a >= len[n.x]) {
      a -= len[n.x];
      b -= len[n.x];
      v = n.y;
    } else {
      return pair(suffix(n.x, a), prefix(n.y, b - len[n.x]));
    }
  }
}

Syllable Ws::syl_at(Var v, const BigInt& k) const {
  require(v >= 0 && k >= 0 && k < hat[v], "syl_at: bad run index");
  struct Pending {
    Var v;
    BigInt k;
  };
  // merged runs may span several nodes; accumulate
  Syllable out{fac_first[v], {}};
  bool init = false;
  std::vector<Pending> work{{v, k}};
  while (!work.empty()) {
    auto [u, kk] = work.back();
    work.pop_back();
    if (pure[u]) {
      const ExpVec& ev = const_cast<Ws*>(this)->vec_of(u);
      if (!init) {
        out.factor = fac_first[u];
        out.vec = ev;
        init = true;
      } else {
        for (std::size_t i = 0; i < ev.size(); ++i) out.vec[i] += ev[i];
      }
      continue;
    }
    const Node& n = node[u];
    bool m = merges(n.x, n.y);
    if (kk < hat[n.x] - (m ? 1 : 0)) {
      work.push_back({n.x, kk});
    } else if (m && kk == hat[n.x] - 1) {
      // keep order: x's last run then y's first run (order irrelevant for sums)
      work.push_back({n.x, hat[n.x] - 1});
      work.push_back({n.y, 0});
    } else {
      work.push_back({n.y, kk - hat[n.x] + (m ? 1 : 0)});
    }
  }
  return out;
}

const ExpVec& Ws::vec_of(Var v) {
  require(v >= 0 && pure[v], "vec_of: pure node expected");
  {
    auto it = vecsum_memo.find(v);
    if (it != vecsum_memo.end()) return it->second;
  }
  std::vector<Var> stack{v};
  while (!stack.empty()) {
    Var u = stack.back();
    if (vecsum_memo.count(u)) {
      stack.pop_back();
      continue;
    }
    if (node[u].is_leaf()) {
      const Letter& l = (*ctx.alphabet)[node[u].letter];
      ExpVec s(l.vec.begin(), l.vec.end());
      vecsum_memo.emplace(u, std::move(s));
      stack.pop_back();
      continue;
    }
    Var x = node[u].x, y = node[u].y;
    auto ix = vecsum_memo.find(x), iy = vecsum_memo.find(y);
    if (ix == vecsum_memo.end() || iy == vecsum_memo.end()) {
      if (ix == vecsum_memo.end()) stack.push_back(x);
      if (iy == vecsum_memo.end()) stack.push_back(y);
      continue;
    }
    ExpVec s = ix->second;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += iy->second[i];
    vecsum_memo.emplace(u, std::move(s));
    stack.pop_back();
  }
  return vecsum_memo.find(v)->second;
}

std::vector<Syllable> Ws::read_syllables(Var v, std::size_t cap) {
  std::vector<Syllable> out;
  if (v < 0) return out;
  if (hat[v] > cap) throw TooLongError("read_syllables: derived word exceeds cap");
  std::vector<Var> stack{v};
  while (!stack.empty()) {
    Var u = stack.back();
    stack.pop_back();
    if (pure[u]) {
      const ExpVec& ev = vec_of(u);
      if (!out.empty() && out.back().factor == fac_first[u]) {
        for (std::size_t i = 0; i < ev.size(); ++i) out.back().vec[i] += ev[i];
      } else {
        out.push_back(Syllable{fac_first[u], ev});
      }
      continue;
    }
    stack.push_back(node[u].y);
    stack.push_back(node[u].x);
  }
  return out;
}

const std::vector<BigInt>& Ws::canonical(int fac, const ExpVec& v) {
  auto key = std::make_pair(fac, v);
  auto it = canon_memo.find(key);
  if (it != canon_memo.end()) return it->second;
  return canon_memo.emplace(std::move(key), canonical_profile(ctx.factors[fac], v))
      .first->second;
}

BigInt Ws::geo_len(int fac, const ExpVec& v) {
  const std::vector<BigInt>& p = canonical(fac, v);
  BigInt s = 0;
  for (const BigInt& c : p) s += c;
  return s;
}

BigInt Ws::geo_len(const std::vector<Syllable>& sylls) {
  BigInt s = 0;
  for (const Syllable& syl : sylls) s += geo_len(syl.factor, syl.vec);
  return s;
}

Var Ws::compact_syllable(const Syllable& s) {
  const std::vector<BigInt>& prof = canonical(s.factor, s.vec);
  const FactorSpec& f = ctx.factors[s.factor];
  Var acc = -1;
  for (int i = 0; i < f.y_size(); ++i)
    if (prof[i] > 0) acc = cat(acc, power(f.y_ids[i], prof[i]));
  return acc;
}

Var Ws::compact_syllables(const std::vector<Syllable>& sylls) {
  Var acc = -1;
  for (const Syllable& s : sylls) acc = cat(acc, compact_syllable(s));
  return acc;
}

// ---- nf-reducedness ----

namespace {
ExpVec profile_vector(const GroupContext& ctx, int fac, const std::vector<BigInt>& prof) {
  const FactorSpec& f = ctx.factors[fac];
  ExpVec v(f.rank, BigInt(0));
  for (int i = 0; i < f.y_size(); ++i) {
    if (prof[i] == 0) continue;
    const Letter& l = (*ctx.alphabet)[f.y_ids[i]];
    for (int d = 0; d < f.rank; ++d) v[d] += prof[i] * l.vec[d];
  }
  return v;
}

RunInfo merge_runs(const RunInfo& a, const RunInfo& b) {
  RunInfo r;
  r.fac = a.fac;
  auto p = std::make_shared<std::vector<BigInt>>(*a.prof);
  for (std::size_t i = 0; i < p->size(); ++i) (*p)[i] += (*b.prof)[i];
  r.prof = std::move(p);
  r.sorted = a.sorted && b.sorted && a.last_rank <= b.first_rank;
  r.first_rank = a.first_rank;
  r.last_rank = b.last_rank;
  return r;
}
}  // namespace

const NfStatus& Ws::nf_status(Var v) {
  auto it = nf_memo.find(v);
  if (it != nf_memo.end()) return it->second;

  // iterative bottom-up over the (unvisited) subdag
  std::vector<Var> stack{v};
  while (!stack.empty()) {
    Var u = stack.back();
    if (nf_memo.count(u)) {
      stack.pop_back();
      continue;
    }
    const Node& n = node[u];
    if (n.is_leaf()) {
      const Letter& l = (*ctx.alphabet)[n.letter];
      NfStatus s;
      s.pure = true;
      RunInfo r;
      r.fac = l.factor;
      const FactorSpec& f = ctx.factors[l.factor];
      auto prof = std::make_shared<std::vector<BigInt>>(f.y_size(), BigInt(0));
      (*prof)[l.y_rank] = 1;
      r.prof = std::move(prof);
      r.first_rank = r.last_rank = l.y_rank;
      s.first = s.last = r;
      nf_memo.emplace(u, std::move(s));
      stack.pop_back();
      continue;
    }
    auto ix = nf_memo.find(n.x), iy = nf_memo.find(n.y);
    if (ix == nf_memo.end() || iy == nf_memo.end()) {
      if (ix == nf_memo.end()) stack.push_back(n.x);
      if (iy == nf_memo.end()) stack.push_back(n.y);
      continue;
    }
    const NfStatus& sx = ix->second;
    const NfStatus& sy = iy->second;
    NfStatus s;
    bool m = sx.last.fac == sy.first.fac;
    auto validate = [&](const RunInfo& r) {
      if (!r.sorted) return false;
      ExpVec vec = profile_vector(ctx, r.fac, *r.prof);
      return *r.prof == canonical(r.fac, vec);
    };
    if (sx.pure && sy.pure && m) {
      s.pure = true;
      s.first = s.last = merge_runs(sx.last, sy.first);
      s.interior_ok = true;
    } else if (m) {
      RunInfo mid = merge_runs(sx.last, sy.first);
      s.first = sx.pure ? mid : sx.first;
      s.last = sy.pure ? mid : sy.last;
      s.interior_ok = sx.interior_ok && sy.interior_ok;
      if (!sx.pure && !sy.pure) s.interior_ok = s.interior_ok && validate(mid);
    } else {
      s.first = sx.first;
      s.last = sy.last;
      s.interior_ok = sx.interior_ok && sy.interior_ok;
      if (!sx.pure) s.interior_ok = s.interior_ok && validate(sx.last);
      if (!sy.pure) s.interior_ok = s.interior_ok && validate(sy.first);
    }
    nf_memo.emplace(u, std::move(s));
    stack.pop_back();
  }
  return nf_memo.find(v)->second;
}

bool Ws::is_nf_reduced(Var v) {
  if (v < 0) return true;
  const NfStatus s = nf_status(v);
  auto validate = [&](const RunInfo& r) {
    if (!r.sorted) return false;
    ExpVec vec = profile_vector(ctx, r.fac, *r.prof);
    return *r.prof == canonical(r.fac, vec);
  };
  if (!s.interior_ok) return false;
  if (!validate(s.first)) return false;
  if (!s.pure && !validate(s.last)) return false;
  return true;
}

// ---- Prop (comproot) ----

Var Ws::comproot(Var v) {
  if (v < 0) return v;
  std::vector<Var> work{v};
  while (!work.empty()) {
    Var u = work.back();
    if (comproot_memo.count(u)) {
      work.pop_back();
      continue;
    }
    if (invariant(u)) {
      comproot_memo.emplace(u, u);
      work.pop_back();
      continue;
    }
    const Node& nu = node[u];
    require(!nu.is_leaf(), "comproot: leaf should be invariant");
    auto ix = comproot_memo.find(nu.x), iy = comproot_memo.find(nu.y);
    if ((ix == comproot_memo.end() && !invariant(nu.x)) ||
        (iy == comproot_memo.end() && !invariant(nu.y))) {
      if (ix == comproot_memo.end()) work.push_back(nu.x);
      if (iy == comproot_memo.end()) work.push_back(nu.y);
      continue;
    }
    comproot_step(u);
    work.pop_back();
  }
  return comproot_memo.find(v)->second;
}

void Ws::comproot_step(Var v) {
  const Node& n = node[v];
  auto sub = [&](Var c) {
    auto it = comproot_memo.find(c);
    return it != comproot_memo.end() ? it->second : c;  // c invariant
  };
  Var x = sub(n.x), y = sub(n.y);
  Var out;
  if (!merges(x, y)) {
    out = pair(x, y);
  } else if (pure[x] && pure[y]) {
    out = pair(x, y);  // pure result roots itself
  } else {
    // the B'/D/C' ladder of Prop (comproot)
    Var d1 = lcr[x], d2 = fcr[y];
    require(d1 >= 0 && d2 >= 0, "comproot: children must be invariant");
    Var d = pair(d1, d2);
    // left chain: strip d1 off the right spine of x
    std::vector<Var> betas;
    for (Var cur = x; cur != d1;) {
      require(!pure[cur] && !node[cur].is_leaf(), "comproot: bad right spine");
      betas.push_back(node[cur].x);
      cur = node[cur].y;
    }
    Var left = -1;
    for (auto itb = betas.rbegin(); itb != betas.rend(); ++itb)
      left = left < 0 ? *itb : pair(*itb, left);
    // right chain: strip d2 off the left spine of y
    std::vector<Var> gammas;
    for (Var cur = y; cur != d2;) {
      require(!pure[cur] && !node[cur].is_leaf(), "comproot: bad left spine");
      gammas.push_back(node[cur].y);
      cur = node[cur].x;
    }
    Var right = -1;
    for (auto itg = gammas.rbegin(); itg != gammas.rend(); ++itg)
      right = right < 0 ? *itg : pair(right, *itg);

    if (left < 0 && right < 0)
      out = d;
    else if (left < 0)
      out = pair(d, right);
    else if (right < 0)
      out = pair(left, d);
    else
      out = pair(left, pair(d, right));
  }
  require(len[out] == len[v], "comproot: value length changed");
  require(invariant(out), "comproot: result not invariant");
  comproot_memo.emplace(v, out);
}

// ---- geodesic relabelling and inversion ----

Var Ws::slex_relabel(Var v) {
  if (v < 0) return v;
  Var c = comproot(v);
  std::vector<Var> order;
  {
    std::vector<Var> stack{c};
    std::unordered_map<Var, char> seen;
    while (!stack.empty()) {
      Var u = stack.back();
      stack.pop_back();
      if (seen.count(u)) continue;
      seen.emplace(u, 1);
      order.push_back(u);
      if (!pure[u]) {
        stack.push_back(node[u].x);
        stack.push_back(node[u].y);
      }
    }
  }
  std::sort(order.begin(), order.end());
  for (Var u : order) {
    if (relabel_memo.count(u)) continue;
    if (pure[u]) {
      relabel_memo.emplace(u, compact_syllable(Syllable{fac_first[u], vec_of(u)}));
    } else {
      relabel_memo.emplace(u, pair(relabel_memo[node[u].x], relabel_memo[node[u].y]));
    }
  }
  return relabel_memo[c];
}

Var Ws::nf_invert(Var v) {
  if (v < 0) return v;
  Var c = comproot(v);
  std::vector<Var> work{c};
  while (!work.empty()) {
    Var u = work.back();
    if (invnf_memo.count(u)) {
      work.pop_back();
      continue;
    }
    if (pure[u]) {
      ExpVec neg = vec_of(u);
      for (BigInt& x : neg) x = -x;
      invnf_memo.emplace(u, compact_syllable(Syllable{fac_first[u], std::move(neg)}));
      work.pop_back();
      continue;
    }
    auto ix = invnf_memo.find(node[u].x), iy = invnf_memo.find(node[u].y);
    if (ix == invnf_memo.end() || iy == invnf_memo.end()) {
      if (ix == invnf_memo.end()) work.push_back(node[u].x);
      if (iy == invnf_memo.end()) work.push_back(node[u].y);
      continue;
    }
    invnf_memo.emplace(u, pair(iy->second, ix->second));
    work.pop_back();
  }
  return invnf_memo.find(c)->second;
}

// ---- bounded head/tail merges ----

Var Ws::nf_prepend(const Word& alpha, Var v) {
  std::vector<Syllable> a = reduce_syllables(derived_word(ctx, alpha));
  if (v < 0) return compact_syllables(a);
  if (a.empty()) return v;
  // stack a, then push runs of v while they interact
  BigInt consumed = 0;  // runs of v consumed
  while (consumed < hat[v]) {
    Syllable s = syl_at(v, consumed);
    if (a.empty() || a.back().factor != s.factor) break;
    for (std::size_t i = 0; i < s.vec.size(); ++i) a.back().vec[i] += s.vec[i];
    ++consumed;
    if (syllable_is_zero(a.back())) a.pop_back();
  }
  return cat(compact_syllables(a), hat_suffix(v, consumed));
}

Var Ws::nf_append(Var v, const Word& beta) {
  std::vector<Syllable> b = reduce_syllables(derived_word(ctx, beta));
  if (v < 0) return compact_syllables(b);
  if (b.empty()) return v;
  // mirror of nf_prepend: stack grows leftward
  BigInt consumed = 0;
  while (consumed < hat[v]) {
    Syllable s = syl_at(v, hat[v] - 1 - consumed);
    if (b.empty() || b.front().factor != s.factor) break;
    for (std::size_t i = 0; i < s.vec.size(); ++i) b.front().vec[i] += s.vec[i];
    ++consumed;
    if (syllable_is_zero(b.front())) b.erase(b.begin());
  }
  return cat(hat_prefix(v, hat[v] - consumed), compact_syllables(b));
}

Var Ws::nf_conjugate(const Word& alpha, Var v, const Word& beta) {
  Word binv = inverse_word(*ctx.alphabet, beta);
  BigInt small = BigInt(2) * (alpha.size() + beta.size()) + 4;
  if (v < 0 || hat[v] <= small) {
    std::vector<Syllable> all = derived_word(ctx, alpha);
    if (v >= 0) {
      auto mid = read_syllables(v, 1u << 22);
      all.insert(all.end(), mid.begin(), mid.end());
    }
    auto tail = derived_word(ctx, binv);
    all.insert(all.end(), tail.begin(), tail.end());
    return compact_syllables(reduce_syllables(std::move(all)));
  }
  return nf_append(nf_prepend(alpha, v), binv);
}

Var Ws::short_nf(const std::vector<Var>& parts, const std::vector<Word>& words,
                 const std::vector<int>& order, std::size_t cap) {
  // order: >= 0 indexes parts, < 0 indexes words by ~i
  std::vector<Syllable> all;
  for (int o : order) {
    std::vector<Syllable> piece = o >= 0 ? read_syllables(parts[o], cap)
                                         : derived_word(ctx, words[~o]);
    all.insert(all.end(), piece.begin(), piece.end());
    if (all.size() > cap) throw TooLongError("short_nf: run cap exceeded");
  }
  return compact_syllables(reduce_syllables(std::move(all)));
}

// ---- derived programs & equality ----

LetterId Ws::syl_letter(const Syllable& s) {
  auto key = std::make_pair(s.factor, s.vec);
  auto it = syl_ids.find(key);
  if (it != syl_ids.end()) return it->second;
  LetterId id = syl_alpha->add(
      Letter{"s" + std::to_string(syl_alpha->size()), s.factor, {}, -1, -1});
  syl_ids.emplace(std::move(key), id);
  return id;
}

Program Ws::derived_program(Var v, bool invert) {
  AlphabetRef aref = syl_alpha;
  if (v < 0) return Program::empty(aref);
  Var c = comproot(v);
  auto key = std::make_pair(c, invert);
  {
    auto it = derived_memo.find(key);
    if (it != derived_memo.end()) return it->second;
  }
  std::vector<Var> order;
  {
    std::vector<Var> stack{c};
    std::unordered_map<Var, char> seen;
    while (!stack.empty()) {
      Var u = stack.back();
      stack.pop_back();
      if (seen.count(u)) continue;
      seen.emplace(u, 1);
      order.push_back(u);
      if (!pure[u]) {
        stack.push_back(node[u].x);
        stack.push_back(node[u].y);
      }
    }
  }
  std::sort(order.begin(), order.end());
  std::unordered_map<Var, Var> map;
  std::vector<Rhs> rhs;
  for (Var u : order) {
    Rhs r;
    if (pure[u]) {
      Syllable s{fac_first[u], vec_of(u)};
      if (invert)
        for (BigInt& x : s.vec) x = -x;
      r.syms = {Sym::letter(syl_letter(s))};
    } else if (invert) {
      r.syms = {Sym::var(map[node[u].y]), Sym::var(map[node[u].x])};
    } else {
      r.syms = {Sym::var(map[node[u].x]), Sym::var(map[node[u].y])};
    }
    map[u] = static_cast<Var>(rhs.size());
    rhs.push_back(std::move(r));
  }
  Program out(aref, std::move(rhs), map[c]);
  return derived_memo.emplace(std::move(key), std::move(out)).first->second;
}

bool Ws::derived_eq(Var a, Var b) {
  if (hat_len(a) != hat_len(b)) return false;
  if (a < 0) return true;
  return slp_equal(derived_program(a), derived_program(b));
}

BigInt Ws::derived_lcp(Var a, Var b) {
  if (a < 0 || b < 0) return 0;
  return slp_compare_prefix(derived_program(a), derived_program(b));
}

BigInt Ws::derived_lcp_inv(Var a, Var b) {
  if (a < 0 || b < 0) return 0;
  return slp_compare_prefix(derived_program(a, true), derived_program(b));
}

bool Ws::eq(Var a, Var b) {
  if (length(a) != length(b)) return false;
  if (a < 0) return true;
  return slp_equal(export_prog(a), export_prog(b));
}

}  // namespace cwp::wsd
