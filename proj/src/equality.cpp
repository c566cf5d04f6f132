#include "cwp/equality.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cwp/error.hpp"
#include "cwp/extensions.hpp"
#include "cwp/slp_ops.hpp"

namespace cwp {

namespace {

// First/last letter of val(v) by descent.
LetterId end_letter(const Program& p, bool first) {
  const std::vector<BigInt> len = var_lengths(p);
  Var v = p.start();
  if (len[v] == 0) return -1;
  while (true) {
    const Rhs& r = p.rhs(v);
    const auto& syms = r.syms;
    if (first) {
      for (const Sym& s : syms) {
        if (!s.is_var()) return s.as_letter();
        if (len[s.as_var()] > 0) {
          v = s.as_var();
          break;
        }
      }
    } else {
      for (auto it = syms.rbegin(); it != syms.rend(); ++it) {
        if (!it->is_var()) return it->as_letter();
        if (len[it->as_var()] > 0) {
          v = it->as_var();
          break;
        }
      }
    }
  }
}

// ---- recompression ----

using Rune = std::int32_t;

struct Item {
  bool var;
  std::int32_t id;  // var id, or rune
  BigInt cnt;       // run length (runs only)
};

struct Recomp {
  std::vector<std::vector<Item>> rule;
  std::vector<Var> topo;           // children before parents; super roots last
  Var r1, r2;                      // super roots
  Rune next_rune = 0;
  std::map<std::pair<Rune, BigInt>, Rune> block_rune;
  std::map<std::pair<Rune, Rune>, Rune> pair_rune;
  std::vector<BigInt> vlen;
  std::vector<Rune> first, last;   // of each variable's value

  void refresh() {
    vlen.assign(rule.size(), BigInt(0));
    first.assign(rule.size(), -1);
    last.assign(rule.size(), -1);
    for (Var v : topo) {
      BigInt n = 0;
      Rune f = -1, l = -1;
      for (const Item& it : rule[v]) {
        if (it.var) {
          n += vlen[it.id];
          if (vlen[it.id] > 0) {
            if (f < 0) f = first[it.id];
            l = last[it.id];
          }
        } else {
          n += it.cnt;
          if (f < 0) f = it.id;
          l = it.id;
        }
      }
      vlen[v] = std::move(n);
      first[v] = f;
      last[v] = l;
    }
  }

  static void append_run(std::vector<Item>& out, Rune r, BigInt cnt) {
    if (!out.empty() && !out.back().var && out.back().id == r)
      out.back().cnt += cnt;
    else
      out.push_back(Item{false, r, std::move(cnt)});
  }

  void block_round() {
    std::vector<std::optional<Item>> pop_l(rule.size()), pop_r(rule.size());
    for (Var v : topo) {
      std::vector<Item> nr;
      for (Item& it : rule[v]) {
        if (!it.var) {
          append_run(nr, it.id, std::move(it.cnt));
          continue;
        }
        Var u = it.id;
        if (pop_l[u]) append_run(nr, pop_l[u]->id, pop_l[u]->cnt);
        if (!rule[u].empty()) nr.push_back(Item{true, u, 0});
        if (pop_r[u]) append_run(nr, pop_r[u]->id, pop_r[u]->cnt);
      }
      bool super = v == r1 || v == r2;
      if (!super) {
        if (!nr.empty() && !nr.front().var) {
          pop_l[v] = std::move(nr.front());
          nr.erase(nr.begin());
        }
        if (!nr.empty() && !nr.back().var) {
          pop_r[v] = std::move(nr.back());
          nr.pop_back();
        }
      }
      rule[v] = std::move(nr);
    }
    // replace every maximal block a^k, k >= 2, by a fresh rune
    for (Var v : topo)
      for (Item& it : rule[v])
        if (!it.var && it.cnt >= 2) {
          auto key = std::make_pair(it.id, it.cnt);
          auto ins = block_rune.emplace(key, next_rune);
          if (ins.second) ++next_rune;
          it.id = ins.first->second;
          it.cnt = 1;
        }
    refresh();
  }

  void pair_round() {
    // occurrence counts of variables in the full derivation
    std::vector<BigInt> occ(rule.size(), BigInt(0));
    occ[r1] = 1;
    occ[r2] += 1;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
      for (const Item& item : rule[*it])
        if (item.var) occ[item.id] += occ[*it];

    // adjacent-pair statistics over both values
    std::map<std::pair<Rune, Rune>, BigInt> cnt;
    for (Var v : topo) {
      const std::vector<Item>& r = rule[v];
      for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        Rune a = r[i].var ? last[r[i].id] : r[i].id;
        Rune b = r[i + 1].var ? first[r[i + 1].id] : r[i + 1].id;
        if (a >= 0 && b >= 0 && a != b) cnt[{a, b}] += occ[v];
      }
    }
    if (cnt.empty()) return;

    // greedy partition by conditional expectation (weights doubled to stay
    // integral: unassigned side-probability 1/2)
    std::vector<Rune> letters;
    for (const auto& kv : cnt) {
      letters.push_back(kv.first.first);
      letters.push_back(kv.first.second);
    }
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    std::map<Rune, int> side;  // 0 L, 1 R
    for (Rune c : letters) {
      BigInt as_l = 0, as_r = 0;
      for (const auto& kv : cnt) {
        Rune a = kv.first.first, b = kv.first.second;
        if (a == c) {
          auto it = side.find(b);
          as_l += it == side.end() ? kv.second : (it->second == 1 ? 2 * kv.second : BigInt(0));
        }
        if (b == c) {
          auto it = side.find(a);
          as_r += it == side.end() ? kv.second : (it->second == 0 ? 2 * kv.second : BigInt(0));
        }
      }
      side[c] = as_l >= as_r ? 0 : 1;
    }
    auto in_l = [&](Rune r) {
      auto it = side.find(r);
      return it != side.end() && it->second == 0;
    };
    auto in_r = [&](Rune r) {
      auto it = side.find(r);
      return it != side.end() && it->second == 1;
    };

    std::vector<std::optional<Rune>> pop_l(rule.size()), pop_r(rule.size());
    for (Var v : topo) {
      std::vector<Item> nr;
      for (Item& it : rule[v]) {
        if (!it.var) {
          nr.push_back(std::move(it));
          continue;
        }
        Var u = it.id;
        if (pop_l[u]) nr.push_back(Item{false, *pop_l[u], 1});
        if (!rule[u].empty()) nr.push_back(Item{true, u, 0});
        if (pop_r[u]) nr.push_back(Item{false, *pop_r[u], 1});
      }
      bool super = v == r1 || v == r2;
      if (!super) {
        if (!nr.empty() && !nr.front().var && in_r(nr.front().id)) {
          pop_l[v] = nr.front().id;
          nr.erase(nr.begin());
        }
        if (!nr.empty() && !nr.back().var && in_l(nr.back().id)) {
          pop_r[v] = nr.back().id;
          nr.pop_back();
        }
      }
      // replace pairs ab, a in L, b in R
      std::vector<Item> out;
      for (Item& it : nr) {
        if (!it.var && !out.empty() && !out.back().var && in_l(out.back().id) &&
            in_r(it.id)) {
          auto key = std::make_pair(out.back().id, it.id);
          auto ins = pair_rune.emplace(key, next_rune);
          if (ins.second) ++next_rune;
          out.back().id = ins.first->second;
          continue;
        }
        out.push_back(std::move(it));
      }
      rule[v] = std::move(out);
    }
    refresh();
  }
};

}  // namespace

bool slp_unequal_prefilter(const Program& g, const Program& h) {
  if (value_length(g) != value_length(h)) return true;
  if (value_length(g) == 0) return false;
  if (end_letter(g, true) != end_letter(h, true)) return true;
  if (end_letter(g, false) != end_letter(h, false)) return true;
  return false;
}

bool slp_equal(const Program& g, const Program& h) {
  if (&g.alphabet() != &h.alphabet())
    throw Error("slp_equal: programs over different alphabets");
  BigInt n = value_length(g), m = value_length(h);
  if (n != m) return false;
  if (n == 0) return true;

  Recomp rc;
  auto load = [&](const Program& p) -> Var {
    Program t = trim(p);
    std::vector<BigInt> len = var_lengths(t);
    Var off = static_cast<Var>(rc.rule.size());
    for (Var v = 0; v < t.var_count(); ++v) {
      std::vector<Item> r;
      for (const Sym& s : t.rhs(v).syms) {
        if (s.is_var()) {
          if (len[s.as_var()] > 0) r.push_back(Item{true, off + s.as_var(), 0});
        } else {
          Recomp::append_run(r, s.as_letter(), 1);
        }
      }
      rc.rule.push_back(std::move(r));
    }
    return off + t.start();
  };
  Var s1 = load(g), s2 = load(h);
  rc.rule.push_back({Item{true, s1, 0}});
  rc.r1 = static_cast<Var>(rc.rule.size() - 1);
  rc.rule.push_back({Item{true, s2, 0}});
  rc.r2 = static_cast<Var>(rc.rule.size() - 1);
  rc.next_rune = g.alphabet().size();

  // topological order: children before parents (super roots last)
  {
    const int nn = static_cast<int>(rc.rule.size());
    std::vector<int> state(nn, 0);
    rc.topo.reserve(nn);
    std::vector<Var> stack;
    for (Var root : {rc.r1, rc.r2}) {
      stack.push_back(root);
      while (!stack.empty()) {
        Var v = stack.back();
        if (state[v] == 2) {
          stack.pop_back();
          continue;
        }
        if (state[v] == 0) {
          state[v] = 1;
          bool ready = true;
          for (const Item& it : rc.rule[v])
            if (it.var && state[it.id] == 0) {
              ready = false;
              stack.push_back(it.id);
            }
          if (!ready) continue;
        }
        state[v] = 2;
        rc.topo.push_back(v);
        stack.pop_back();
      }
    }
  }
  rc.refresh();

  const std::size_t cap = 2 * std::max<std::size_t>(bit_length(n), 1) + 32;
  for (std::size_t round = 0; round <= cap; ++round) {
    if (rc.vlen[rc.r1] != rc.vlen[rc.r2]) return false;  // defensive
    if (rc.vlen[rc.r1] == 1) return rc.first[rc.r1] == rc.first[rc.r2];
    rc.block_round();
    if (rc.vlen[rc.r1] == 1) return rc.first[rc.r1] == rc.first[rc.r2];
    rc.pair_round();
  }
  throw InternalError("recompression did not converge");
}

BigInt slp_compare_prefix(const Program& g, const Program& h) {
  BigInt n = value_length(g), m = value_length(h);
  BigInt cap = std::min(n, m);
  if (cap == 0) return 0;
  auto eq_prefix = [&](const BigInt& l) {
    return slp_equal(extract_substring(g, 0, l), extract_substring(h, 0, l));
  };
  if (eq_prefix(cap)) return cap;
  BigInt lo = 0, hi = cap;  // prefix(lo) equal, prefix(hi) unequal
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (eq_prefix(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

bool cslp_equal(const Program& g, const Program& h) {
  Program gs = g.is_slp() ? g : cslp_to_slp(g);
  Program hs = h.is_slp() ? h : cslp_to_slp(h);
  return slp_equal(gs, hs);
}

}  // namespace cwp
