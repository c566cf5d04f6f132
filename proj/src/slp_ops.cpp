#include "cwp/slp_ops.hpp"

#include <algorithm>
#include <map>

#include "cwp/error.hpp"

namespace cwp {

static void need_slp(const Program& p, const char* op) {
  if (!p.is_slp()) throw Error(std::string(op) + ": program has cut or tether rhs");
}

std::vector<BigInt> var_lengths(const Program& p) {
  need_slp(p, "var_lengths");
  std::vector<BigInt> len(p.var_count());
  for (Var v : p.topo_order()) {
    BigInt s = 0;
    for (const Sym& sym : p.rhs(v).syms)
      s += sym.is_var() ? len[sym.as_var()] : BigInt(1);
    len[v] = std::move(s);
  }
  return len;
}

BigInt value_length(const Program& p) { return var_lengths(p)[p.start()]; }

static std::vector<char> reachable_from(const Program& p, Var root) {
  std::vector<char> seen(p.var_count(), 0);
  std::vector<Var> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    Var v = stack.back();
    stack.pop_back();
    const Rhs& r = p.rhs(v);
    if (r.kind == RhsKind::Symbols) {
      for (const Sym& s : r.syms)
        if (s.is_var() && !seen[s.as_var()]) {
          seen[s.as_var()] = 1;
          stack.push_back(s.as_var());
        }
    } else if (!seen[r.base]) {
      seen[r.base] = 1;
      stack.push_back(r.base);
    }
  }
  return seen;
}

static Program remap_subset(const Program& p, const std::vector<char>& keep, Var start) {
  std::vector<Var> map(p.var_count(), -1);
  std::vector<Rhs> rhs;
  for (Var v = 0; v < p.var_count(); ++v)
    if (keep[v]) {
      map[v] = static_cast<Var>(rhs.size());
      rhs.push_back(p.rhs(v));
    }
  for (Rhs& r : rhs) {
    if (r.kind == RhsKind::Symbols) {
      for (Sym& s : r.syms)
        if (s.is_var()) s = Sym::var(map[s.as_var()]);
    } else {
      r.base = map[r.base];
    }
  }
  return Program(p.alphabet_ref(), std::move(rhs), map[start], p.tether_bound());
}

Program trim(const Program& p) { return remap_subset(p, reachable_from(p, p.start()), p.start()); }

Program restriction(const Program& p, Var a) {
  if (a < 0 || a >= p.var_count()) throw Error("restriction: unknown variable");
  return remap_subset(p, reachable_from(p, a), a);
}

int height_of(const Program& p, Var a) {
  if (a < 0 || a >= p.var_count()) throw Error("height: unknown variable");
  return p.heights()[a];
}

Program to_cnf(const Program& p0) {
  need_slp(p0, "to_cnf");
  Program p = trim(p0);
  std::vector<BigInt> len = var_lengths(p);
  if (len[p.start()] == 0) return Program::empty(p.alphabet_ref());

  const int n = p.var_count();
  // alias[v]: variable v's value is produced verbatim by another new var.
  std::vector<Var> new_of(n, -1);
  std::vector<Rhs> out;
  std::map<LetterId, Var> letter_var;  // dedup single-letter productions
  auto letter_node = [&](LetterId l) {
    auto it = letter_var.find(l);
    if (it != letter_var.end()) return it->second;
    Rhs r;
    r.syms.push_back(Sym::letter(l));
    Var v = static_cast<Var>(out.size());
    out.push_back(std::move(r));
    letter_var.emplace(l, v);
    return v;
  };
  auto pair_node = [&](Var x, Var y) {
    Rhs r;
    r.syms = {Sym::var(x), Sym::var(y)};
    out.push_back(std::move(r));
    return static_cast<Var>(out.size() - 1);
  };

  for (Var v : p.topo_order()) {
    if (len[v] == 0) continue;  // epsilon-valued: dropped from every rhs
    std::vector<Var> parts;
    for (const Sym& s : p.rhs(v).syms) {
      if (s.is_var()) {
        if (len[s.as_var()] == 0) continue;
        parts.push_back(new_of[s.as_var()]);
      } else {
        parts.push_back(letter_node(s.as_letter()));
      }
    }
    if (parts.size() == 1) {
      new_of[v] = parts[0];  // chain rule: inline
      continue;
    }
    // left-associative pair folding
    Var acc = parts[0];
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) acc = pair_node(acc, parts[i]);
    new_of[v] = pair_node(acc, parts.back());
  }
  Program q(p.alphabet_ref(), std::move(out), new_of[p.start()], p.tether_bound());
  return trim(q);
}

namespace {

// Shared builder for extraction: appends fresh pair variables on top of p's
// table (p must be in CNF).
struct Extractor {
  const Program& p;
  const std::vector<BigInt>& len;
  std::vector<Rhs> extra;
  Var fresh_pair(Var x, Var y) {
    Rhs r;
    r.syms = {Sym::var(x), Sym::var(y)};
    extra.push_back(std::move(r));
    return static_cast<Var>(p.var_count() + extra.size() - 1);
  }
  Var fold(const std::vector<Var>& parts) {
    Var acc = parts.at(0);
    for (std::size_t i = 1; i < parts.size(); ++i) acc = fresh_pair(acc, parts[i]);
    return acc;
  }

  // value val(v)[0:k), 0 < k <= len(v)
  Var prefix(Var v, BigInt k) {
    std::vector<Var> parts;
    while (true) {
      if (k == len[v]) {
        parts.push_back(v);
        break;
      }
      const Rhs& r = p.rhs(v);
      Var x = r.syms[0].as_var(), y = r.syms[1].as_var();
      if (k <= len[x]) {
        v = x;
      } else {
        parts.push_back(x);
        k -= len[x];
        v = y;
      }
    }
    return fold(parts);
  }

  // value val(v)[k:len), 0 <= k < len(v)
  Var suffix(Var v, BigInt k) {
    std::vector<Var> tail;
    Var head;
    while (true) {
      if (k == 0) {
        head = v;
        break;
      }
      const Rhs& r = p.rhs(v);
      Var x = r.syms[0].as_var(), y = r.syms[1].as_var();
      if (k >= len[x]) {
        k -= len[x];
        v = y;
      } else {
        tail.push_back(y);
        v = x;
      }
    }
    std::vector<Var> parts{head};
    parts.insert(parts.end(), tail.rbegin(), tail.rend());
    return fold(parts);
  }

  Var range(Var v, BigInt i, BigInt j) {
    while (true) {
      if (i == 0 && j == len[v]) return v;
      const Rhs& r = p.rhs(v);
      Var x = r.syms[0].as_var(), y = r.syms[1].as_var();
      if (j <= len[x]) {
        v = x;
      } else if (i >= len[x]) {
        i -= len[x];
        j -= len[x];
        v = y;
      } else {
        Var a = suffix(x, i);
        Var b = prefix(y, j - len[x]);
        return fresh_pair(a, b);
      }
    }
  }
};

}  // namespace

Program extract_substring(const Program& p0, const BigInt& i, const BigInt& j) {
  need_slp(p0, "extract_substring");
  BigInt total = value_length(p0);
  if (i < 0 || i > j || j > total) throw IndexError("extract_substring: index out of range");
  if (i == j) return Program::empty(p0.alphabet_ref());
  Program p = to_cnf(p0);
  std::vector<BigInt> len = var_lengths(p);
  Extractor ex{p, len, {}};
  Var root = ex.range(p.start(), i, j);
  std::vector<Rhs> rhs = p.all_rhs();
  for (Rhs& r : ex.extra) rhs.push_back(std::move(r));
  return trim(Program(p.alphabet_ref(), std::move(rhs), root, p.tether_bound()));
}

Program concat(AlphabetRef alphabet, const std::vector<ConcatPart>& parts) {
  std::vector<Rhs> rhs;
  Rhs top;
  for (const ConcatPart& part : parts) {
    if (std::holds_alternative<Word>(part)) {
      for (LetterId l : std::get<Word>(part)) top.syms.push_back(Sym::letter(l));
      continue;
    }
    const Program& q = std::get<Program>(part);
    if (&q.alphabet() != alphabet.get())
      throw Error("concat: parts over different alphabets");
    Var off = static_cast<Var>(rhs.size());
    for (Rhs r : q.all_rhs()) {
      if (r.kind == RhsKind::Symbols) {
        for (Sym& s : r.syms)
          if (s.is_var()) s = Sym::var(s.as_var() + off);
      } else {
        r.base += off;
      }
      rhs.push_back(std::move(r));
    }
    top.syms.push_back(Sym::var(q.start() + off));
  }
  Var start = static_cast<Var>(rhs.size());
  rhs.push_back(std::move(top));
  return trim(Program(std::move(alphabet), std::move(rhs), start));
}

bool fsa_membership(const Program& p, const Dfa& m) {
  need_slp(p, "fsa_membership");
  const int q = m.states;
  std::vector<std::vector<int>> map(p.var_count());
  for (Var v : p.topo_order()) {
    std::vector<int> f(q);
    for (int s = 0; s < q; ++s) f[s] = s;
    for (const Sym& sym : p.rhs(v).syms) {
      if (sym.is_var()) {
        const std::vector<int>& g = map[sym.as_var()];
        for (int s = 0; s < q; ++s) f[s] = g[f[s]];
      } else {
        for (int s = 0; s < q; ++s) f[s] = m.delta[f[s]][sym.as_letter()];
      }
    }
    map[v] = std::move(f);
  }
  return m.accepting[map[p.start()][m.start]];
}

Word decompress(const Program& p, std::size_t max_len) {
  need_slp(p, "decompress");
  BigInt n = value_length(p);
  if (n > max_len)
    throw TooLongError("decompress: value length " + n.str() + " exceeds cap " +
                       std::to_string(max_len));
  Word out;
  out.reserve(static_cast<std::size_t>(n));
  std::vector<Sym> stack{Sym::var(p.start())};
  while (!stack.empty()) {
    Sym s = stack.back();
    stack.pop_back();
    if (!s.is_var()) {
      out.push_back(s.as_letter());
      continue;
    }
    const Rhs& r = p.rhs(s.as_var());
    for (auto it = r.syms.rbegin(); it != r.syms.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

bool is_compact(const Program& p, long c_num, long c_den) {
  BigInt n = value_length(p);
  if (n <= 1) throw Error("is_compact: needs |val| > 1");
  std::int64_t sz = p.size();
  if (sz <= 1) return true;
  // |p| <= C log2 N  <=>  2^{|p| c_den} <= N^{c_num}
  BigInt lhs = BigInt(1) << static_cast<unsigned>(sz * c_den);
  BigInt rhs = boost::multiprecision::pow(n, static_cast<unsigned>(c_num));
  return lhs <= rhs;
}

void check_value_bound(const Program& p) {
  checks::count();
  BigInt n = p.is_slp() ? value_length(p) : BigInt(0);
  if (n <= 1) return;
  std::int64_t s = p.size();
  // fast path: 3 bits(N) * 1000 <= 1584 s - 1000 implies N^3 < 3^s
  std::int64_t bits = static_cast<std::int64_t>(bit_length(n));
  if (3000 * bits <= 1584 * s - 1000) return;
  BigInt lhs = n * n * n;
  BigInt rhs = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(s));
  if (lhs > rhs) throw InternalError("value bound |val| <= 3^{size/3} violated");
}

Program inverse_program(const Program& p) {
  need_slp(p, "inverse_program");
  std::vector<Rhs> rhs = p.all_rhs();
  const Alphabet& a = p.alphabet();
  for (Rhs& r : rhs) {
    std::reverse(r.syms.begin(), r.syms.end());
    for (Sym& s : r.syms)
      if (!s.is_var()) s = Sym::letter(a.inv(s.as_letter()));
  }
  return Program(p.alphabet_ref(), std::move(rhs), p.start(), p.tether_bound());
}

}  // namespace cwp
