#include "cwp/abelian.hpp"

#include <algorithm>
#include <map>

#include "cwp/error.hpp"
#include "cwp/slp_ops.hpp"

namespace cwp {

FactorSpec build_factor_spec(Alphabet& alphabet, int rank,
                             const std::vector<ExtraGen>& extras,
                             int first_basis_index) {
  if (rank <= 0) throw Error("factor rank must be positive");
  FactorSpec f;
  f.rank = rank;
  f.extras = extras;
  // M = max over x in X u basis of sum_i |n_i(x)| + 1, with e = 1
  std::int64_t m = 1;
  for (const ExtraGen& x : extras) {
    if (static_cast<int>(x.vec.size()) != rank)
      throw Error("extra generator has wrong dimension: " + x.name);
    std::int64_t s = 0;
    bool zero = true;
    for (std::int64_t c : x.vec) {
      s += c < 0 ? -c : c;
      if (c != 0) zero = false;
    }
    if (zero) throw Error("extra generator is the zero vector: " + x.name);
    m = std::max(m, s);
  }
  f.M = m + 1;

  auto basis_vec = [&](int i, std::int64_t c) {
    std::vector<std::int64_t> v(rank, 0);
    v[i] = c;
    return v;
  };
  auto add_pair = [&](const std::string& tok_pos, const std::string& tok_neg,
                      std::vector<std::int64_t> v) {
    std::vector<std::int64_t> nv(v);
    for (auto& c : nv) c = -c;
    LetterId a = alphabet.add(Letter{tok_pos, -1, std::move(v), -1, -1});
    LetterId b = alphabet.add(Letter{tok_neg, -1, std::move(nv), -1, -1});
    // factor/y_rank patched by the caller that assembles the group
    f.y_ids.push_back(a);
    f.y_ids.push_back(b);
  };
  for (int i = 0; i < rank; ++i) {
    std::string z = "z" + std::to_string(first_basis_index + i);
    add_pair(z + "^" + std::to_string(f.M), z + "^-" + std::to_string(f.M),
             basis_vec(i, f.M));
  }
  for (int i = 0; i < rank; ++i) {
    std::string z = "z" + std::to_string(first_basis_index + i);
    add_pair(z, z + "^-1", basis_vec(i, 1));
  }
  for (const ExtraGen& x : extras)
    add_pair(x.name, x.name + "^-1", std::vector<std::int64_t>(x.vec));
  return f;
}

static int y_position(const FactorSpec& f, LetterId l) {
  for (int i = 0; i < f.y_size(); ++i)
    if (f.y_ids[i] == l) return i;
  return -1;
}

ExpVec word_vector(const Alphabet& a, const Word& w, const FactorSpec& f) {
  ExpVec v(f.rank, BigInt(0));
  for (LetterId l : w) {
    if (y_position(f, l) < 0) throw Error("foreign letter in factor word: " + a[l].token);
    const auto& lv = a[l].vec;
    for (int i = 0; i < f.rank; ++i) v[i] += lv[i];
  }
  return v;
}

ExpVec abelian_vector(const Program& p, const FactorSpec& f) {
  const Alphabet& a = p.alphabet();
  std::vector<ExpVec> vec(p.var_count());
  for (Var v : p.topo_order()) {
    ExpVec s(f.rank, BigInt(0));
    for (const Sym& sym : p.rhs(v).syms) {
      if (sym.is_var()) {
        const ExpVec& c = vec[sym.as_var()];
        for (int i = 0; i < f.rank; ++i) s[i] += c[i];
      } else {
        LetterId l = sym.as_letter();
        if (y_position(f, l) < 0)
          throw Error("foreign letter in factor program: " + a[l].token);
        for (int i = 0; i < f.rank; ++i) s[i] += a[l].vec[i];
      }
    }
    vec[v] = std::move(s);
  }
  return vec[p.start()];
}

Program power_slp(AlphabetRef alphabet, LetterId x, const BigInt& n) {
  if (n < 1) throw Error("power_slp: exponent must be >= 1");
  if (n == 1) {
    Rhs r;
    r.syms = {Sym::letter(x)};
    return Program(std::move(alphabet), {std::move(r)}, 0);
  }
  const std::size_t h = bit_length(n) - 1;  // 2^h <= n < 2^{h+1}
  std::vector<Rhs> rhs;
  // A_i (var i-1) has value x^{2^i}, 1 <= i <= h
  {
    Rhs r;
    r.syms = {Sym::letter(x), Sym::letter(x)};
    rhs.push_back(std::move(r));
  }
  for (std::size_t i = 2; i <= h; ++i) {
    Rhs r;
    Var prev = static_cast<Var>(i - 2);
    r.syms = {Sym::var(prev), Sym::var(prev)};
    rhs.push_back(std::move(r));
  }
  if ((n & (n - 1)) == 0)  // single bit: A_h itself is the program
    return Program(std::move(alphabet), std::move(rhs), static_cast<Var>(h - 1));
  Rhs top;
  for (std::size_t i = 0; i <= h; ++i)
    if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) {
      if (i == 0)
        top.syms.push_back(Sym::letter(x));
      else
        top.syms.push_back(Sym::var(static_cast<Var>(i - 1)));
    }
  rhs.push_back(std::move(top));
  return Program(std::move(alphabet), std::move(rhs), static_cast<Var>(rhs.size() - 1));
}

Program compact_vector_slp(AlphabetRef alphabet, const FactorSpec& f, const ExpVec& v) {
  std::vector<ConcatPart> parts;
  for (int i = 0; i < f.rank; ++i) {
    if (v[i] == 0) continue;
    LetterId l = f.unit_letter(i, v[i] > 0);
    parts.emplace_back(power_slp(alphabet, l, big_abs(v[i])));
  }
  if (parts.empty()) return Program::empty(std::move(alphabet));
  return concat(std::move(alphabet), parts);
}

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {  // b > 0
  BigInt q = a / b, r = a % b;
  if (r != 0 && a < 0) --q;
  return q;
}

struct CoordOption {
  BigInt a, b;  // M a + b = u
  BigInt cost() const { return big_abs(a) + big_abs(b); }
};

std::vector<CoordOption> coord_options(const BigInt& u, std::int64_t m) {
  BigInt fl = floor_div(u, m);
  std::vector<BigInt> cands{0, fl - 1, fl, fl + 1, fl + 2};
  std::vector<CoordOption> opts;
  BigInt best = -1;
  for (const BigInt& a : cands) {
    BigInt b = u - a * m;
    BigInt c = big_abs(a) + big_abs(b);
    if (best < 0 || c < best) best = c;
  }
  for (const BigInt& a : cands) {
    BigInt b = u - a * m;
    if (big_abs(a) + big_abs(b) == best &&
        std::none_of(opts.begin(), opts.end(), [&](const CoordOption& o) { return o.a == a; }))
      opts.push_back(CoordOption{a, b});
  }
  return opts;
}

}  // namespace

std::vector<BigInt> canonical_profile(const FactorSpec& f, const ExpVec& v) {
  if (static_cast<int>(v.size()) != f.rank) throw Error("vector dimension mismatch");
  const int nx = static_cast<int>(f.extras.size());
  const std::int64_t m = f.M;
  // enumerate extra-generator multiplicities, each in (-M, M)
  double combos = 1;
  for (int i = 0; i < nx; ++i) combos *= 2.0 * m - 1;
  if (combos > 2e6) throw Error("canonical_profile: extra-generator search too large");

  std::vector<std::int64_t> c(nx, -(m - 1));
  bool have_best = false;
  BigInt best_len = 0;
  std::vector<BigInt> best_profile;

  auto consider = [&](const std::vector<std::int64_t>& cs) {
    ExpVec u(v);
    BigInt xlen = 0;
    for (int k = 0; k < nx; ++k) {
      for (int i = 0; i < f.rank; ++i) u[i] -= BigInt(cs[k]) * f.extras[k].vec[i];
      xlen += cs[k] < 0 ? -cs[k] : cs[k];
    }
    std::vector<std::vector<CoordOption>> opts(f.rank);
    BigInt total = xlen;
    for (int i = 0; i < f.rank; ++i) {
      opts[i] = coord_options(u[i], m);
      total += opts[i][0].cost();
    }
    if (have_best && total > best_len) return;
    // enumerate option products, build profiles, keep the lex-max profile
    std::vector<std::size_t> idx(f.rank, 0);
    while (true) {
      std::vector<BigInt> prof(f.y_size(), BigInt(0));
      for (int i = 0; i < f.rank; ++i) {
        const CoordOption& o = opts[i][idx[i]];
        if (o.a > 0) prof[2 * i] = o.a;
        if (o.a < 0) prof[2 * i + 1] = -o.a;
        if (o.b > 0) prof[2 * f.rank + 2 * i] = o.b;
        if (o.b < 0) prof[2 * f.rank + 2 * i + 1] = -o.b;
      }
      for (int k = 0; k < nx; ++k) {
        if (cs[k] > 0) prof[4 * f.rank + 2 * k] = cs[k];
        if (cs[k] < 0) prof[4 * f.rank + 2 * k + 1] = -cs[k];
      }
      if (!have_best || total < best_len ||
          (total == best_len &&
           std::lexicographical_compare(best_profile.begin(), best_profile.end(),
                                        prof.begin(), prof.end()))) {
        have_best = true;
        best_len = total;
        best_profile = std::move(prof);
      }
      int j = f.rank - 1;
      while (j >= 0 && idx[j] + 1 == opts[j].size()) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  };

  if (nx == 0) {
    consider(c);
  } else {
    while (true) {
      consider(c);
      int j = nx - 1;
      while (j >= 0 && c[j] == m - 1) c[j--] = -(m - 1);
      if (j < 0) break;
      ++c[j];
    }
  }
  return best_profile;
}

BigInt y_geodesic_length(const FactorSpec& f, const ExpVec& v) {
  std::vector<BigInt> prof = canonical_profile(f, v);
  BigInt s = 0;
  for (const BigInt& c : prof) s += c;
  return s;
}

Word slex_word(const FactorSpec& f, const ExpVec& v, std::size_t cap) {
  std::vector<BigInt> prof = canonical_profile(f, v);
  BigInt total = 0;
  for (const BigInt& c : prof) total += c;
  if (total > cap) throw TooLongError("slex_word: word of length " + total.str());
  Word w;
  w.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < f.y_size(); ++i)
    for (BigInt k = 0; k < prof[i]; ++k) w.push_back(f.y_ids[i]);
  return w;
}

Program profile_slp(AlphabetRef alphabet, const FactorSpec& f,
                    const std::vector<BigInt>& profile) {
  std::vector<ConcatPart> parts;
  for (int i = 0; i < f.y_size(); ++i)
    if (profile[i] > 0) parts.emplace_back(power_slp(alphabet, f.y_ids[i], profile[i]));
  if (parts.empty()) return Program::empty(std::move(alphabet));
  return concat(std::move(alphabet), parts);
}

Program slex_vector_slp(AlphabetRef alphabet, const FactorSpec& f, const ExpVec& v) {
  return profile_slp(std::move(alphabet), f, canonical_profile(f, v));
}

Program slex_slp(AlphabetRef alphabet, const FactorSpec& f, const Program& p) {
  return slex_vector_slp(std::move(alphabet), f, abelian_vector(p, f));
}

}  // namespace cwp
