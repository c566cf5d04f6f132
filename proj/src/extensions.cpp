#include "cwp/extensions.hpp"

#include <algorithm>

#include "cwp/error.hpp"
#include "cwp/group.hpp"
#include "cwp/pipeline.hpp"
#include "cwp/slp_ops.hpp"

namespace cwp {

namespace {

// Splices `sub` (an SLP) into `rhs`, returning the var id of its start.
Var splice(std::vector<Rhs>& rhs, const Program& sub) {
  Var off = static_cast<Var>(rhs.size());
  for (Rhs r : sub.all_rhs()) {
    if (r.kind == RhsKind::Symbols) {
      for (Sym& s : r.syms)
        if (s.is_var()) s = Sym::var(s.as_var() + off);
    } else {
      r.base += off;
    }
    rhs.push_back(std::move(r));
  }
  return sub.start() + off;
}

}  // namespace

Program cslp_to_slp(const Program& p) {
  if (!p.is_cslp()) throw Error("cslp_to_slp: tether rhs present");
  if (p.is_slp()) return trim(p);
  std::vector<Rhs> rhs = p.all_rhs();
  AlphabetRef alphabet = p.alphabet_ref();

  // eliminate cut variables in order of increasing height: each base subtree
  // is then cut-free and the cut resolves to a substring extraction pushed
  // through it
  while (true) {
    Program cur(alphabet, rhs, p.start());
    std::vector<int> h = cur.heights();
    Var pick = -1;
    for (Var v = 0; v < cur.var_count(); ++v) {
      const Rhs& r = rhs[v];
      if (r.kind != RhsKind::CutRaw && r.kind != RhsKind::CutHat) continue;
      if (r.kind == RhsKind::CutHat)
        throw Error("cslp_to_slp: compressed-index cut needs a group context");
      if (pick < 0 || h[v] < h[pick]) pick = v;
    }
    if (pick < 0) break;
    const Rhs cut = rhs[pick];
    Program base = restriction(Program(alphabet, rhs, cut.base), cut.base);
    if (!base.is_slp()) throw InternalError("cslp_to_slp: base still has cuts");
    BigInt blen = value_length(base);
    if (cut.lo > blen || cut.hi > blen) throw IndexError("cut index out of range");
    Program piece = extract_substring(base, cut.lo, cut.hi);
    Var root = splice(rhs, piece);
    rhs[pick] = Rhs{};
    rhs[pick].syms = {Sym::var(root)};
  }
  return trim(Program(alphabet, std::move(rhs), p.start()));
}

std::vector<Word> tcslp_var_values(const Program& p, const GroupContext& ctx,
                                   std::size_t max_len) {
  if (p.alphabet_ref().get() != ctx.alphabet.get())
    throw Error("tcslp_value: program not over the group alphabet");
  std::vector<Word> val(p.var_count());
  auto too_long = [&](std::size_t n) {
    if (n > max_len) throw TooLongError("tcslp_value: intermediate value too long");
  };
  for (Var v : p.topo_order()) {
    const Rhs& r = p.rhs(v);
    Word w;
    switch (r.kind) {
      case RhsKind::Symbols:
        for (const Sym& s : r.syms) {
          if (s.is_var()) {
            const Word& u = val[s.as_var()];
            w.insert(w.end(), u.begin(), u.end());
          } else {
            w.push_back(s.as_letter());
          }
          too_long(w.size());
        }
        break;
      case RhsKind::CutRaw: {
        const Word& u = val[r.base];
        if (r.hi > u.size() || r.lo > r.hi) throw IndexError("raw cut out of range");
        w.assign(u.begin() + static_cast<std::size_t>(r.lo),
                 u.begin() + static_cast<std::size_t>(r.hi));
        break;
      }
      case RhsKind::CutHat: {
        const Word& u = val[r.base];
        auto comps = components(ctx, u);
        BigInt hatn = comps.size();
        if (r.hi > hatn || r.lo > r.hi) throw IndexError("compressed cut out of range");
        std::size_t i = r.lo == hatn ? u.size()
                                     : std::get<0>(comps[static_cast<std::size_t>(r.lo)]);
        std::size_t j = r.hi == hatn ? u.size()
                                     : std::get<0>(comps[static_cast<std::size_t>(r.hi)]);
        w.assign(u.begin() + i, u.begin() + j);
        break;
      }
      case RhsKind::Tether: {
        Word t = r.alpha;
        const Word& u = val[r.base];
        t.insert(t.end(), u.begin(), u.end());
        Word bi = inverse_word(*ctx.alphabet, r.beta);
        t.insert(t.end(), bi.begin(), bi.end());
        too_long(t.size());
        std::size_t save = ctx.nf_word_limit;
        if (t.size() > save) {
          GroupContext wide = ctx;
          wide.nf_word_limit = t.size() + 1;
          w = nf_word(wide, t);
        } else {
          w = nf_word(ctx, t);
        }
        break;
      }
    }
    too_long(w.size());
    val[v] = std::move(w);
  }
  return val;
}

Word tcslp_value(const Program& p, const GroupContext& ctx, std::size_t max_len) {
  return tcslp_var_values(p, ctx, max_len)[p.start()];
}

Program compressed_cut_normalize(const Program& p, const GroupContext& ctx) {
  if (!p.has_cuts()) return p;
  std::vector<Rhs> rhs = p.all_rhs();
  AlphabetRef alphabet = p.alphabet_ref();
  for (Var v = 0; v < static_cast<Var>(rhs.size()); ++v) {
    if (rhs[v].kind != RhsKind::CutRaw) continue;
    // materialise the base value as an SLP to locate component boundaries
    Program base = restriction(Program(alphabet, rhs, rhs[v].base, p.tether_bound()),
                               rhs[v].base);
    Program base_slp = base.is_slp() ? base : convert_tcslp(base, ctx);
    auto [k, l] = raw_to_compressed(base_slp, ctx, rhs[v].lo, rhs[v].hi);
    rhs[v].kind = RhsKind::CutHat;
    rhs[v].lo = k;
    rhs[v].hi = l;
  }
  return Program(alphabet, std::move(rhs), p.start(), p.tether_bound());
}

}  // namespace cwp
