#include <chrono>

#include "cwp/equality.hpp"
#include "cwp/error.hpp"
#include "cwp/pipeline.hpp"
#include "cwp/slp_ops.hpp"
#include "engine.hpp"

namespace cwp {

using eng::Corr;
using wsd::Ws;

namespace {

// Builds, per variable of the input SLP, a TCSLP variable with value
// nf(val(A)) plus a cached converted SLP node; processes variables in order
// of increasing height and resolves each rho(A) = BC through the hyperbolic
// triangle with sides v1, v2, v3.
struct NfBuilder {
  Ws ws;
  const GroupContext& ctx;
  const ConstantsBundle& cb;
  Program g;  // CNF input
  std::vector<BigInt> glen;
  std::vector<Var> nf_node;  // cached conversion of T_A (arena node, -1 empty)
  // TCSLP assembly
  std::vector<Rhs> trhs;
  std::vector<Var> tcopy;  // G-var -> T-var

  NfBuilder(const Program& g0, const GroupContext& c)
      : ws(c), ctx(c), cb(c.consts()), g(to_cnf(g0)) {
    glen = var_lengths(g);
    nf_node.assign(g.var_count(), -1);
    tcopy.assign(g.var_count(), -1);
  }

  Var tvar(Rhs r) {
    trhs.push_back(std::move(r));
    return static_cast<Var>(trhs.size()) - 1;
  }
  Var t_cut(Var base, const BigInt& k, const BigInt& l) {
    Rhs r;
    r.kind = RhsKind::CutHat;
    r.base = base;
    r.lo = k;
    r.hi = l;
    return tvar(std::move(r));
  }
  Var t_tether(Var base, const Word& alpha, const Word& beta) {
    Rhs r;
    r.kind = RhsKind::Tether;
    r.base = base;
    r.alpha = alpha;
    r.beta = beta;
    return tvar(std::move(r));
  }
  // imports an arena node as a block of Symbols productions (-1 for empty)
  Var t_import(Var node) {
    if (node < 0) return -1;
    std::vector<Var> frag = ws.export_fragment({node}, trhs);
    return frag[0];
  }
  static void push_var(Rhs& r, Var v) {
    if (v >= 0) r.syms.push_back(Sym::var(v));
  }

  void build() {
    for (Var a : g.topo_order()) {
      const Rhs& r = g.rhs(a);
      if (glen[a] == 0) {
        tcopy[a] = tvar(Rhs{});
        nf_node[a] = -1;
        continue;
      }
      if (!r.syms.empty() && !r.syms[0].is_var()) {
        LetterId l = r.syms[0].as_letter();
        Rhs rr;
        rr.syms = {Sym::letter(l)};
        tcopy[a] = tvar(std::move(rr));
        nf_node[a] = ws.leaf(l);
        continue;
      }
      Var b = r.syms[0].as_var(), c = r.syms[1].as_var();
      if (glen[b] == 0 || glen[c] == 0) {
        Var o = glen[b] == 0 ? c : b;
        Rhs rr;
        rr.syms = {Sym::var(tcopy[o])};
        tcopy[a] = tvar(std::move(rr));
        nf_node[a] = nf_node[o];
        continue;
      }
      process_pair(a, b, c);
    }
  }

  void process_pair(Var a, Var b, Var c) {
    Var v1 = nf_node[b], v2 = nf_node[c];
    if (v1 < 0 || v2 < 0) {
      Var o = v1 < 0 ? c : b;
      Rhs rr;
      rr.syms = {Sym::var(tcopy[o])};
      tcopy[a] = tvar(std::move(rr));
      nf_node[a] = nf_node[o];
      return;
    }
    Corr corr(ws, v1, v2);
    const BigInt &n1 = corr.n1, &n2 = corr.n2;

    // Case 1, a-side: a vertex a' on v2^ corresponds to the start vertex a
    if (auto hit = corr.probe_v1(n1)) {
      const BigInt& q2 = hit->other;
      BigInt l2 = std::min(n2, BigInt(q2 + cb.K));
      auto attempt = [&](const Word& theta) -> std::optional<std::pair<Var, Var>> {
        Var mid = ws.nf_conjugate(hit->eta, ws.hat_range(v2, q2, l2), theta);
        Var tail = eng::nf_prepend_counted(ws, theta, ws.hat_suffix(v2, l2), nullptr,
                                           nullptr);
        Var whole = ws.cat(mid, tail);
        if (!ws.is_nf_reduced(whole)) return std::nullopt;
        return std::make_pair(mid, tail);
      };
      std::optional<std::pair<Var, Var>> got;
      auto theta = eng::shortlex_search(ctx, cb.L, [&](const Word& th) {
        got = attempt(th);
        return got.has_value();
      });
      if (!theta)
        throw NoWitnessError("build_nf_tcslp case 1a", cb.L,
                             "variable " + std::to_string(a));
      nf_node[a] = ws.cat(got->first, got->second);
      Var s2 = t_import(got->first);
      Rhs rr;
      push_var(rr, s2);
      if (l2 < n2) {
        Var cut = t_cut(tcopy[c], l2, n2);
        rr.syms.push_back(Sym::var(t_tether(cut, *theta, {})));
      } else if (!theta->empty()) {
        // theta absorbed into S2 only if l2 == n2 and tail empty
        Var cut = t_cut(tcopy[c], n2, n2);
        rr.syms.push_back(Sym::var(t_tether(cut, *theta, {})));
      }
      tcopy[a] = tvar(std::move(rr));
      return;
    }

    // Case 1, c-side: a vertex c' on v1^ corresponds to the end vertex c
    if (auto hit = corr.probe_v2(n2)) {
      const BigInt& k1 = hit->other;
      BigInt k2 = k1 >= cb.K ? k1 - cb.K : BigInt(0);
      Word etab = hit->eta;  // labels c' -> c? probe gives v1-side -> v2-side
      auto attempt = [&](const Word& zeta) -> std::optional<std::pair<Var, Var>> {
        Var head = eng::nf_append_counted(
            ws, ws.hat_prefix(v1, k2), inverse_word(*ctx.alphabet, zeta), nullptr,
            nullptr);
        Var mid = ws.nf_conjugate(zeta, ws.hat_range(v1, k2, k1),
                                  inverse_word(*ctx.alphabet, etab));
        Var whole = ws.cat(head, mid);
        if (!ws.is_nf_reduced(whole)) return std::nullopt;
        return std::make_pair(head, mid);
      };
      std::optional<std::pair<Var, Var>> got;
      auto zeta = eng::shortlex_search(ctx, cb.L, [&](const Word& z) {
        got = attempt(z);
        return got.has_value();
      });
      if (!zeta)
        throw NoWitnessError("build_nf_tcslp case 1b", cb.L,
                             "variable " + std::to_string(a));
      nf_node[a] = ws.cat(got->first, got->second);
      Rhs rr;
      if (k2 > 0) {
        Var cut = t_cut(tcopy[b], 0, k2);
        rr.syms.push_back(Sym::var(t_tether(cut, {}, *zeta)));
      } else if (!zeta->empty()) {
        Var cut = t_cut(tcopy[b], 0, 0);
        rr.syms.push_back(Sym::var(t_tether(cut, {}, *zeta)));
      }
      push_var(rr, t_import(got->second));
      tcopy[a] = tvar(std::move(rr));
      return;
    }

    // Case 2: binary search for the last corresponding vertex along v1^
    // (existence probes; the selected witness is validated below)
    BigInt lo = 0, hi = n1;  // probe(lo) hits, probe(hi) misses
    while (hi - lo > 1) {
      BigInt mid = (lo + hi) / 2;
      if (corr.probe_v1(mid, false))
        lo = mid;
      else
        hi = mid;
    }
    BigInt lstar = lo;
    auto first_hit = corr.probe_v1(lstar);
    if (!first_hit)
      throw NoWitnessError("build_nf_tcslp case 2 probe", cb.L,
                           "selected vertex failed the claim validation");
    eng::ProbeHit hit = *first_hit;
    BigInt l2p = hit.other;

    // margin check on the v2 side
    if (l2p + 1 <= n2 && corr.probe_v2(l2p + 1, false)) {
      BigInt qlo = l2p + 1, qhi = n2;  // probe_v2(qlo) hits, (qhi) misses
      while (qhi - qlo > 1) {
        BigInt mid = (qlo + qhi) / 2;
        if (corr.probe_v2(mid, false))
          qlo = mid;
        else
          qhi = mid;
      }
      auto h2 = corr.probe_v2(qlo);
      if (!h2)
        throw NoWitnessError("build_nf_tcslp case 2 probe", cb.L,
                             "v2-side vertex failed the claim validation");
      l2p = qlo;
      hit = *h2;
      lstar = n1 - h2->other;  // other = prefix length q1 on v1
    }

    BigInt j1 = n1 - lstar;  // prefix length of b1 on v1
    BigInt k1 = j1 >= 2 * (cb.K + cb.L) ? j1 - 2 * (cb.K + cb.L) : BigInt(0);
    BigInt l2 = std::min(n2, BigInt(l2p + 2 * cb.K));

    std::optional<std::tuple<Var, Var, Var>> got;
    std::optional<std::pair<Word, Word>> pairw;
    eng::shortlex_search(ctx, cb.L, [&](const Word& zeta) {
      Var s1 = eng::nf_append_counted(ws, ws.hat_prefix(v1, k1),
                                      inverse_word(*ctx.alphabet, zeta), nullptr,
                                      nullptr);
      return eng::shortlex_search(ctx, cb.L, [&](const Word& theta) {
        Var s2 = ws.short_nf({ws.hat_range(v1, k1, j1), ws.hat_range(v2, l2p, l2)},
                             {zeta, hit.eta, inverse_word(*ctx.alphabet, theta)},
                             {~0, 0, ~1, 1, ~2}, 1u << 20);
        Var s3 = eng::nf_prepend_counted(ws, theta, ws.hat_suffix(v2, l2), nullptr,
                                         nullptr);
        Var whole = ws.cat3(s1, s2, s3);
        if (!ws.is_nf_reduced(whole)) return false;
        got = std::make_tuple(s1, s2, s3);
        pairw = std::make_pair(zeta, theta);
        return true;
      }).has_value();
    });
    if (!got)
      throw NoWitnessError(
          "build_nf_tcslp case 2", cb.L,
          "variable " + std::to_string(a) + " triangle n1=" + n1.str() +
              " n2=" + n2.str() + " l*=" + lstar.str());
    auto [s1, s2, s3] = *got;
    auto [zeta, theta] = *pairw;
    nf_node[a] = ws.cat3(s1, s2, s3);

    Rhs rr;
    if (k1 > 0 || !zeta.empty()) {
      Var cut = t_cut(tcopy[b], 0, k1);
      rr.syms.push_back(Sym::var(t_tether(cut, {}, zeta)));
    }
    push_var(rr, t_import(s2));
    if (l2 < n2 || !theta.empty()) {
      Var cut = t_cut(tcopy[c], l2, n2);
      rr.syms.push_back(Sym::var(t_tether(cut, theta, {})));
    }
    tcopy[a] = tvar(std::move(rr));
  }

  Program tcslp() {
    return Program(ctx.alphabet, trhs, tcopy[g.start()], cb.L);
  }
};

}  // namespace

Program build_nf_tcslp(const Program& g, const GroupContext& ctx) {
  if (value_length(g) == 0) return Program::empty(ctx.alphabet);
  check_value_bound(g);
  NfBuilder nb(g, ctx);
  nb.build();
  return nb.tcslp();
}

Program build_nf_tcslp_geodesic(const Program& g, const GroupContext& ctx) {
  // derived word already geodesic: every component collapses to its shortlex
  // form after rooting; realises the eta = epsilon specialisation
  Ws ws(ctx);
  Var v = ws.import(to_cnf(g));
  if (v < 0) return Program::empty(ctx.alphabet);
  // precondition: alternating nonzero syllables
  {
    std::vector<Syllable> head = ws.read_syllables(v, 1u << 20);
    std::vector<Syllable> red = reduce_syllables(head);
    if (red.size() != head.size())
      throw Error("build_nf_tcslp_geodesic: derived word is not geodesic");
  }
  Var out = ws.slex_relabel(v);
  Program q = ws.export_prog(out);
  check_value_bound(q);
  return q;
}

Program nf_slp(const Program& g, const GroupContext& ctx, CwpReport* report) {
  auto t0 = std::chrono::steady_clock::now();
  if (value_length(g) == 0) {
    if (report) report->trivial = true;
    return Program::empty(ctx.alphabet);
  }
  NfBuilder nb(g, ctx);
  nb.build();
  Var root = nb.nf_node[nb.g.start()];
  Program out = nb.ws.export_prog(root);
  check_value_bound(out);
  if (report) {
    auto t1 = std::chrono::steady_clock::now();
    report->ms_build = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report->nf_length = nb.ws.length(root).str();
    report->nf_hat_length = nb.ws.hat_len(root).str();
    report->nf_slp_size = out.size();
    report->trivial = root < 0;
  }
  return out;
}

bool solve_cwp(const Program& g, const GroupContext& ctx, CwpReport* report) {
  auto t0 = std::chrono::steady_clock::now();
  CwpReport local;
  CwpReport& rep = report ? *report : local;
  rep.input_size = g.size();
  bool answer;
  if (value_length(g) == 0) {
    rep.trivial = true;
    rep.nf_length = "0";
    answer = true;
  } else {
    // abelianisation pre-filter: may only answer "nontrivial"
    bool maybe_trivial = true;
    {
      const Alphabet& a = g.alphabet();
      std::vector<std::vector<BigInt>> sums(ctx.factor_count());
      for (int f = 0; f < ctx.factor_count(); ++f)
        sums[f].assign(ctx.factors[f].rank, BigInt(0));
      // per-letter occurrence counts weighted by derivation multiplicity
      std::vector<BigInt> occ(g.var_count(), BigInt(0));
      occ[g.start()] = 1;
      std::vector<Var> order = g.topo_order();
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (const Sym& s : g.rhs(*it).syms)
          if (s.is_var()) occ[s.as_var()] += occ[*it];
      for (Var v = 0; v < g.var_count(); ++v)
        for (const Sym& s : g.rhs(v).syms)
          if (!s.is_var()) {
            const Letter& l = a[s.as_letter()];
            for (std::size_t i = 0; i < l.vec.size(); ++i)
              sums[l.factor][i] += occ[v] * l.vec[i];
          }
      for (const auto& sv : sums)
        for (const BigInt& x : sv)
          if (x != 0) maybe_trivial = false;
    }
    if (!maybe_trivial) {
      rep.abelian_filter_hit = true;
      rep.trivial = false;
      answer = false;
    } else {
      NfBuilder nb(g, ctx);
      nb.build();
      Var root = nb.nf_node[nb.g.start()];
      rep.nf_length = nb.ws.length(root).str();
      rep.nf_hat_length = nb.ws.hat_len(root).str();
      rep.trivial = root < 0;
      answer = root < 0;
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.ms_total = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return answer;
}

}  // namespace cwp
