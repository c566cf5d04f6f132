#include "cwp/group.hpp"

#include <algorithm>

#include "cwp/error.hpp"

namespace cwp {

void ConstantsBundle::validate() const {
  require(ff_slope >= 1 && ff_intercept >= 0, "ff must be increasing with ff(n) >= n");
  require(delta >= 0 && K >= 1 && L >= 1, "delta, K, L must be set");
  require(e_prime >= 1 && e1 >= 1 && e2 >= 1, "e', e1, e2 must be set");
}

GroupContext make_group(
    const std::vector<std::pair<int, std::vector<ExtraGen>>>& factor_args) {
  if (factor_args.empty()) throw Error("group needs at least one factor");
  auto alphabet = std::make_shared<Alphabet>();
  GroupContext ctx;
  int basis_index = 1;
  for (const auto& [rank, extras] : factor_args) {
    ctx.factors.push_back(build_factor_spec(*alphabet, rank, extras, basis_index));
    basis_index += rank;
  }
  // patch factor index, inverses and Y-ranks
  for (int f = 0; f < static_cast<int>(ctx.factors.size()); ++f) {
    const FactorSpec& fs = ctx.factors[f];
    for (int pos = 0; pos < fs.y_size(); ++pos) {
      LetterId id = fs.y_ids[pos];
      Letter& l = alphabet->mutable_ref(id);
      l.factor = f;
      l.y_rank = pos;
      l.inverse = fs.y_ids[pos % 2 == 0 ? pos + 1 : pos - 1];
    }
  }
  ctx.alphabet = alphabet;
  return ctx;
}

bool syllable_is_zero(const Syllable& s) {
  return std::all_of(s.vec.begin(), s.vec.end(), [](const BigInt& c) { return c == 0; });
}

std::vector<Syllable> derived_word(const GroupContext& ctx, const Word& w) {
  std::vector<Syllable> out;
  const Alphabet& a = *ctx.alphabet;
  for (LetterId l : w) {
    int f = a[l].factor;
    if (f < 0) throw Error("letter without factor: " + a[l].token);
    if (out.empty() || out.back().factor != f) {
      Syllable s{f, ExpVec(ctx.factors[f].rank, BigInt(0))};
      out.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < a[l].vec.size(); ++i) out.back().vec[i] += a[l].vec[i];
  }
  return out;
}

std::vector<std::tuple<std::size_t, std::size_t, int>> components(const GroupContext& ctx,
                                                                  const Word& w) {
  std::vector<std::tuple<std::size_t, std::size_t, int>> out;
  const Alphabet& a = *ctx.alphabet;
  std::size_t i = 0;
  while (i < w.size()) {
    int f = a[w[i]].factor;
    std::size_t j = i + 1;
    while (j < w.size() && a[w[j]].factor == f) ++j;
    out.emplace_back(i, j, f);
    i = j;
  }
  return out;
}

std::vector<Syllable> reduce_syllables(std::vector<Syllable> sylls) {
  std::vector<Syllable> st;
  for (Syllable& s : sylls) {
    if (syllable_is_zero(s)) continue;
    if (!st.empty() && st.back().factor == s.factor) {
      for (std::size_t i = 0; i < s.vec.size(); ++i) st.back().vec[i] += s.vec[i];
      if (syllable_is_zero(st.back())) st.pop_back();
    } else {
      st.push_back(std::move(s));
    }
  }
  return st;
}

Word syllables_to_word(const GroupContext& ctx, const std::vector<Syllable>& sylls,
                       std::size_t cap) {
  Word out;
  for (const Syllable& s : sylls) {
    Word part = slex_word(ctx.factors[s.factor], s.vec, cap);
    if (out.size() + part.size() > cap)
      throw TooLongError("syllables_to_word: result exceeds cap");
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Word nf_word(const GroupContext& ctx, const Word& w) {
  if (w.size() > ctx.nf_word_limit)
    throw TooLongError("nf_word: word longer than context limit");
  std::vector<Syllable> reduced = reduce_syllables(derived_word(ctx, w));
  return syllables_to_word(ctx, reduced, ctx.nf_word_limit * 2 + 16);
}

bool is_nf_reduced_word(const GroupContext& ctx, const Word& w) {
  const Alphabet& a = *ctx.alphabet;
  for (auto [i, j, f] : components(ctx, w)) {
    ExpVec v(ctx.factors[f].rank, BigInt(0));
    for (std::size_t k = i; k < j; ++k)
      for (std::size_t d = 0; d < a[w[k]].vec.size(); ++d) v[d] += a[w[k]].vec[d];
    Word comp(w.begin() + i, w.begin() + j);
    Word canon = slex_word(ctx.factors[f], v, comp.size() + 1);
    if (canon != comp) return false;
  }
  return true;
}

BigInt sigma_length(const GroupContext& ctx, const std::vector<Syllable>& reduced) {
  BigInt s = 0;
  for (const Syllable& syl : reduced)
    s += y_geodesic_length(ctx.factors[syl.factor], syl.vec);
  return s;
}

}  // namespace cwp
