#ifndef CWP_PROGRAM_HPP
#define CWP_PROGRAM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwp/alphabet.hpp"
#include "cwp/bigint.hpp"
#include "cwp/error.hpp"

namespace cwp {

using Var = std::int32_t;

// A right-hand-side symbol: a variable reference or a letter.
struct Sym {
  std::int32_t code;
  static Sym var(Var v) { return Sym{v}; }
  static Sym letter(LetterId l) { return Sym{-1 - l}; }
  bool is_var() const { return code >= 0; }
  Var as_var() const { return code; }
  LetterId as_letter() const { return -1 - code; }
  bool operator==(const Sym& o) const { return code == o.code; }
};

enum class RhsKind : std::uint8_t {
  Symbols,  // string over variables and letters (SLP form)
  CutRaw,   // base[lo:hi) with raw string indices
  CutHat,   // base[[lo:hi)) with indices into the derived word
  Tether,   // base<alpha, beta>, value nf(alpha val(base) beta^-1)
};

struct Rhs {
  RhsKind kind = RhsKind::Symbols;
  std::vector<Sym> syms;  // Symbols
  Var base = -1;          // CutRaw / CutHat / Tether
  BigInt lo, hi;          // cut bounds
  Word alpha, beta;       // tether words
};

// One DAG of productions; specialises to SLP, CSLP, TSLP, TCSLP depending on
// which rhs kinds occur. Immutable once built; operations return new programs.
class Program {
 public:
  Program() = default;
  Program(AlphabetRef alphabet, std::vector<Rhs> rhs, Var start, int tether_bound = 0)
      : alphabet_(std::move(alphabet)), rhs_(std::move(rhs)), start_(start),
        tether_bound_(tether_bound) {
    validate();
  }

  // The empty-value program over an alphabet.
  static Program empty(AlphabetRef alphabet) {
    Program p;
    p.alphabet_ = std::move(alphabet);
    p.rhs_.push_back(Rhs{});
    p.start_ = 0;
    p.validate();
    return p;
  }

  static Program from_word(AlphabetRef alphabet, const Word& w) {
    Rhs r;
    for (LetterId l : w) r.syms.push_back(Sym::letter(l));
    Program p;
    p.alphabet_ = std::move(alphabet);
    p.rhs_.push_back(std::move(r));
    p.start_ = 0;
    p.validate();
    return p;
  }

  const Alphabet& alphabet() const { return *alphabet_; }
  const AlphabetRef& alphabet_ref() const { return alphabet_; }
  int var_count() const { return static_cast<int>(rhs_.size()); }
  const Rhs& rhs(Var v) const { return rhs_.at(v); }
  const std::vector<Rhs>& all_rhs() const { return rhs_; }
  Var start() const { return start_; }
  int tether_bound() const { return tether_bound_; }

  bool is_slp() const;    // Symbols rhs only
  bool is_cslp() const;   // no tethers
  bool has_cuts() const;
  bool has_tethers() const;

  // Total number of occurrences of symbols from Sigma and V over all
  // right-hand sides (the paper's size; cut/tether rhs count their base
  // variable plus tether letters).
  std::int64_t size() const;

  // Heights of all variables; verifies acyclicity as a side effect.
  std::vector<int> heights() const;
  int height(Var v) const { return heights().at(v); }

  // Variables in increasing-height order (a topological order).
  std::vector<Var> topo_order() const;

 private:
  void validate() const;

  AlphabetRef alphabet_;
  std::vector<Rhs> rhs_;
  Var start_ = -1;
  int tether_bound_ = 0;
};

}  // namespace cwp

#endif
