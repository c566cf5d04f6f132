#include "cwp/program.hpp"

#include <algorithm>

#include "cwp/error.hpp"

namespace cwp {

namespace checks {
std::atomic<std::uint64_t>& counter() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}
}  // namespace checks

void Program::validate() const {
  if (!alphabet_) throw Error("program without alphabet");
  const int n = var_count();
  if (start_ < 0 || start_ >= n) throw Error("start variable out of range");
  for (Var v = 0; v < n; ++v) {
    const Rhs& r = rhs_[v];
    switch (r.kind) {
      case RhsKind::Symbols:
        for (const Sym& s : r.syms) {
          if (s.is_var()) {
            if (s.as_var() < 0 || s.as_var() >= n) throw Error("variable ref out of range");
          } else if (s.as_letter() < 0 || s.as_letter() >= alphabet_->size()) {
            throw Error("letter out of range");
          }
        }
        break;
      case RhsKind::CutRaw:
      case RhsKind::CutHat:
        if (r.base < 0 || r.base >= n) throw Error("cut base out of range");
        if (r.lo < 0 || r.hi < r.lo) throw IndexError("bad cut bounds");
        break;
      case RhsKind::Tether:
        if (r.base < 0 || r.base >= n) throw Error("tether base out of range");
        if (tether_bound_ > 0 &&
            (r.alpha.size() > static_cast<std::size_t>(tether_bound_) ||
             r.beta.size() > static_cast<std::size_t>(tether_bound_)))
          throw Error("tether word exceeds bound J");
        for (LetterId l : r.alpha)
          if (l < 0 || l >= alphabet_->size()) throw Error("tether letter out of range");
        for (LetterId l : r.beta)
          if (l < 0 || l >= alphabet_->size()) throw Error("tether letter out of range");
        break;
    }
  }
  heights();  // throws on cycles
}

bool Program::is_slp() const {
  for (const Rhs& r : rhs_)
    if (r.kind != RhsKind::Symbols) return false;
  return true;
}

bool Program::is_cslp() const {
  for (const Rhs& r : rhs_)
    if (r.kind == RhsKind::Tether) return false;
  return true;
}

bool Program::has_cuts() const {
  for (const Rhs& r : rhs_)
    if (r.kind == RhsKind::CutRaw || r.kind == RhsKind::CutHat) return true;
  return false;
}

bool Program::has_tethers() const {
  for (const Rhs& r : rhs_)
    if (r.kind == RhsKind::Tether) return true;
  return false;
}

std::int64_t Program::size() const {
  std::int64_t s = 0;
  for (const Rhs& r : rhs_) {
    switch (r.kind) {
      case RhsKind::Symbols:
        s += static_cast<std::int64_t>(r.syms.size());
        break;
      case RhsKind::CutRaw:
      case RhsKind::CutHat:
        s += 1;
        break;
      case RhsKind::Tether:
        s += 1 + static_cast<std::int64_t>(r.alpha.size() + r.beta.size());
        break;
    }
  }
  return s;
}

std::vector<int> Program::heights() const {
  const int n = var_count();
  std::vector<int> h(n, -1);
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<Var> stack;
  auto children = [&](Var v, std::vector<Var>& out) {
    const Rhs& r = rhs_[v];
    if (r.kind == RhsKind::Symbols) {
      for (const Sym& s : r.syms)
        if (s.is_var()) out.push_back(s.as_var());
    } else {
      out.push_back(r.base);
    }
  };
  for (Var root = 0; root < n; ++root) {
    if (state[root] == 2) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      Var v = stack.back();
      if (state[v] == 2) {
        stack.pop_back();
        continue;
      }
      if (state[v] == 0) {
        state[v] = 1;
        std::vector<Var> kids;
        children(v, kids);
        bool ready = true;
        for (Var k : kids) {
          if (state[k] == 1) throw Error("cyclic program");
          if (state[k] == 0) {
            ready = false;
            stack.push_back(k);
          }
        }
        if (!ready) continue;
      }
      // all children done
      int hh = 0;
      std::vector<Var> kids;
      children(v, kids);
      for (Var k : kids) hh = std::max(hh, h[k]);
      const Rhs& r = rhs_[v];
      // smallest r with rho^r(A) a terminal word; a terminal rhs has height 1
      bool terminal_only = r.kind == RhsKind::Symbols && kids.empty();
      h[v] = terminal_only ? 1 : hh + 1;
      state[v] = 2;
      stack.pop_back();
    }
  }
  return h;
}

std::vector<Var> Program::topo_order() const {
  std::vector<int> h = heights();
  std::vector<Var> order(var_count());
  for (Var v = 0; v < var_count(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Var a, Var b) { return h[a] < h[b]; });
  return order;
}

}  // namespace cwp
