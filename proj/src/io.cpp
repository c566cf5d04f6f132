#include "cwp/io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <map>
#include <sstream>

#include "cwp/error.hpp"

namespace cwp {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> tokenize(const std::string& line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\'') {
      std::size_t j = line.find('\'', i + 1);
      if (j == std::string::npos) throw ParseError("unterminated letter quote", lineno);
      out.push_back(Token{line.substr(i + 1, j - i - 1), true});
      i = j + 1;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '\'' && line[j] != '#')
      ++j;
    out.push_back(Token{line.substr(i, j - i), false});
    i = j;
  }
  return out;
}

std::vector<std::pair<int, std::vector<Token>>> split_lines(const std::string& text) {
  std::vector<std::pair<int, std::vector<Token>>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto toks = tokenize(line, no);
    if (!toks.empty()) out.emplace_back(no, std::move(toks));
  }
  return out;
}

long long to_int(const Token& t, int lineno) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(t.text, &pos);
    if (pos != t.text.size()) throw ParseError("bad integer: " + t.text, lineno);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError("bad integer: " + t.text, lineno);
  }
}

BigInt to_big(const Token& t, int lineno) {
  try {
    return BigInt(t.text);
  } catch (...) {
    throw ParseError("bad integer: " + t.text, lineno);
  }
}

}  // namespace

GroupContext parse_group(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<int, std::vector<ExtraGen>>> factors;
  std::optional<ConstantsBundle> constants;
  for (auto& [no, t] : split_lines(text)) {
    if (t[0].text == "factor") {
      if (t.size() != 4 || t[2].text != "rank")
        throw ParseError("expected: factor <name> rank <r>", no);
      names.push_back(t[1].text);
      factors.emplace_back(static_cast<int>(to_int(t[3], no)), std::vector<ExtraGen>{});
    } else if (t[0].text == "extragen") {
      if (t.size() < 5 || t[3].text != "=")
        throw ParseError("expected: extragen <factor> <name> = <ints>", no);
      auto it = std::find(names.begin(), names.end(), t[1].text);
      if (it == names.end()) throw ParseError("unknown factor: " + t[1].text, no);
      std::size_t fi = it - names.begin();
      ExtraGen x;
      x.name = t[2].text;
      for (std::size_t i = 4; i < t.size(); ++i)
        x.vec.push_back(to_int(t[i], no));
      if (static_cast<int>(x.vec.size()) != factors[fi].first)
        throw ParseError("extra generator has wrong dimension", no);
      factors[fi].second.push_back(std::move(x));
    } else if (t[0].text == "constants") {
      ConstantsBundle cb;
      for (std::size_t i = 1; i < t.size(); ++i) {
        std::size_t eq = t[i].text.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", no);
        std::string key = t[i].text.substr(0, eq), val = t[i].text.substr(eq + 1);
        auto as_int = [&](const std::string& s) {
          Token tk{s, false};
          return static_cast<int>(to_int(tk, no));
        };
        if (key == "delta")
          cb.delta = as_int(val);
        else if (key == "K")
          cb.K = as_int(val);
        else if (key == "L")
          cb.L = as_int(val);
        else if (key == "e1")
          cb.e1 = as_int(val);
        else if (key == "e2")
          cb.e2 = as_int(val);
        else if (key == "eprime")
          cb.e_prime = as_int(val);
        else if (key == "exhaustive")
          cb.exhaustive_search = as_int(val) != 0;
        else if (key == "ff") {
          std::size_t comma = val.find(',');
          if (comma == std::string::npos) throw ParseError("ff=<slope>,<intercept>", no);
          cb.ff_slope = as_int(val.substr(0, comma));
          cb.ff_intercept = as_int(val.substr(comma + 1));
        } else {
          throw ParseError("unknown constant: " + key, no);
        }
      }
      cb.validate();
      constants = cb;
    } else {
      throw ParseError("unknown directive: " + t[0].text, no);
    }
  }
  if (factors.empty()) throw ParseError("group file declares no factors");
  GroupContext ctx = make_group(factors);
  ctx.constants = constants;
  return ctx;
}

std::string serialize_group(const GroupContext& ctx) {
  std::ostringstream out;
  for (int f = 0; f < ctx.factor_count(); ++f) {
    out << "factor f" << (f + 1) << " rank " << ctx.factors[f].rank << "\n";
    for (const ExtraGen& x : ctx.factors[f].extras) {
      out << "extragen f" << (f + 1) << " " << x.name << " =";
      for (auto c : x.vec) out << " " << c;
      out << "\n";
    }
  }
  if (ctx.constants) {
    const ConstantsBundle& cb = *ctx.constants;
    out << "constants delta=" << cb.delta << " K=" << cb.K << " L=" << cb.L
        << " e1=" << cb.e1 << " e2=" << cb.e2 << " eprime=" << cb.e_prime
        << " ff=" << cb.ff_slope << "," << cb.ff_intercept;
    if (cb.exhaustive_search) out << " exhaustive=1";
    out << "\n";
  }
  return out.str();
}

Program parse_program(const std::string& text, AlphabetRef alphabet, int tether_bound) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty program file");
  std::map<std::string, Var> var_of;
  std::string start_name;
  // first pass: declared variables
  for (auto& [no, t] : lines) {
    if (t[0].text == "start") {
      if (t.size() != 2 || t[1].quoted) throw ParseError("expected: start <var>", no);
      if (!start_name.empty()) throw ParseError("duplicate start directive", no);
      start_name = t[1].text;
      continue;
    }
    if (t.size() < 2 || t[1].text != "=" || t[0].quoted)
      throw ParseError("expected: <var> = ...", no);
    if (var_of.count(t[0].text)) throw ParseError("duplicate production for " + t[0].text, no);
    var_of.emplace(t[0].text, static_cast<Var>(var_of.size()));
  }
  if (start_name.empty()) throw ParseError("missing start directive");
  auto sit = var_of.find(start_name);
  if (sit == var_of.end()) throw ParseError("start variable has no production: " + start_name);

  std::vector<Rhs> rhs(var_of.size());
  auto letter = [&](const Token& t, int no) {
    if (!alphabet->has(t.text)) throw ParseError("unknown letter: " + t.text, no);
    return alphabet->id_of(t.text);
  };
  for (auto& [no, t] : lines) {
    if (t[0].text == "start") continue;
    Var v = var_of[t[0].text];
    Rhs& r = rhs[v];
    if (t.size() >= 3 && !t[2].quoted && t[2].text == "cut") {
      if (t.size() != 6) throw ParseError("expected: <var> = cut <var> <k> <l>", no);
      auto it = var_of.find(t[3].text);
      if (it == var_of.end()) throw ParseError("unknown variable: " + t[3].text, no);
      r.kind = RhsKind::CutHat;
      r.base = it->second;
      r.lo = to_big(t[4], no);
      r.hi = to_big(t[5], no);
      continue;
    }
    if (t.size() >= 3 && !t[2].quoted && t[2].text == "rawcut") {
      if (t.size() != 6) throw ParseError("expected: <var> = rawcut <var> <i> <j>", no);
      auto it = var_of.find(t[3].text);
      if (it == var_of.end()) throw ParseError("unknown variable: " + t[3].text, no);
      r.kind = RhsKind::CutRaw;
      r.base = it->second;
      r.lo = to_big(t[4], no);
      r.hi = to_big(t[5], no);
      continue;
    }
    if (t.size() >= 3 && !t[2].quoted && t[2].text == "tether") {
      r.kind = RhsKind::Tether;
      if (t.size() < 4) throw ParseError("expected: <var> = tether <var> | .. | ..", no);
      auto it = var_of.find(t[3].text);
      if (it == var_of.end()) throw ParseError("unknown variable: " + t[3].text, no);
      r.base = it->second;
      int part = 0;  // 0: before first |, 1: alpha, 2: beta
      for (std::size_t i = 4; i < t.size(); ++i) {
        if (!t[i].quoted && t[i].text == "|") {
          ++part;
          if (part > 2) throw ParseError("too many | in tether rhs", no);
          continue;
        }
        if (part == 0) throw ParseError("expected | after tether base", no);
        (part == 1 ? r.alpha : r.beta).push_back(letter(t[i], no));
      }
      if (part < 2) throw ParseError("tether rhs needs two | separators", no);
      continue;
    }
    // plain symbol string
    for (std::size_t i = 2; i < t.size(); ++i) {
      if (t[i].quoted) {
        r.syms.push_back(Sym::letter(letter(t[i], no)));
      } else {
        auto it = var_of.find(t[i].text);
        if (it == var_of.end()) {
          // bare token: accept as a letter when the alphabet knows it
          if (alphabet->has(t[i].text)) {
            r.syms.push_back(Sym::letter(alphabet->id_of(t[i].text)));
          } else {
            throw ParseError("unknown symbol: " + t[i].text, no);
          }
        } else {
          r.syms.push_back(Sym::var(it->second));
        }
      }
    }
  }
  try {
    return Program(std::move(alphabet), std::move(rhs), sit->second, tether_bound);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_program(const Program& p) {
  std::ostringstream out;
  out << "start X" << p.start() << "\n";
  const Alphabet& a = p.alphabet();
  for (Var v = 0; v < p.var_count(); ++v) {
    const Rhs& r = p.rhs(v);
    out << "X" << v << " =";
    switch (r.kind) {
      case RhsKind::Symbols:
        for (const Sym& s : r.syms) {
          if (s.is_var())
            out << " X" << s.as_var();
          else
            out << " '" << a[s.as_letter()].token << "'";
        }
        break;
      case RhsKind::CutHat:
        out << " cut X" << r.base << " " << r.lo.str() << " " << r.hi.str();
        break;
      case RhsKind::CutRaw:
        out << " rawcut X" << r.base << " " << r.lo.str() << " " << r.hi.str();
        break;
      case RhsKind::Tether:
        out << " tether X" << r.base << " |";
        for (LetterId l : r.alpha) out << " '" << a[l].token << "'";
        out << " |";
        for (LetterId l : r.beta) out << " '" << a[l].token << "'";
        break;
    }
    out << "\n";
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

}  // namespace cwp
