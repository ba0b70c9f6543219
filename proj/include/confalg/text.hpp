#pragma once

// Concrete syntax: expressions such as "2 a<1,0> D{0,1} b - a", canonical
// printing of polynomials, and presentation files.

#include "confalg/envelope.hpp"

#include <cctype>
#include <sstream>

namespace confalg {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  std::size_t line, column;
};

// ---------------------------------------------------------------- printing

inline std::string formatIndex(const MultiIndex& m) {
  std::string s;
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (t) s += ",";
    s += std::to_string(m[t]);
  }
  return s;
}

inline std::string formatWord(const Word& w, const AlgebraSignature& sig) {
  std::string s;
  for (const auto& l : w.links) s += sig.name(l.gen) + "<" + formatIndex(l.label) + "> ";
  if (!w.tailD.isZero()) s += "D{" + formatIndex(w.tailD) + "} ";
  return s + sig.name(w.tail);
}

inline std::string formatRational(const Rational& c) { return c.get_str(); }

/// Terms in descending order; unit coefficients elided; "0" for zero.
inline std::string formatPolynomial(const Polynomial& p, const AlgebraSignature& sig) {
  if (p.isZero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : p) {
    const bool neg = c < 0;
    const Rational a = neg ? Rational(-c) : c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (a != 1) s += formatRational(a) + " ";
    s += formatWord(w, sig);
    first = false;
  }
  return s;
}

// ----------------------------------------------------------------- parsing

namespace detail {

class Lexer {
 public:
  enum Kind { end, ident, number, sym };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t line, column;
  };

  Lexer(std::string_view text, std::size_t line = 1, std::size_t column = 1) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char ch = text[i];
      if (ch == '\n') {
        ++line, column = 1, ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++column, ++i;
        continue;
      }
      std::size_t j = i;
      Kind k = sym;
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        k = ident;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        k = number;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      } else {
        if (std::string_view("<>,(){}+-*/[]:").find(ch) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + ch + "'", line, column);
        j = i + 1;
      }
      toks_.push_back({k, std::string(text.substr(i, j - i)), line, column});
      column += j - i;
      i = j;
    }
    toks_.push_back({end, "", line, column});
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(const char* s) {
    if (peek().kind == sym && peek().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + (t.kind == end ? " at end of input" : " near '" + t.text + "'"), t.line, t.column);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  ExprParser(Lexer& lx, const AlgebraSignature& sig) : lx_(lx), sig_(sig) {}

  LinearExpr expression() {
    LinearExpr out;
    bool neg = lx_.accept("-");
    if (!neg) lx_.accept("+");
    while (true) {
      LinearExpr t = term();
      for (auto& [c, tree] : t) out.emplace_back(neg ? Rational(-c) : c, std::move(tree));
      if (lx_.accept("+"))
        neg = false;
      else if (lx_.accept("-"))
        neg = true;
      else
        break;
    }
    return out;
  }

  MultiIndex index() {
    std::vector<int> xs;
    do {
      const auto& t = lx_.peek();
      if (t.kind != Lexer::number) lx_.fail("expected a non-negative integer");
      xs.push_back(toInt(lx_.next()));
    } while (lx_.accept(","));
    if (xs.size() != sig_.arity()) {
      const auto& t = lx_.peek();
      throw ParseError("index has " + std::to_string(xs.size()) + " components, arity is " +
                           std::to_string(sig_.arity()),
                       t.line, t.column);
    }
    return MultiIndex(xs);
  }

  Rational rational() {
    Rational r(toBig(lx_.next()));
    if (lx_.accept("/")) {
      if (lx_.peek().kind != Lexer::number) lx_.fail("expected a denominator");
      const auto tok = lx_.next();
      BigInt d = toBig(tok);
      if (d == 0) throw ParseError("zero denominator", tok.line, tok.column);
      r /= Rational(d);
    }
    r.canonicalize();
    return r;
  }

 private:
  LinearExpr term() {
    Rational c = 1;
    if (lx_.peek().kind == Lexer::number) {
      c = rational();
      const bool star = lx_.accept("*");
      const auto& t = lx_.peek();
      const bool more = t.kind == Lexer::ident || (t.kind == Lexer::sym && t.text == "(");
      if (!more) {
        if (star) lx_.fail("expected a factor after '*'");
        if (c != 0) lx_.fail("a scalar needs a generator");
        return {};
      }
    }
    LinearExpr t = chain();
    for (auto& [a, tree] : t) a *= c;
    return t;
  }

  // Unparenthesized chains associate to the right.
  LinearExpr chain() {
    LinearExpr left = factor();
    if (!lx_.accept("<")) return left;
    MultiIndex m = index();
    lx_.expect(">");
    LinearExpr right = chain();
    LinearExpr out;
    for (const auto& [a, x] : left)
      for (const auto& [b, y] : right) out.emplace_back(a * b, ExprTree::node(x, m, y));
    return out;
  }

  LinearExpr factor() {
    if (lx_.accept("(")) {
      LinearExpr e = expression();
      lx_.expect(")");
      return e;
    }
    const auto t = lx_.peek();
    if (t.kind != Lexer::ident) lx_.fail("expected a generator");
    lx_.next();
    MultiIndex d = sig_.zero();
    if (t.text == "D" && lx_.accept("{")) {
      d = index();
      lx_.expect("}");
      if (lx_.peek().kind != Lexer::ident) lx_.fail("D{...} applies to a generator");
      return {{Rational(1), ExprTree::leaf(generator(lx_.next()), d)}};
    }
    return {{Rational(1), ExprTree::leaf(generator(t), d)}};
  }

  Gen generator(const Lexer::Token& t) const {
    auto g = sig_.find(t.text);
    if (!g) throw ParseError("unknown generator '" + t.text + "'", t.line, t.column);
    return *g;
  }

  static int toInt(const Lexer::Token& t) {
    if (t.text.size() > 6) throw ParseError("index too large", t.line, t.column);
    return std::stoi(t.text);
  }
  static BigInt toBig(const Lexer::Token& t) { return BigInt(t.text); }

  Lexer& lx_;
  const AlgebraSignature& sig_;
};

inline std::string normalizeNewlines(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '\r'), s.end());
  return s;
}

}  // namespace detail

/// Parses a linear combination of expression trees.
inline LinearExpr parseExpression(std::string_view text, const AlgebraSignature& sig, std::size_t line = 1,
                                  std::size_t column = 1) {
  const std::string clean = detail::normalizeNewlines(std::string(text));
  detail::Lexer lx(clean, line, column);
  detail::ExprParser p(lx, sig);
  LinearExpr e = p.expression();
  if (lx.peek().kind != detail::Lexer::end) lx.fail("unexpected trailing input");
  return e;
}

/// Parses a label written as "2,0", "<2,0>" or "(2,0)".
inline MultiIndex parseIndex(std::string_view text, const AlgebraSignature& sig) {
  detail::Lexer lx(text);
  detail::ExprParser p(lx, sig);
  const char* close = nullptr;
  if (lx.accept("<"))
    close = ">";
  else if (lx.accept("("))
    close = ")";
  MultiIndex m = p.index();
  if (close) lx.expect(close);
  if (lx.peek().kind != detail::Lexer::end) lx.fail("unexpected trailing input");
  return m;
}

// ------------------------------------------------------- presentation files

struct Presentation {
  AlgebraSignature signature;
  std::vector<std::pair<std::string, LinearExpr>> relations;
  std::optional<LieAlgebraSpec> lieAlgebra;       // bracket(x,y): ... lines
  std::optional<LieConformalSpec> lieConformal;   // bracket(x,y)<m>: ... lines, or the loop algebra
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> parseList(const std::string& v, std::size_t line, std::size_t col) {
  std::string s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("expected [item, ...]", line, col);
  std::vector<std::string> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) throw ParseError("empty list item", line, col);
    out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Line-oriented presentation file:
///   algebra / n: INT / locality: [INT,...] / generators: [sym,...]
///   relations / name: EXPR
///   lie / bracket(x,y): EXPR  or  bracket(x,y)<m>: EXPR
inline Presentation parsePresentation(std::string_view text) {
  const std::string src = detail::normalizeNewlines(std::string(text));
  enum Section { none, algebra, relations, lie } section = none;
  std::optional<std::size_t> n;
  std::optional<MultiIndex> locality;
  std::optional<std::vector<std::string>> gens;
  Presentation pres;

  struct Pending {
    std::string name, body;
    std::size_t line, col;
  };
  std::vector<Pending> rels, brackets;
  std::size_t algebraLine = 0;

  std::stringstream in(src);
  std::size_t lineNo = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineNo;
    std::string line = raw.substr(0, raw.find('#'));
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::string head = t;
    if (!head.empty() && head.back() == ':') head.pop_back();
    if (head == "algebra" || head == "relations" || head == "lie") {
      section = head == "algebra" ? algebra : head == "relations" ? relations : lie;
      if (section == algebra) algebraLine = lineNo;
      continue;
    }
    const std::size_t colon = line.find(':');
    const std::size_t indent = line.find_first_not_of(" \t") + 1;
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", lineNo, indent);
    const std::string key = detail::trim(line.substr(0, colon));
    const std::string value = line.substr(colon + 1);
    const std::size_t valueCol = colon + 2;
    switch (section) {
      case none:
        throw ParseError("content before any section header", lineNo, indent);
      case algebra:
        if (key == "n") {
          const std::string v = detail::trim(value);
          if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit) || v.size() > 2)
            throw ParseError("n must be a small positive integer", lineNo, valueCol);
          n = std::stoul(v);
        } else if (key == "locality") {
          std::vector<int> xs;
          for (const auto& it : detail::parseList(value, lineNo, valueCol)) {
            if (!std::all_of(it.begin(), it.end(), ::isdigit) || it.size() > 6)
              throw ParseError("locality entries must be positive integers", lineNo, valueCol);
            xs.push_back(std::stoi(it));
          }
          if (xs.size() > MultiIndex::kMaxArity) throw ParseError("arity too large", lineNo, valueCol);
          locality = MultiIndex(xs);
        } else if (key == "generators") {
          gens = detail::parseList(value, lineNo, valueCol);
        } else {
          throw ParseError("unknown algebra key '" + key + "'", lineNo, indent);
        }
        break;
      case relations:
        rels.push_back({key, value, lineNo, valueCol});
        break;
      case lie:
        brackets.push_back({key, value, lineNo, indent});
        break;
    }
  }
  if (!n || !locality || !gens) throw ParseError("algebra block needs n, locality and generators", algebraLine, 1);
  if (locality->size() != *n) throw ParseError("locality length differs from n", algebraLine, 1);
  try {
    pres.signature = AlgebraSignature(*gens, *locality);
  } catch (const SignatureError& e) {
    throw ParseError(e.what(), algebraLine, 1);
  }
  const AlgebraSignature& sig = pres.signature;

  for (const auto& r : rels) {
    if (r.name.empty()) throw ParseError("relation needs a name", r.line, 1);
    pres.relations.emplace_back(r.name, parseExpression(r.body, sig, r.line, r.col));
  }

  if (!brackets.empty()) {
    LieAlgebraSpec g{sig.generators(), {}};
    LieConformalSpec L{sig, {}};
    bool ordinary = false, conformal = false;
    for (const auto& b : brackets) {
      detail::Lexer lx(b.name, b.line, b.col);
      auto id = lx.next();
      if (id.kind != detail::Lexer::ident || id.text != "bracket") throw ParseError("expected bracket(x,y)", b.line, b.col);
      lx.expect("(");
      auto x = lx.next();
      lx.expect(",");
      auto y = lx.next();
      lx.expect(")");
      auto gx = sig.find(x.text), gy = sig.find(y.text);
      if (!gx) throw ParseError("unknown generator '" + x.text + "'", x.line, x.column);
      if (!gy) throw ParseError("unknown generator '" + y.text + "'", y.line, y.column);
      Polynomial value;
      Engine E(sig, false);
      for (const auto& [c, tree] : parseExpression(b.body, sig, b.line, b.col)) {
        if (!tree.isLeaf()) throw ParseError("bracket values must be combinations of generators", b.line, b.col);
        value.addScaled(E.normalizeExpr(tree), c);
      }
      if (lx.accept("<")) {
        detail::ExprParser ip(lx, sig);
        MultiIndex m = ip.index();
        lx.expect(">");
        if (lx.peek().kind != detail::Lexer::end) lx.fail("unexpected trailing input");
        if (!sig.valid(m)) throw ParseError("label " + m.str() + " outside the validity box", b.line, b.col);
        if (*gx < *gy) throw ParseError("conformal table entries need x >= y in declaration order", b.line, b.col);
        conformal = true;
        L.table[{*gx, *gy, m}] = value;
      } else {
        if (lx.peek().kind != detail::Lexer::end) lx.fail("unexpected trailing input");
        ordinary = true;
        std::vector<std::pair<std::size_t, Rational>> cs;
        for (const auto& [w, c] : value) {
          if (!w.isDFree()) throw ParseError("Lie brackets cannot contain D", b.line, b.col);
          cs.emplace_back(w.tail, c);
        }
        g.structureConstants[{*gx, *gy}] = cs;
      }
    }
    const std::size_t firstLine = brackets.front().line;
    if (ordinary && conformal) throw ParseError("mixed ordinary and conformal brackets", firstLine, 1);
    if (ordinary) {
      for (int x : sig.locality())
        if (x != 1) throw ParseError("ordinary brackets need locality of all ones (loop algebra)", firstLine, 1);
      if (!validateLie(g)) throw ParseError("brackets violate antisymmetry or the Jacobi identity", firstLine, 1);
      pres.lieConformal = loopConformal(g, sig.arity());
      pres.lieAlgebra = std::move(g);
    } else {
      pres.lieConformal = std::move(L);
    }
  }
  return pres;
}

/// Canonical text of a presentation with normalized relations.
inline std::string formatPresentation(const Presentation& p, const Engine& E) {
  const auto& sig = p.signature;
  std::string s = "algebra\n  n: " + std::to_string(sig.arity()) + "\n  locality: [";
  for (std::size_t t = 0; t < sig.arity(); ++t) s += (t ? ", " : "") + std::to_string(sig.locality()[t]);
  s += "]\n  generators: [";
  for (std::size_t i = 0; i < sig.generatorCount(); ++i) s += (i ? ", " : "") + sig.generators()[i];
  s += "]\n";
  if (!p.relations.empty()) {
    s += "relations\n";
    for (const auto& [name, e] : p.relations) s += "  " + name + ": " + formatPolynomial(E.normalize(e), sig) + "\n";
  }
  if (p.lieAlgebra) {
    s += "lie\n";
    for (const auto& [key, cs] : p.lieAlgebra->structureConstants) {
      Polynomial v;
      for (const auto& [k, c] : cs) v.add(Word::generator(static_cast<Gen>(k), sig.arity()), c);
      s += "  bracket(" + sig.name(static_cast<Gen>(key.first)) + ", " + sig.name(static_cast<Gen>(key.second)) +
           "): " + formatPolynomial(v, sig) + "\n";
    }
  } else if (p.lieConformal) {
    s += "lie\n";
    for (const auto& [key, v] : p.lieConformal->table) {
      const auto& [i, j, m] = key;
      s += "  bracket(" + sig.name(i) + ", " + sig.name(j) + ")<" + formatIndex(m) + ">: " + formatPolynomial(v, sig) +
           "\n";
    }
  }
  return s;
}

}  // namespace confalg
