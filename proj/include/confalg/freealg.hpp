#pragma once

// Normal words, the weight order, polynomials and unnormalized expression
// trees of the free associative n-conformal algebra.

#include "confalg/indices.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace confalg {

using Gen = std::uint32_t;

struct SignatureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a zero polynomial is asked for its leading term.
struct EmptyPolynomial : std::domain_error {
  using std::domain_error::domain_error;
};

/// Generators B (in declaration order), locality N, arity n.
class AlgebraSignature {
 public:
  AlgebraSignature() = default;
  AlgebraSignature(std::vector<std::string> generators, MultiIndex locality)
      : generators_(std::move(generators)), locality_(locality) {
    if (generators_.empty()) throw SignatureError("signature needs at least one generator");
    for (int x : locality_)
      if (x < 1) throw SignatureError("locality bounds must be positive");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const auto& g = generators_[i];
      if (g.empty() || g == "D") throw SignatureError("bad generator name '" + g + "'");
      if (!index_.emplace(g, static_cast<Gen>(i)).second)
        throw SignatureError("duplicate generator '" + g + "'");
    }
  }

  std::size_t arity() const { return locality_.size(); }
  const MultiIndex& locality() const { return locality_; }
  const std::vector<std::string>& generators() const { return generators_; }
  std::size_t generatorCount() const { return generators_.size(); }
  const std::string& name(Gen g) const { return generators_.at(g); }

  std::optional<Gen> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool valid(const MultiIndex& m) const { return isValidIndex(m, locality_); }
  MultiIndex zero() const { return MultiIndex::zero(arity()); }

  /// All valid labels in lexicographic order.
  std::vector<MultiIndex> validLabels() const {
    std::vector<MultiIndex> out;
    forEachInBox(zero(), locality_, [&](const MultiIndex& m) { out.push_back(m); });
    return out;
  }

  friend bool operator==(const AlgebraSignature& a, const AlgebraSignature& b) {
    return a.generators_ == b.generators_ && a.locality_ == b.locality_;
  }

 private:
  std::vector<std::string> generators_;
  MultiIndex locality_;
  std::unordered_map<std::string, Gen> index_;
};

struct Link {
  Gen gen;
  MultiIndex label;
  friend bool operator==(const Link&, const Link&) = default;
};

/// a1<m1> a2<m2> ... ak<mk> D^i a_{k+1}, stored as the links (a_j, m_j),
/// the tail generator and its D-exponent. The struct also carries
/// non-normal pseudo-words (invalid labels); isNormal() tells them apart.
struct Word {
  std::vector<Link> links;
  Gen tail = 0;
  MultiIndex tailD;

  Word() = default;
  Word(Gen g, MultiIndex d) : tail(g), tailD(d) {}
  Word(std::vector<Link> ls, Gen g, MultiIndex d)
      : links(std::move(ls)), tail(g), tailD(d) {}

  static Word generator(Gen g, std::size_t n) { return Word(g, MultiIndex::zero(n)); }

  std::size_t length() const { return links.size() + 1; }
  std::size_t arity() const { return tailD.size(); }
  bool isDFree() const { return tailD.isZero(); }
  Gen letter(std::size_t j) const { return j < links.size() ? links[j].gen : tail; }

  bool isNormal(const AlgebraSignature& sig) const {
    if (arity() != sig.arity() || !tailD.isNonNegative()) return false;
    if (tail >= sig.generatorCount()) return false;
    for (const auto& l : links)
      if (l.gen >= sig.generatorCount() || !sig.valid(l.label)) return false;
    return true;
  }

  /// Sum of link labels minus the tail exponent; products conserve it.
  MultiIndex indexSum() const {
    MultiIndex s = MultiIndex::zero(arity()) - tailD;
    for (const auto& l : links) s += l.label;
    return s;
  }

  /// Sum of link labels only.
  MultiIndex linkSum() const {
    MultiIndex s = MultiIndex::zero(arity());
    for (const auto& l : links) s += l.label;
    return s;
  }

  /// The subword starting at letter j (j < length()).
  Word suffixFrom(std::size_t j) const {
    return Word(std::vector<Link>(links.begin() + static_cast<long>(j), links.end()), tail, tailD);
  }

  /// Prefix a<m> in front of this word.
  Word prepend(Gen a, const MultiIndex& m) const {
    Word w;
    w.links.reserve(links.size() + 1);
    w.links.push_back({a, m});
    w.links.insert(w.links.end(), links.begin(), links.end());
    w.tail = tail;
    w.tailD = tailD;
    return w;
  }

  std::size_t hash() const {
    std::size_t h = tail * 31u + tailD.hash();
    for (const auto& l : links) h = (h * 1000003u) ^ (l.gen * 7919u + l.label.hash());
    return h;
  }

  friend bool operator==(const Word&, const Word&) = default;
};

/// The weight order: length, then a1, m1, a2, m2, ..., then the tail
/// generator, then the tail exponent (multi-indices lexicographically).
inline std::strong_ordering compareWords(const Word& u, const Word& v) {
  if (u.arity() != v.arity()) throw DimensionError("words of different arity");
  if (auto c = u.length() <=> v.length(); c != 0) return c;
  for (std::size_t j = 0; j < u.links.size(); ++j) {
    if (auto c = u.links[j].gen <=> v.links[j].gen; c != 0) return c;
    if (auto c = u.links[j].label <=> v.links[j].label; c != 0) return c;
  }
  if (auto c = u.tail <=> v.tail; c != 0) return c;
  return u.tailD <=> v.tailD;
}

inline std::strong_ordering operator<=>(const Word& u, const Word& v) { return compareWords(u, v); }

struct WordDescending {
  bool operator()(const Word& a, const Word& b) const { return compareWords(a, b) > 0; }
};

/// Finite Q-combination of normal words, kept sorted with the greatest word first.
class Polynomial {
 public:
  using Terms = std::map<Word, Rational, WordDescending>;

  Polynomial() = default;
  explicit Polynomial(const Word& w, const Rational& c = 1) { add(w, c); }

  static Polynomial generator(Gen g, std::size_t n) { return Polynomial(Word::generator(g, n)); }

  bool isZero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  Terms::const_iterator begin() const { return terms_.begin(); }
  Terms::const_iterator end() const { return terms_.end(); }

  Rational coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const Word& w, Rational c) {
    c.canonicalize();
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void addScaled(const Polynomial& p, Rational c) {
    c.canonicalize();
    if (c == 0) return;
    for (const auto& [w, a] : p.terms_) add(w, a * c);
  }

  Polynomial& operator+=(const Polynomial& p) { addScaled(p, 1); return *this; }
  Polynomial& operator-=(const Polynomial& p) { addScaled(p, -1); return *this; }
  Polynomial& operator*=(Rational c) {
    c.canonicalize();
    if (c == 0) { terms_.clear(); return *this; }
    for (auto& [w, a] : terms_) a *= c;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const { Polynomial r = *this; return r *= -1; }

  const Word& leadingWord() const {
    if (terms_.empty()) throw EmptyPolynomial("leading term of the zero polynomial");
    return terms_.begin()->first;
  }
  const Rational& leadingCoefficient() const {
    if (terms_.empty()) throw EmptyPolynomial("leading term of the zero polynomial");
    return terms_.begin()->second;
  }

  Polynomial monic() const {
    Polynomial r = *this;
    if (!r.isZero()) r *= 1 / Rational(leadingCoefficient());
    return r;
  }

  /// No word carries a D-power.
  bool isDFree() const {
    for (const auto& [w, c] : terms_)
      if (!w.isDFree()) return false;
    return true;
  }

  std::size_t degree() const { return terms_.empty() ? 0 : leadingWord().length(); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

inline std::pair<Word, Rational> leadingTerm(const Polynomial& p) {
  return {p.leadingWord(), p.leadingCoefficient()};
}

inline Polynomial addScaled(Polynomial p, const Polynomial& q, const Rational& c) {
  p.addScaled(q, c);
  return p;
}

/// Unnormalized expression: D^i a at the leaves, x<m>y at the nodes.
class ExprTree {
 public:
  struct Leaf {
    Gen gen;
    MultiIndex d;
  };
  struct Node {
    std::shared_ptr<const ExprTree> left;
    MultiIndex label;
    std::shared_ptr<const ExprTree> right;
  };

  static ExprTree leaf(Gen g, MultiIndex d) { return ExprTree(Leaf{g, d}); }
  static ExprTree node(const ExprTree& l, MultiIndex m, const ExprTree& r) {
    return ExprTree(Node{std::make_shared<const ExprTree>(l), m,
                         std::make_shared<const ExprTree>(r)});
  }

  bool isLeaf() const { return std::holds_alternative<Leaf>(v_); }
  const Leaf& asLeaf() const { return std::get<Leaf>(v_); }
  const Node& asNode() const { return std::get<Node>(v_); }

  std::size_t leafCount() const {
    if (isLeaf()) return 1;
    return asNode().left->leafCount() + asNode().right->leafCount();
  }

 private:
  explicit ExprTree(Leaf l) : v_(std::move(l)) {}
  explicit ExprTree(Node n) : v_(std::move(n)) {}
  std::variant<Leaf, Node> v_;
};

/// A Q-combination of expression trees, as produced by the parser.
using LinearExpr = std::vector<std::pair<Rational, ExprTree>>;

/// The right-normed tree a1<m1>(a2<m2>(... D^i a_{k+1})) of a word.
inline ExprTree wordTree(const Word& w) {
  ExprTree t = ExprTree::leaf(w.tail, w.tailD);
  for (std::size_t j = w.links.size(); j-- > 0;)
    t = ExprTree::node(ExprTree::leaf(w.links[j].gen, MultiIndex::zero(w.arity())),
                       w.links[j].label, t);
  return t;
}

}  // namespace confalg

template <>
struct std::hash<confalg::Word> {
  std::size_t operator()(const confalg::Word& w) const noexcept { return w.hash(); }
};
