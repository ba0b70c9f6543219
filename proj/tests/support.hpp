#pragma once

#include "confalg/confalg.hpp"
#include "oracle.hpp"

#include <random>

namespace testsupport {

using namespace confalg;

inline oracle::Idx toIdx(const MultiIndex& m) { return oracle::Idx(m.begin(), m.end()); }

inline oracle::P toOracle(const ExprTree& e) {
  if (e.isLeaf()) return oracle::leaf(static_cast<int>(e.asLeaf().gen), toIdx(e.asLeaf().d));
  const auto& n = e.asNode();
  return oracle::node(toOracle(*n.left), toIdx(n.label), toOracle(*n.right));
}

inline Word oracleWord(const oracle::P& t) {
  Word w;
  const oracle::Tree* cur = t.get();
  while (cur->kind == oracle::Tree::node) {
    w.links.push_back(Link{static_cast<Gen>(cur->l->gen), MultiIndex(cur->idx)});
    cur = cur->r.get();
  }
  w.tail = static_cast<Gen>(cur->gen);
  w.tailD = MultiIndex(cur->idx);
  return w;
}

inline Polynomial fromOracle(const oracle::Sum& s) {
  Polynomial p;
  for (const auto& [k, v] : s) p.add(oracleWord(v.second), v.first);
  return p;
}

inline Polynomial oracleEval(const AlgebraSignature& sig, const ExprTree& e) {
  oracle::Evaluator ev(toIdx(sig.locality()));
  return fromOracle(ev.evaluate(toOracle(e)));
}

/// Every expression tree with exactly `leaves` leaves, labels in [0, maxLabel]^n,
/// generators from gens and zero D-exponents.
inline std::vector<ExprTree> allTrees(std::size_t leaves, std::size_t n, int maxLabel, std::size_t gens) {
  if (leaves == 1) {
    std::vector<ExprTree> out;
    for (Gen g = 0; g < gens; ++g) out.push_back(ExprTree::leaf(g, MultiIndex(n)));
    return out;
  }
  std::vector<MultiIndex> labels;
  MultiIndex hi(n);
  for (std::size_t t = 0; t < n; ++t) hi[t] = maxLabel + 1;
  forEachInBox(MultiIndex(n), hi, [&](const MultiIndex& m) { labels.push_back(m); });
  std::vector<ExprTree> out;
  for (std::size_t k = 1; k < leaves; ++k) {
    auto L = allTrees(k, n, maxLabel, gens);
    auto R = allTrees(leaves - k, n, maxLabel, gens);
    for (const auto& l : L)
      for (const auto& m : labels)
        for (const auto& r : R) out.push_back(ExprTree::node(l, m, r));
  }
  return out;
}

inline MultiIndex randomIndex(std::mt19937& rng, std::size_t n, int maxExclusive) {
  std::uniform_int_distribution<int> d(0, maxExclusive - 1);
  MultiIndex m(n);
  for (std::size_t t = 0; t < n; ++t) m[t] = d(rng);
  return m;
}

/// A random normal word of the given length with tail exponent below maxD.
inline Word randomWord(std::mt19937& rng, const AlgebraSignature& sig, std::size_t length, int maxD) {
  std::uniform_int_distribution<Gen> g(0, static_cast<Gen>(sig.generatorCount() - 1));
  auto labels = sig.validLabels();
  std::uniform_int_distribution<std::size_t> l(0, labels.size() - 1);
  Word w(g(rng), randomIndex(rng, sig.arity(), maxD));
  for (std::size_t k = 1; k < length; ++k) w = w.prepend(g(rng), labels[l(rng)]);
  return w;
}

inline AlgebraSignature idempotentSignature() { return AlgebraSignature({"a"}, MultiIndex{2, 2}); }

inline Polynomial parse(const Engine& E, const std::string& s) {
  return E.normalize(parseExpression(s, E.signature()));
}


/// f, g, h, p, q, s.
struct Idempotent {
  Polynomial f, g, h, p, q, s;
  std::vector<Polynomial> all() const { return {f, g, h, p, q, s}; }
};

inline Idempotent idempotentElements(const Engine& E) {
  return {parse(E, "a<0,0> a - a"),     parse(E, "a<1,0> a<1,0> a"), parse(E, "a<0,1> a<0,1> a"),
          parse(E, "a<1,1> a<1,0> a"), parse(E, "a<1,1> a<0,1> a"), parse(E, "a<1,1> a<1,1> a")};
}

/// The six elements sorted by leading word, which is the order completion produces.
inline RewriteSystem idempotentSystem(const Engine& E) {
  auto v = idempotentElements(E).all();
  std::sort(v.begin(), v.end(), [](const Polynomial& a, const Polynomial& b) { return a.leadingWord() < b.leadingWord(); });
  return RewriteSystem(v);
}

}  // namespace testsupport
