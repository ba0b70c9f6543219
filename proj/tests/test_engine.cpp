#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace confalg;
using namespace testsupport;

namespace {

const AlgebraSignature sig = idempotentSignature();

Word W(std::initializer_list<MultiIndex> labels, MultiIndex d = {0, 0}) {
  Word w;
  for (const auto& m : labels) w.links.push_back({0, m});
  w.tail = 0;
  w.tailD = d;
  return w;
}
Polynomial P(std::initializer_list<MultiIndex> labels, MultiIndex d = {0, 0}) { return Polynomial(W(labels, d)); }

}  // namespace

TEST_CASE("mulPrefix examples") {
  Engine E(sig);
  CHECK(E.mulPrefix(0, {2, 0}, P({{0, 1}})) == 2 * P({{1, 0}, {1, 1}}));
  CHECK(E.mulPrefix(0, {2, 2}, E.genPoly(0)).isZero());
  CHECK(E.mulPrefix(0, {1, 2}, P({{1, 0}})) == 2 * P({{1, 1}, {1, 1}}));
  CHECK(E.mulPrefix(0, {1, 1}, P({{0, 1}})) == P({{1, 1}, {0, 1}}));
}

TEST_CASE("mulWords examples") {
  Engine E(sig);
  CHECK(E.mulWords(E.gen(0), {0, 0}, E.gen(0)) == P({{0, 0}}));
  CHECK(E.mulWords(Word(0, {1, 0}), {1, 0}, E.gen(0)) == -P({{0, 0}}));
  // frozen from the tree-rewriting oracle
  CHECK(E.mulWords(W({{1, 0}}), {1, 1}, W({{1, 1}})) == P({{1, 0}, {1, 1}, {1, 1}}));
  auto t = ExprTree::node(wordTree(W({{1, 0}})), {1, 1}, wordTree(W({{1, 1}})));
  CHECK(oracleEval(sig, t) == P({{1, 0}, {1, 1}, {1, 1}}));
}

TEST_CASE("mulPoly examples") {
  Engine E(sig);
  Polynomial a = E.genPoly(0);
  Polynomial f = P({{0, 0}}) - a;
  CHECK(E.mulPoly(Polynomial(), {1, 0}, f).isZero());
  CHECK(E.mulPoly(a, {2, 1}, f) == 2 * P({{1, 1}, {1, 0}}));
  CHECK(E.mulPoly(a, {2, 0}, f) == 2 * P({{1, 0}, {1, 0}}));
  CHECK(E.mulPoly(f, {2, 0}, f) == E.mulPoly(P({{0, 0}}), {2, 0}, f) - 2 * P({{1, 0}, {1, 0}}));
}

TEST_CASE("derive examples") {
  Engine E(sig);
  CHECK(E.derive(0, E.genPoly(0)) == Polynomial(Word(0, {1, 0})));
  CHECK(E.derive(0, P({{1, 0}})) == P({{1, 0}}, {1, 0}) - P({{0, 0}}));
  CHECK(E.deriveMulti({0, 0}, P({{1, 1}})) == P({{1, 1}}));
  CHECK(E.deriveMulti({1, 1}, E.genPoly(0)) == Polynomial(Word(0, {1, 1})));
  Polynomial d = E.deriveMulti({2, 0}, P({{1, 1}}));
  CHECK(d.leadingWord() == W({{1, 1}}, {2, 0}));
  CHECK(d == P({{1, 1}}, {2, 0}) - 2 * P({{0, 1}}, {1, 0}));
  CHECK_THROWS_AS(E.derive(2, E.genPoly(0)), DimensionError);
}

TEST_CASE("normalizeExpr examples") {
  Engine E(sig);
  CHECK(E.normalizeExpr(ExprTree::leaf(0, {0, 0})) == E.genPoly(0));
  auto a = ExprTree::leaf(0, {0, 0});
  CHECK(E.normalizeExpr(ExprTree::node(a, {2, 2}, ExprTree::node(a, {0, 0}, a))) == 4 * P({{1, 1}, {1, 1}}));
  auto left = ExprTree::node(ExprTree::node(a, {1, 0}, a), {1, 0}, a);
  Polynomial expect;
  forEachBelow({1, 0}, [&](const MultiIndex& s) {
    expect.addScaled(E.mulPoly(E.genPoly(0), MultiIndex{1, 0} - s, E.mulPoly(E.genPoly(0), MultiIndex{1, 0} + s, E.genPoly(0))),
                     Rational(binomMulti({1, 0}, s) * signOf(s)));
  });
  CHECK(E.normalizeExpr(left) == expect);
  CHECK(expect == P({{1, 0}, {1, 0}}));
}

TEST_CASE("oracle agreement on all small trees") {
  Engine E(sig);
  std::size_t nonzero = 0;
  for (std::size_t leaves = 1; leaves <= 3; ++leaves)
    for (const auto& t : allTrees(leaves, 2, 3, 1)) {
      Polynomial p = E.normalizeExpr(t);
      REQUIRE(p == oracleEval(sig, t));
      nonzero += !p.isZero();
    }
  CHECK(nonzero == 46);  // oracle count
}

TEST_CASE("oracle agreement with derivations and two generators") {
  AlgebraSignature s({"a", "b"}, MultiIndex{2, 3});
  Engine E(s);
  std::mt19937 rng(17);
  std::function<ExprTree(int)> tree = [&](int leaves) -> ExprTree {
    if (leaves == 1) return ExprTree::leaf(rng() % 2, randomIndex(rng, 2, 3));
    int k = 1 + static_cast<int>(rng() % (leaves - 1));
    return ExprTree::node(tree(k), randomIndex(rng, 2, 4), tree(leaves - k));
  };
  for (int k = 0; k < 400; ++k) {
    auto t = tree(1 + static_cast<int>(rng() % 4));
    REQUIRE(E.normalizeExpr(t) == oracleEval(s, t));
  }
}

TEST_CASE("axioms hold on random normal words") {
  for (std::size_t n = 1; n <= 3; ++n) {
    MultiIndex N(n);
    for (std::size_t t = 0; t < n; ++t) N[t] = 2 + static_cast<int>(t % 2);
    AlgebraSignature s({"a", "b"}, N);
    Engine E(s);
    std::mt19937 rng(100 + static_cast<unsigned>(n));
    for (int trial = 0; trial < 60; ++trial) {
      Word u = randomWord(rng, s, 1 + rng() % 2, 2);
      Word v = randomWord(rng, s, 1 + rng() % 2, 2);
      Word w = randomWord(rng, s, 1 + rng() % 2, 2);
      MultiIndex m = randomIndex(rng, n, 4), mp = randomIndex(rng, n, 4);
      Polynomial U(u), V(v), Wp(w);
      // left associativity
      Polynomial lhs = E.mulPoly(E.mulPoly(U, m, V), mp, Wp), rhs;
      forEachBelow(m, [&](const MultiIndex& sIdx) {
        rhs.addScaled(E.mulPoly(U, m - sIdx, E.mulPoly(V, mp + sIdx, Wp)), Rational(binomMulti(m, sIdx) * signOf(sIdx)));
      });
      CHECK(lhs == rhs);
      // right-hand form
      Polynomial lhs2 = E.mulPoly(U, m, E.mulPoly(V, mp, Wp)), rhs2;
      forEachBelow(m, [&](const MultiIndex& sIdx) {
        rhs2.addScaled(E.mulPoly(E.mulPoly(U, m - sIdx, V), mp + sIdx, Wp), Rational(binomMulti(m, sIdx)));
      });
      CHECK(lhs2 == rhs2);
      for (std::size_t t = 0; t < n; ++t) {
        // Leibniz
        CHECK(E.derive(t, E.mulPoly(U, m, V)) == E.mulPoly(E.derive(t, U), m, V) + E.mulPoly(U, m, E.derive(t, V)));
        // (D_t u)<m>v = -m_t u<m-e_t>v
        MultiIndex et = MultiIndex::unit(n, t);
        Polynomial expect = m[t] > 0 ? Rational(-m[t]) * E.mulPoly(U, m - et, V) : Polynomial();
        CHECK(E.mulPoly(E.derive(t, U), m, V) == expect);
        for (std::size_t r = 0; r < n; ++r) CHECK(E.derive(t, E.derive(r, U)) == E.derive(r, E.derive(t, U)));
      }
    }
  }
}

TEST_CASE("index-sum conservation and closure") {
  Engine E(sig);
  E.setInvariantChecks(true);
  std::mt19937 rng(9);
  for (int k = 0; k < 200; ++k) {
    Word u = randomWord(rng, sig, 1 + rng() % 3, 2), v = randomWord(rng, sig, 1 + rng() % 3, 2);
    MultiIndex m = randomIndex(rng, 2, 4);
    for (const auto& [w, c] : E.mulWords(u, m, v)) {
      CHECK(w.length() == u.length() + v.length());
      CHECK(w.indexSum() == u.indexSum() + m + v.indexSum());
      CHECK(w.isNormal(sig));
      if (u.isDFree() && v.isDFree()) CHECK(w.isDFree());
    }
  }
  CHECK(E.invariantChecksPerformed() > 0);
}

TEST_CASE("memoization does not change results") {
  Engine memo(sig, true), plain(sig, false);
  std::mt19937 rng(21);
  for (int k = 0; k < 100; ++k) {
    Word u = randomWord(rng, sig, 1 + rng() % 3, 2), v = randomWord(rng, sig, 1 + rng() % 3, 2);
    MultiIndex m = randomIndex(rng, 2, 4);
    CHECK(memo.mulWords(u, m, v) == plain.mulWords(u, m, v));
  }
}

TEST_CASE("engine rejects malformed input") {
  Engine E(sig);
  CHECK_THROWS_AS(E.mulPrefix(0, MultiIndex{1}, E.genPoly(0)), DimensionError);
  CHECK_THROWS(E.normalizeExpr(ExprTree::leaf(3, {0, 0})));
  CHECK_THROWS(E.normalizeExpr(ExprTree::node(ExprTree::leaf(0, {0, 0}), {-1, 0}, ExprTree::leaf(0, {0, 0}))));
}
