#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace confalg;
using namespace testsupport;

namespace {

const AlgebraSignature sig = idempotentSignature();

Word w2(MultiIndex m) { return Word({{0, m}}, 0, MultiIndex(2)); }
Word w3(MultiIndex m, MultiIndex k) { return Word({{0, m}, {0, k}}, 0, MultiIndex(2)); }

}  // namespace

TEST_CASE("signature validation") {
  CHECK_THROWS_AS(AlgebraSignature({}, MultiIndex{1}), SignatureError);
  CHECK_THROWS_AS(AlgebraSignature({"D"}, MultiIndex{1}), SignatureError);
  CHECK_THROWS_AS(AlgebraSignature({"a", "a"}, MultiIndex{1}), SignatureError);
  CHECK_THROWS_AS(AlgebraSignature({"a"}, MultiIndex{0, 1}), SignatureError);
  AlgebraSignature s({"x", "y"}, MultiIndex{2, 3});
  CHECK(s.find("y") == Gen{1});
  CHECK_FALSE(s.find("z"));
  CHECK(s.validLabels().size() == 6);
}

TEST_CASE("compareWords") {
  Word a = Word::generator(0, 2);
  CHECK(compareWords(a, w2({0, 0})) < 0);
  CHECK(compareWords(w2({0, 1}), w2({1, 0})) < 0);
  CHECK(compareWords(w2({1, 0}), w2({1, 0})) == 0);
  CHECK(compareWords(Word(0, {0, 1}), Word(0, {1, 0})) < 0);
  CHECK(compareWords(Word(0, {5, 5}), w2({0, 0})) < 0);
  AlgebraSignature ab({"a", "b"}, MultiIndex{1});
  CHECK(compareWords(Word({{0, {0}}}, 1, MultiIndex{0}), Word({{1, {0}}}, 0, MultiIndex{0})) < 0);
}

TEST_CASE("compareWords is a strict total order on random words") {
  std::mt19937 rng(5);
  AlgebraSignature s({"a", "b"}, MultiIndex{2, 2});
  std::vector<Word> ws;
  for (int k = 0; k < 60; ++k) ws.push_back(randomWord(rng, s, 1 + rng() % 3, 2));
  for (const auto& x : ws)
    for (const auto& y : ws) {
      auto c = compareWords(x, y);
      CHECK((c == 0) == (x == y));
      CHECK(compareWords(y, x) == (0 <=> c));
      for (const auto& z : ws)
        if (c < 0 && compareWords(y, z) < 0) CHECK(compareWords(x, z) < 0);
    }
}

TEST_CASE("leadingTerm") {
  Polynomial f = Polynomial(w2({0, 0})) - Polynomial(Word::generator(0, 2));
  CHECK(leadingTerm(f) == std::pair<Word, Rational>(w2({0, 0}), 1));
  CHECK(leadingTerm(3 * Polynomial::generator(0, 2)).second == 3);
  Polynomial g = 2 * Polynomial(w3({1, 1}, {1, 1})) + Polynomial(w3({1, 0}, {1, 1}));
  CHECK(leadingTerm(g) == std::pair<Word, Rational>(w3({1, 1}, {1, 1}), 2));
  CHECK_THROWS_AS(Polynomial().leadingWord(), EmptyPolynomial);
}

TEST_CASE("addScaled") {
  Polynomial a = Polynomial::generator(0, 2);
  Polynomial f = Polynomial(w2({0, 0})) - a;
  CHECK(addScaled(f, f, -1).isZero());
  CHECK(addScaled(a, a, 1) == 2 * a);
  CHECK(addScaled(Polynomial(w2({0, 0})), f, -1) == a);
}

TEST_CASE("polynomial basics") {
  Polynomial f = 2 * Polynomial(w2({0, 0})) - Polynomial(Word(0, {1, 0}));
  CHECK(f.size() == 2);
  CHECK_FALSE(f.isDFree());
  CHECK(f.degree() == 2);
  CHECK(f.monic().leadingCoefficient() == 1);
  CHECK(f.monic().coefficient(Word(0, {1, 0})) == Rational(-1, 2));
  CHECK(f.coefficient(w2({1, 1})) == 0);
  CHECK((f - f).isZero());
}

TEST_CASE("word structure") {
  Word w = Word({{0, {1, 0}}, {0, {0, 1}}}, 0, {2, 1});
  CHECK(w.length() == 3);
  CHECK(w.isNormal(sig));
  CHECK(w.linkSum() == MultiIndex{1, 1});
  CHECK(w.indexSum() == MultiIndex{-1, 0});
  CHECK(w.suffixFrom(1) == Word({{0, {0, 1}}}, 0, {2, 1}));
  CHECK(w.suffixFrom(2).prepend(0, {0, 1}) == w.suffixFrom(1));
  CHECK_FALSE(Word({{0, {2, 0}}}, 0, {0, 0}).isNormal(sig));
}

TEST_CASE("word tree round trip") {
  Word w = Word({{0, {1, 0}}, {0, {0, 1}}}, 0, {2, 1});
  ExprTree t = wordTree(w);
  CHECK(t.leafCount() == 3);
  Engine E(sig);
  CHECK(E.normalizeExpr(t) == Polynomial(w));
}
