#pragma once

// Lie n-conformal input, the brace product, universal enveloping
// presentations, the 1/2-PBW check and loop algebras.

#include "confalg/rewrite.hpp"

#include <tuple>

namespace confalg {

/// Multiplication table a_i [m] a_j for i >= j (declaration order) and valid m.
/// Values are combinations of length-1 words c D^e a_k. Missing entries are zero.
struct LieConformalSpec {
  using Key = std::tuple<Gen, Gen, MultiIndex>;
  AlgebraSignature signature;
  std::map<Key, Polynomial> table;

  Polynomial entry(Gen i, Gen j, const MultiIndex& m) const {
    auto it = table.find(Key{i, j, m});
    return it == table.end() ? Polynomial() : it->second;
  }

  /// Throws std::invalid_argument on keys outside i >= j / the validity box, or non-linear values.
  void validate() const {
    const auto& sig = signature;
    for (const auto& [key, val] : table) {
      const auto& [i, j, m] = key;
      if (i >= sig.generatorCount() || j >= sig.generatorCount())
        throw std::invalid_argument("table generator out of range");
      if (i < j) throw std::invalid_argument("table key needs i >= j");
      if (m.size() != sig.arity() || !sig.valid(m))
        throw std::invalid_argument("table key " + m.str() + " outside the validity box");
      for (const auto& [w, c] : val)
        if (w.length() != 1 || !w.isNormal(sig))
          throw std::invalid_argument("table value must be a combination of D^e a_k");
    }
  }
};

/// An ordinary Lie algebra: [a_i, a_j] = sum c_k a_k.
struct LieAlgebraSpec {
  std::vector<std::string> basis;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, Rational>>> structureConstants;
};

namespace detail {

/// Products inside the Lie conformal algebra itself (free k[D]-module on the basis).
class LieConformalProduct {
 public:
  explicit LieConformalProduct(const LieConformalSpec& L) : L_(L), n_(L.signature.arity()) {}

  Polynomial operator()(const Polynomial& x, const MultiIndex& m, const Polynomial& y) const {
    Polynomial out;
    for (const auto& [u, a] : x)
      for (const auto& [v, b] : y) {
        // (D^e a_i)[m] y = (-1)^e [m]^e a_i[m-e] y
        if (!u.tailD.leq(m)) continue;
        BigInt c = fallingFactorial(m, u.tailD) * signOf(u.tailD);
        if (c == 0) continue;
        out.addScaled(withD(u.tail, m - u.tailD, v.tail, v.tailD), a * b * Rational(c));
      }
    return out;
  }

  static Polynomial shift(const Polynomial& p, const MultiIndex& d) {
    Polynomial out;
    for (const auto& [w, c] : p) out.add(Word(w.tail, w.tailD + d), c);
    return out;
  }

 private:
  // a_i[k] D^f a_j, using a[k]D_t b = D_t(a[k]b) + k_t a[k-e_t]b
  Polynomial withD(Gen i, const MultiIndex& k, Gen j, const MultiIndex& f) const {
    if (f.isZero()) return basic(i, k, j);
    std::size_t t = 0;
    while (f[t] == 0) ++t;
    const MultiIndex et = MultiIndex::unit(n_, t);
    Polynomial out = shift(withD(i, k, j, f - et), et);
    if (k[t] > 0) out.addScaled(withD(i, k - et, j, f - et), k[t]);
    return out;
  }

  Polynomial basic(Gen i, const MultiIndex& k, Gen j) const {
    if (!L_.signature.valid(k)) return {};
    if (i >= j) return L_.entry(i, j, k);
    // a[k]b = -{b[k]a}
    Polynomial out;
    forEachInBox(L_.signature.zero(), L_.signature.locality() - k, [&](const MultiIndex& s) {
      out.addScaled(shift(L_.entry(j, i, k + s), s), Rational(-signOf(k + s)) / Rational(factorialMulti(s)));
    });
    return out;
  }

  const LieConformalSpec& L_;
  std::size_t n_;
};

}  // namespace detail

/// {b<m>P} = sum_s (-1)^{m+s} D^(s) (b<m+s>P), with D^(s) = D^s / s!.
inline Polynomial brace(const Engine& E, Gen b, const MultiIndex& m, const Polynomial& p) {
  const MultiIndex M = multiplicationBounds(E.signature(), p);
  Polynomial out;
  forEachInBox(E.signature().zero(), M - m, [&](const MultiIndex& s) {
    Polynomial term = E.deriveMulti(s, E.mulPrefix(b, m + s, p));
    out.addScaled(term, Rational(signOf(m + s)) / Rational(factorialMulti(s)));
  });
  return out;
}

/// s_ij^m = a_i<m>a_j - {a_j<m>a_i} - a_i[m]a_j (not yet made monic). For
/// i < j the Lie product comes from anti-commutativity.
inline Polynomial envelopingRelation(const Engine& E, const LieConformalSpec& L, Gen i, Gen j, const MultiIndex& m) {
  Polynomial r = E.mulPoly(E.genPoly(i), m, E.genPoly(j));
  r -= brace(E, j, m, E.genPoly(i));
  if (i >= j)
    r -= L.entry(i, j, m);
  else
    r -= detail::LieConformalProduct(L)(E.genPoly(i), m, E.genPoly(j));
  return r;
}

/// Monic relations s_ij^m for i >= j and valid m; zero relations are dropped.
inline RewriteSystem envelopingPresentation(const Engine& E, const LieConformalSpec& L) {
  L.validate();
  if (!(E.signature() == L.signature)) throw SignatureError("engine and spec signatures differ");
  RewriteSystem S;
  const auto& sig = L.signature;
  for (Gen i = 0; i < sig.generatorCount(); ++i)
    for (Gen j = 0; j <= i; ++j)
      for (const auto& m : sig.validLabels()) {
        Polynomial r = envelopingRelation(E, L, i, j, m);
        if (!r.isZero()) S.add(r);
      }
  return S;
}


struct JacobiDefect {
  Gen a, b, c;
  MultiIndex m, mp;
  Polynomial defect;
};

/// Finite check of the conformal Jacobi identity over basis triples and valid m, m':
/// (a[m]b)[m']c = sum_s (-1)^s C(m,s) (a[m-s](b[m'+s]c) - (-1)^m b[m+m'-s](a[s]c)).
inline std::vector<JacobiDefect> conformalJacobiDefects(const LieConformalSpec& L) {
  L.validate();
  detail::LieConformalProduct br(L);
  const auto& sig = L.signature;
  const std::size_t n = sig.arity();
  std::vector<JacobiDefect> out;
  const auto labels = sig.validLabels();
  for (Gen a = 0; a < sig.generatorCount(); ++a)
    for (Gen b = 0; b < sig.generatorCount(); ++b)
      for (Gen c = 0; c < sig.generatorCount(); ++c)
        for (const auto& m : labels)
          for (const auto& mp : labels) {
            Polynomial A = Polynomial::generator(a, n), B = Polynomial::generator(b, n),
                       C = Polynomial::generator(c, n);
            Polynomial lhs = br(br(A, m, B), mp, C);
            Polynomial rhs;
            forEachBelow(m, [&](const MultiIndex& s) {
              Rational k(binomMulti(m, s) * signOf(s));
              rhs.addScaled(br(A, m - s, br(B, mp + s, C)), k);
              rhs.addScaled(br(B, m + mp - s, br(A, s, C)), -k * signOf(m));
            });
            Polynomial d = lhs - rhs;
            if (!d.isZero()) out.push_back({a, b, c, m, mp, d});
          }
  return out;
}

/// How a 1/2-PBW polynomial was shown trivial.
enum class HalfPBWStage {
  elw,            // reduces to zero by elimination of leading words
  normalSWords,   // combination of normal S-words below w
  generalSWords,  // combination of arbitrary S-words below w
  failed
};

inline const char* stageName(HalfPBWStage s) {
  switch (s) {
    case HalfPBWStage::elw: return "elw";
    case HalfPBWStage::normalSWords: return "normalSWords";
    case HalfPBWStage::generalSWords: return "generalSWords";
    case HalfPBWStage::failed: return "failed";
  }
  return "?";
}

struct HalfPBWCell {
  Gen i, j, k;
  MultiIndex m, mp;
  HalfPBWStage stage = HalfPBWStage::elw;
  Polynomial remainder;  // ELW remainder modulo the presentation
};

struct HalfPBWReport {
  std::vector<HalfPBWCell> cells;
  /// Result of the finite Jacobi check on the input; a failure with valid
  /// input points at the engine rather than the table.
  bool inputPassesJacobi = true;

  std::size_t count(HalfPBWStage st) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [&](const HalfPBWCell& c) { return c.stage == st; }));
  }
  std::vector<HalfPBWCell> failures() const {
    std::vector<HalfPBWCell> out;
    for (const auto& c : cells)
      if (c.stage == HalfPBWStage::failed) out.push_back(c);
    return out;
  }
  bool ok() const { return count(HalfPBWStage::failed) == 0; }
};

/// Relations s_ij^m over every ordered pair (i, j); zero ones dropped.
inline RewriteSystem fullRelationSet(const Engine& E, const LieConformalSpec& L) {
  L.validate();
  RewriteSystem S;
  const auto& sig = L.signature;
  for (Gen i = 0; i < sig.generatorCount(); ++i)
    for (Gen j = 0; j < sig.generatorCount(); ++j)
      for (const auto& m : sig.validLabels()) {
        Polynomial r = envelopingRelation(E, L, i, j, m);
        if (!r.isZero()) S.add(r);
      }
  return S;
}

/// For i > j > k and valid m, m': p = s_ij^m<m'>a_k - a_i<m>s_jk^{m'} at
/// w = a_i<m>a_j<m'>a_k. Each p is tried by ELW modulo the presentation,
/// then as a combination of normal S-words below w, then of arbitrary
/// S-words below w. Normal S-words range over all ordered pairs with tail
/// exponents bounded by those occurring in p; general S-words are built
/// from the presentation with one extra unit of tail exponent.
inline HalfPBWReport halfPBWCheck(const Engine& E, const LieConformalSpec& L, unsigned threads = 1) {
  HalfPBWReport rep;
  const RewriteSystem S = envelopingPresentation(E, L);
  const auto& sig = L.signature;
  const auto labels = sig.validLabels();
  for (Gen i = 0; i < sig.generatorCount(); ++i)
    for (Gen j = 0; j < i; ++j)
      for (Gen k = 0; k < j; ++k)
        for (const auto& m : labels)
          for (const auto& mp : labels) rep.cells.push_back({i, j, k, m, mp, HalfPBWStage::elw, {}});

  auto polys = detail::parallelMap<Polynomial>(rep.cells.size(), threads, [&](std::size_t q) {
    const HalfPBWCell& c = rep.cells[q];
    Polynomial p = E.mulPoly(envelopingRelation(E, L, c.i, c.j, c.m), c.mp, E.genPoly(c.k));
    p -= E.mulPrefix(c.i, c.m, envelopingRelation(E, L, c.j, c.k, c.mp));
    return p;
  });
  auto rems = detail::parallelMap<Polynomial>(rep.cells.size(), threads, [&](std::size_t q) {
    return reduce(E, polys[q], S, nullptr, false).remainder;
  });

  MultiIndex bound = sig.zero();
  bool anyLeft = false;
  for (std::size_t q = 0; q < rep.cells.size(); ++q) {
    rep.cells[q].remainder = rems[q];
    if (rems[q].isZero()) continue;
    anyLeft = true;
    for (const auto& [x, a] : polys[q])
      for (std::size_t t = 0; t < bound.size(); ++t) bound[t] = std::max(bound[t], x.tailD[t]);
  }
  if (anyLeft) {
    const RewriteSystem full = fullRelationSet(E, L);
    std::optional<SWordSpan> general;
    for (std::size_t q = 0; q < rep.cells.size(); ++q) {
      auto& c = rep.cells[q];
      if (c.remainder.isZero()) continue;
      const Word w({{c.i, c.m}, {c.j, c.mp}}, c.k, sig.zero());
      if (trivialModSW(E, polys[q], full, w, bound)) {
        c.stage = HalfPBWStage::normalSWords;
        continue;
      }
      if (!general) {
        MultiIndex spanBound = bound;
        for (std::size_t t = 0; t < spanBound.size(); ++t) spanBound[t] += 1;
        general.emplace(E, S, 3, spanBound);
      }
      c.stage = general->inSpanBelow(polys[q], w) ? HalfPBWStage::generalSWords : HalfPBWStage::failed;
    }
  }
  rep.inputPassesJacobi = conformalJacobiDefects(L).empty();
  return rep;
}

/// Bracket of basis elements, extended by antisymmetry from whichever key is present.
inline std::vector<Rational> lieBracket(const LieAlgebraSpec& g, std::size_t i, std::size_t j) {
  std::vector<Rational> v(g.basis.size());
  auto it = g.structureConstants.find({i, j});
  if (it != g.structureConstants.end()) {
    for (const auto& [k, c] : it->second) v.at(k) += c;
    return v;
  }
  it = g.structureConstants.find({j, i});
  if (it != g.structureConstants.end())
    for (const auto& [k, c] : it->second) v.at(k) -= c;
  return v;
}

/// Antisymmetry of the given entries and the Jacobi identity on all basis triples.
inline bool validateLie(const LieAlgebraSpec& g) {
  const std::size_t d = g.basis.size();
  for (const auto& [key, vals] : g.structureConstants) {
    if (key.first >= d || key.second >= d) return false;
    for (const auto& [k, c] : vals)
      if (k >= d) return false;
  }
  for (const auto& [key, vals] : g.structureConstants) {
    const auto [i, j] = key;
    std::vector<Rational> v(d);
    for (const auto& [k, c] : vals) v[k] += c;
    if (i == j) {
      for (const auto& c : v)
        if (c != 0) return false;
    }
    auto rev = g.structureConstants.find({j, i});
    if (i != j && rev != g.structureConstants.end()) {
      std::vector<Rational> w(d);
      for (const auto& [k, c] : rev->second) w[k] += c;
      for (std::size_t k = 0; k < d; ++k)
        if (v[k] + w[k] != 0) return false;
    }
  }
  auto br = [&](const std::vector<Rational>& x, std::size_t k) {
    // [x, a_k]
    std::vector<Rational> out(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      auto b = lieBracket(g, i, k);
      for (std::size_t q = 0; q < d; ++q) out[q] += x[i] * b[q];
    }
    return out;
  };
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z) {
        // [[x,y],z] + [[y,z],x] + [[z,x],y]
        auto s1 = br(lieBracket(g, x, y), z);
        auto s2 = br(lieBracket(g, y, z), x);
        auto s3 = br(lieBracket(g, z, x), y);
        for (std::size_t q = 0; q < d; ++q)
          if (s1[q] + s2[q] + s3[q] != 0) return false;
      }
  return true;
}

/// Loop algebra: N = (1,...,1), a_i[0]a_j = [a_i, a_j] for i > j.
inline LieConformalSpec loopConformal(const LieAlgebraSpec& g, std::size_t n) {
  if (!validateLie(g)) throw std::invalid_argument("not a Lie algebra (antisymmetry or Jacobi fails)");
  MultiIndex N(n);
  for (std::size_t t = 0; t < n; ++t) N[t] = 1;
  LieConformalSpec L{AlgebraSignature(g.basis, N), {}};
  const MultiIndex z = MultiIndex::zero(n);
  for (std::size_t i = 0; i < g.basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      auto v = lieBracket(g, i, j);
      Polynomial p;
      for (std::size_t k = 0; k < v.size(); ++k) p.add(Word(static_cast<Gen>(k), z), v[k]);
      if (!p.isZero()) L.table[{static_cast<Gen>(i), static_cast<Gen>(j), z}] = p;
    }
  return L;
}

}  // namespace confalg
