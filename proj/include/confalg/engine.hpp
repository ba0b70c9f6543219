#pragma once

// Multiplication and derivation on normal words. Every product is computed
// by the reduction rules of the free algebra: left-associativity is
// unfolded, D-powers are pushed to the tail, and invalid labels are
// rewritten into valid ones.

#include "confalg/freealg.hpp"

#include <atomic>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace confalg {

/// A structural guarantee of the algorithms failed; this is a bug, not bad input.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

class Engine {
 public:
  explicit Engine(AlgebraSignature sig, bool memoize = true)
      : sig_(std::move(sig)), memo_(memoize ? std::make_shared<Memo>() : nullptr) {
#ifndef NDEBUG
    checks_->enabled = true;
#endif
  }

  const AlgebraSignature& signature() const { return sig_; }
  std::size_t arity() const { return sig_.arity(); }

  /// Index-sum conservation and D-free closure, asserted on each product.
  void setInvariantChecks(bool on) const { checks_->enabled = on; }
  bool invariantChecks() const { return checks_->enabled; }
  std::uint64_t invariantChecksPerformed() const { return checks_->performed; }

  Word gen(Gen g) const { return Word::generator(g, arity()); }
  Polynomial genPoly(Gen g) const { return Polynomial(gen(g)); }

  /// a<m>P for a generator a, any m in Z_+^n and P a combination of normal words.
  Polynomial mulPrefix(Gen a, const MultiIndex& m, const Polynomial& p) const {
    Polynomial out;
    for (const auto& [w, c] : p) out.addScaled(mulPrefixWord(a, m, w), c);
    return out;
  }

  /// [u<m>v] for normal words u, v and any m.
  Polynomial mulWords(const Word& u, const MultiIndex& m, const Word& v) const {
    checkArity(m);
    if (memo_) {
      if (auto hit = memo_->words.find(WordsKey{u, m, v})) return *hit;
    }
    Polynomial out;
    if (u.length() == 1) {
      // D^i a <m> v
      const MultiIndex& i = u.tailD;
      if (i.leq(m)) {
        BigInt coef = fallingFactorial(m, i);
        if (signOf(i) < 0) coef = -coef;
        if (coef != 0) out.addScaled(mulPrefixWord(u.tail, m - i, v), Rational(coef));
      }
    } else {
      // a<m'>u1 <m> v = sum_s (-1)^s C(m',s) a<m'-s>(u1<m+s>v)
      const Gen a = u.links.front().gen;
      const MultiIndex& mp = u.links.front().label;
      const Word u1 = u.suffixFrom(1);
      forEachBelow(mp, [&](const MultiIndex& s) {
        Rational c(binomMulti(mp, s) * signOf(s));
        out.addScaled(mulPrefix(a, mp - s, mulWords(u1, m + s, v)), c);
      });
    }
    if (checks_->enabled) {
      MultiIndex expect = u.indexSum() + m + v.indexSum();
      checkProduct(out, u.length() + v.length(), expect, u.isDFree() && v.isDFree(), "mulWords");
    }
    if (memo_) memo_->words.insert(WordsKey{u, m, v}, out);
    return out;
  }

  /// [P<m>Q], bilinear extension of mulWords.
  Polynomial mulPoly(const Polynomial& p, const MultiIndex& m, const Polynomial& q) const {
    Polynomial out;
    for (const auto& [u, a] : p)
      for (const auto& [v, b] : q) out.addScaled(mulWords(u, m, v), a * b);
    return out;
  }

  /// D_t P, with t a coordinate in [0, n).
  Polynomial derive(std::size_t t, const Polynomial& p) const {
    if (t >= arity()) throw DimensionError("derivation coordinate out of range");
    Polynomial out;
    for (const auto& [w, c] : p) out.addScaled(deriveWord(t, w), c);
    return out;
  }

  /// D^i P.
  Polynomial deriveMulti(const MultiIndex& i, const Polynomial& p) const {
    checkArity(i);
    if (!i.isNonNegative()) throw std::invalid_argument("negative derivation exponent");
    Polynomial out = p;
    for (std::size_t t = 0; t < i.size(); ++t)
      for (int k = 0; k < i[t]; ++k) out = derive(t, out);
    return out;
  }

  Polynomial normalizeExpr(const ExprTree& e) const {
    if (e.isLeaf()) {
      const auto& l = e.asLeaf();
      checkArity(l.d);
      if (l.gen >= sig_.generatorCount()) throw SignatureError("unknown generator index");
      if (!l.d.isNonNegative()) throw std::invalid_argument("negative derivation exponent");
      return Polynomial(Word(l.gen, l.d));
    }
    const auto& n = e.asNode();
    if (!n.label.isNonNegative()) throw std::invalid_argument("negative label");
    return mulPoly(normalizeExpr(*n.left), n.label, normalizeExpr(*n.right));
  }

  Polynomial normalize(const LinearExpr& e) const {
    Polynomial out;
    for (const auto& [c, t] : e) out.addScaled(normalizeExpr(t), c);
    return out;
  }

  /// Words of length |u| prefixed by a<m>: the single-word case of mulPrefix.
  Polynomial mulPrefixWord(Gen a, const MultiIndex& m, const Word& u) const {
    checkArity(m);
    if (sig_.valid(m)) return Polynomial(u.prepend(a, m));
    if (memo_) {
      if (auto hit = memo_->prefix.find(PrefixKey{a, m, u})) return *hit;
    }
    Polynomial out;
    if (u.length() == 1) {
      if (!u.tailD.isZero()) {
        // a<m>D_t X = D_t(a<m>X) + m_t a<m-e_t>X, X = D^{i-e_t} b
        std::size_t t = 0;
        while (u.tailD[t] == 0) ++t;
        const MultiIndex et = MultiIndex::unit(arity(), t);
        const Word x(u.tail, u.tailD - et);
        out = derive(t, mulPrefixWord(a, m, x));
        if (m[t] > 0) out.addScaled(mulPrefixWord(a, m - et, x), m[t]);
      }
    } else {
      // a<m>(b<m'>v) = -sum_{s != 0} (-1)^s C(m,s) a<m-s>(b<m'+s>v)
      const Gen b = u.links.front().gen;
      const MultiIndex& mp = u.links.front().label;
      const Word v = u.suffixFrom(1);
      forEachBelow(m, [&](const MultiIndex& s) {
        if (s.isZero()) return;
        Rational c(binomMulti(m, s) * -signOf(s));
        out.addScaled(mulPrefix(a, m - s, mulPrefixWord(b, mp + s, v)), c);
      });
    }
    if (checks_->enabled) {
      checkProduct(out, u.length() + 1, u.indexSum() + m, u.isDFree(), "mulPrefix");
    }
    if (memo_) memo_->prefix.insert(PrefixKey{a, m, u}, out);
    return out;
  }

  /// D_t applied to one normal word.
  Polynomial deriveWord(std::size_t t, const Word& w) const {
    if (w.length() == 1) {
      Word r = w;
      r.tailD[t] += 1;
      return Polynomial(r);
    }
    if (memo_) {
      if (auto hit = memo_->derive.find(DeriveKey{t, w})) return *hit;
    }
    // D_t(a<m>v) = -m_t a<m-e_t>v + a<m>D_t v
    Polynomial out;
    const Link& head = w.links.front();
    const Word v = w.suffixFrom(1);
    if (head.label[t] > 0) {
      Word lowered = w;
      lowered.links.front().label[t] -= 1;
      out.add(lowered, -head.label[t]);
    }
    for (const auto& [x, c] : deriveWord(t, v)) out.add(x.prepend(head.gen, head.label), c);
    if (memo_) memo_->derive.insert(DeriveKey{t, w}, out);
    return out;
  }

  void clearMemo() const {
    if (memo_) memo_->clear();
  }

 private:
  struct PrefixKey {
    Gen a;
    MultiIndex m;
    Word u;
    bool operator==(const PrefixKey&) const = default;
  };
  struct WordsKey {
    Word u;
    MultiIndex m;
    Word v;
    bool operator==(const WordsKey&) const = default;
  };
  struct DeriveKey {
    std::size_t t;
    Word w;
    bool operator==(const DeriveKey&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const PrefixKey& k) const { return k.a * 131u ^ k.m.hash() * 7u ^ k.u.hash(); }
    std::size_t operator()(const WordsKey& k) const { return k.u.hash() * 31u ^ k.m.hash() * 7u ^ k.v.hash(); }
    std::size_t operator()(const DeriveKey& k) const { return k.t * 17u ^ k.w.hash(); }
  };

  template <class K>
  class Table {
   public:
    std::optional<Polynomial> find(const K& k) const {
      std::shared_lock lock(mu_);
      auto it = map_.find(k);
      if (it == map_.end()) return std::nullopt;
      return it->second;
    }
    void insert(const K& k, const Polynomial& p) {
      std::unique_lock lock(mu_);
      map_.emplace(k, p);
    }
    void clear() {
      std::unique_lock lock(mu_);
      map_.clear();
    }

   private:
    mutable std::shared_mutex mu_;
    std::unordered_map<K, Polynomial, KeyHash> map_;
  };

  struct Memo {
    Table<PrefixKey> prefix;
    Table<WordsKey> words;
    Table<DeriveKey> derive;
    void clear() {
      prefix.clear();
      words.clear();
      derive.clear();
    }
  };

  struct Checks {
    std::atomic<bool> enabled{false};
    std::atomic<std::uint64_t> performed{0};
  };

  void checkArity(const MultiIndex& m) const {
    if (m.size() != arity()) throw DimensionError("index arity does not match the signature");
  }

  void checkProduct(const Polynomial& out, std::size_t length, const MultiIndex& sum, bool dFreeInputs,
                    const char* where) const {
    checks_->performed.fetch_add(1, std::memory_order_relaxed);
    for (const auto& [w, c] : out) {
      if (w.length() != length)
        throw InvariantViolation(std::string(where) + ": output length changed");
      if (w.indexSum() != sum)
        throw InvariantViolation(std::string(where) + ": index sum not conserved");
      if (dFreeInputs && !w.isDFree())
        throw InvariantViolation(std::string(where) + ": D-free inputs gave a D-power");
      if (!w.isNormal(sig_)) throw InvariantViolation(std::string(where) + ": non-normal output word");
    }
  }

  AlgebraSignature sig_;
  std::shared_ptr<Memo> memo_;
  std::shared_ptr<Checks> checks_ = std::make_shared<Checks>();
};

}  // namespace confalg
