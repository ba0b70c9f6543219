#pragma once

// Multi-indices in Z_+^n, rational scalars and the combinatorial
// coefficients used by the multiplication engine.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace confalg {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Raised when two multi-indices (or words) of different arity meet.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An element of Z^n with small inline storage. Components are normally
/// non-negative; intermediate differences may go negative.
class MultiIndex {
 public:
  static constexpr std::size_t kMaxArity = 8;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : n_(check_arity(n)) {}
  MultiIndex(std::initializer_list<int> xs) : n_(check_arity(xs.size())) {
    std::copy(xs.begin(), xs.end(), c_.begin());
  }
  explicit MultiIndex(const std::vector<int>& xs) : n_(check_arity(xs.size())) {
    std::copy(xs.begin(), xs.end(), c_.begin());
  }

  static MultiIndex zero(std::size_t n) { return MultiIndex(n); }
  static MultiIndex unit(std::size_t n, std::size_t t) {
    MultiIndex e(n);
    e[t] = 1;
    return e;
  }

  std::size_t size() const { return n_; }
  int& operator[](std::size_t t) { return c_[t]; }
  int operator[](std::size_t t) const { return c_[t]; }
  const int* begin() const { return c_.data(); }
  const int* end() const { return c_.data() + n_; }

  bool isZero() const {
    return std::all_of(begin(), end(), [](int x) { return x == 0; });
  }
  bool isNonNegative() const {
    return std::all_of(begin(), end(), [](int x) { return x >= 0; });
  }
  long total() const {
    long s = 0;
    for (int x : *this) s += x;
    return s;
  }

  /// Componentwise order: every a_t <= b_t.
  bool leq(const MultiIndex& o) const {
    same_arity(o);
    for (std::size_t t = 0; t < n_; ++t)
      if (c_[t] > o.c_[t]) return false;
    return true;
  }

  MultiIndex& operator+=(const MultiIndex& o) {
    same_arity(o);
    for (std::size_t t = 0; t < n_; ++t) c_[t] += o.c_[t];
    return *this;
  }
  MultiIndex& operator-=(const MultiIndex& o) {
    same_arity(o);
    for (std::size_t t = 0; t < n_; ++t) c_[t] -= o.c_[t];
    return *this;
  }
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

  /// Componentwise max(a - b, 0).
  friend MultiIndex positivePart(const MultiIndex& a, const MultiIndex& b) {
    a.same_arity(b);
    MultiIndex r(a.n_);
    for (std::size_t t = 0; t < a.n_; ++t) r[t] = std::max(a[t] - b[t], 0);
    return r;
  }

  /// Lexicographic order, the order used inside the word order.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    a.same_arity(b);
    for (std::size_t t = 0; t < a.n_; ++t)
      if (a.c_[t] != b.c_[t]) return a.c_[t] <=> b.c_[t];
    return std::strong_ordering::equal;
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return (a <=> b) == 0;
  }

  std::size_t hash() const {
    std::size_t h = n_;
    for (int x : *this) h = h * 1000003u ^ static_cast<std::size_t>(x + 0x9e37);
    return h;
  }

  std::string str(const char* open = "(", const char* close = ")") const {
    std::string s = open;
    for (std::size_t t = 0; t < n_; ++t) {
      if (t) s += ",";
      s += std::to_string(c_[t]);
    }
    return s + close;
  }

 private:
  static std::uint8_t check_arity(std::size_t n) {
    if (n > kMaxArity) throw DimensionError("arity exceeds " + std::to_string(kMaxArity));
    return static_cast<std::uint8_t>(n);
  }
  void same_arity(const MultiIndex& o) const {
    if (n_ != o.n_)
      throw DimensionError("multi-index arity mismatch: " + std::to_string(n_) +
                           " vs " + std::to_string(o.n_));
  }

  std::array<int, kMaxArity> c_{};
  std::uint8_t n_ = 0;
};

/// Locality test: m_t < N_t for every coordinate.
inline bool isValidIndex(const MultiIndex& m, const MultiIndex& N) {
  if (m.size() != N.size()) throw DimensionError("index and locality arity differ");
  for (std::size_t t = 0; t < m.size(); ++t)
    if (m[t] < 0 || m[t] >= N[t]) return false;
  return true;
}

/// (-1)^{|s|}
inline int signOf(const MultiIndex& s) { return (s.total() % 2 == 0) ? 1 : -1; }

/// m(m-1)...(m-i+1); 1 when i == 0.
inline BigInt fallingFactorial(long m, long i) {
  if (i < 0) throw std::invalid_argument("fallingFactorial: negative order");
  BigInt r = 1;
  for (long k = 0; k < i; ++k) r *= m - k;
  return r;
}

/// Product of fallingFactorial over coordinates.
inline BigInt fallingFactorial(const MultiIndex& m, const MultiIndex& i) {
  if (m.size() != i.size()) throw DimensionError("fallingFactorial arity mismatch");
  BigInt r = 1;
  for (std::size_t t = 0; t < m.size(); ++t) r *= fallingFactorial(m[t], i[t]);
  return r;
}

inline BigInt binomial(long m, long s) {
  if (s < 0 || m < 0 || s > m) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(s));
  return r;
}

/// Product of componentwise binomials; zero unless 0 <= s <= m.
inline BigInt binomMulti(const MultiIndex& m, const MultiIndex& s) {
  if (m.size() != s.size()) throw DimensionError("binomMulti arity mismatch");
  BigInt r = 1;
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (s[t] < 0 || s[t] > m[t]) return 0;
    r *= binomial(m[t], s[t]);
  }
  return r;
}

/// s! = product of s_t!
inline BigInt factorialMulti(const MultiIndex& s) {
  BigInt r = 1;
  for (int x : s) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(x));
    r *= f;
  }
  return r;
}

/// Calls fn(s) for every s with lo <= s < hi componentwise, in lexicographic order.
template <class Fn>
void forEachInBox(const MultiIndex& lo, const MultiIndex& hi, Fn&& fn) {
  const std::size_t n = lo.size();
  for (std::size_t t = 0; t < n; ++t)
    if (lo[t] >= hi[t]) return;
  MultiIndex s = lo;
  while (true) {
    fn(static_cast<const MultiIndex&>(s));
    std::size_t t = n;
    while (t > 0) {
      --t;
      if (++s[t] < hi[t]) break;
      s[t] = lo[t];
      if (t == 0) return;
    }
    if (n == 0) return;
  }
}

/// Every s with 0 <= s <= m.
template <class Fn>
void forEachBelow(const MultiIndex& m, Fn&& fn) {
  MultiIndex hi = m;
  for (std::size_t t = 0; t < hi.size(); ++t) hi[t] += 1;
  forEachInBox(MultiIndex::zero(m.size()), hi, std::forward<Fn>(fn));
}

}  // namespace confalg

template <>
struct std::hash<confalg::MultiIndex> {
  std::size_t operator()(const confalg::MultiIndex& m) const noexcept { return m.hash(); }
};
