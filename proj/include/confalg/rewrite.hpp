#pragma once

// Rewriting systems over the free algebra: occurrences of leading words,
// elimination of the leading word, compositions, the Groebner-Shirshov
// check and the completion procedure.

#include "confalg/engine.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <set>
#include <span>
#include <thread>

namespace confalg {

/// A finite list of monic, nonzero polynomials.
class RewriteSystem {
 public:
  RewriteSystem() = default;
  explicit RewriteSystem(const std::vector<Polynomial>& ps) {
    for (const auto& p : ps) add(p);
  }

  std::size_t add(const Polynomial& p) {
    if (p.isZero()) throw std::invalid_argument("rewriting system element is zero");
    elems_.push_back(p.monic());
    return elems_.size() - 1;
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const Polynomial& operator[](std::size_t i) const { return elems_.at(i); }
  const Word& leading(std::size_t i) const { return elems_.at(i).leadingWord(); }
  bool isDFree(std::size_t i) const { return elems_.at(i).isDFree(); }
  const std::vector<Polynomial>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool allDFree() const {
    return std::all_of(elems_.begin(), elems_.end(), [](const Polynomial& p) { return p.isDFree(); });
  }

  friend bool operator==(const RewriteSystem&, const RewriteSystem&) = default;

 private:
  std::vector<Polynomial> elems_;
};

enum class OccurrenceKind { firstKind, secondKind };

/// Where the leading word of element `element` sits inside a word w.
/// firstKind: w = u<m> s <m'> v with s D-free; secondKind: w = u<m> s D^dShift.
struct Occurrence {
  OccurrenceKind kind;
  std::size_t element;
  std::size_t position;     // letter index where the match starts
  std::vector<Link> prefix; // u with its trailing label m
  MultiIndex rightLabel;    // m' (firstKind)
  std::optional<Word> suffix;  // v (firstKind)
  MultiIndex dShift;        // secondKind

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

namespace detail {

/// Letters and internal labels of pattern L agree with w starting at letter p.
inline bool segmentMatches(const Word& w, std::size_t p, const Word& L) {
  const std::size_t l = L.length();
  if (p + l > w.length()) return false;
  for (std::size_t j = 0; j < l; ++j)
    if (w.letter(p + j) != L.letter(j)) return false;
  for (std::size_t j = 0; j + 1 < l; ++j)
    if (w.links[p + j].label != L.links[j].label) return false;
  return true;
}

inline std::vector<Link> linksBefore(const Word& w, std::size_t p) {
  return std::vector<Link>(w.links.begin(), w.links.begin() + static_cast<long>(p));
}

inline Polynomial prefixWith(const Engine& E, const std::vector<Link>& prefix, Polynomial core) {
  for (std::size_t j = prefix.size(); j-- > 0;) core = E.mulPrefix(prefix[j].gen, prefix[j].label, core);
  return core;
}

}  // namespace detail

/// All occurrences of leading words of S in w, ordered by position then element.
inline std::vector<Occurrence> findOccurrences(const Word& w, const RewriteSystem& S) {
  std::vector<Occurrence> out;
  const std::size_t k = w.length();
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t e = 0; e < S.size(); ++e) {
      const Word& L = S.leading(e);
      if (L.arity() != w.arity()) throw DimensionError("word and system of different arity");
      const std::size_t l = L.length();
      if (p + l > k || !detail::segmentMatches(w, p, L)) continue;
      if (p + l == k) {
        if (!L.tailD.leq(w.tailD)) continue;
        out.push_back({OccurrenceKind::secondKind, e, p, detail::linksBefore(w, p),
                       MultiIndex::zero(w.arity()), std::nullopt, w.tailD - L.tailD});
      } else {
        if (!S.isDFree(e)) continue;
        out.push_back({OccurrenceKind::firstKind, e, p, detail::linksBefore(w, p),
                       w.links[p + l - 1].label, w.suffixFrom(p + l), MultiIndex::zero(w.arity())});
      }
    }
  }
  return out;
}

/// The normal S-word of an occurrence: [u<m> s <m'> v] or [u<m> D^i s].
inline Polynomial buildSWord(const Engine& E, const Polynomial& s, const Occurrence& occ) {
  Polynomial core;
  if (occ.kind == OccurrenceKind::firstKind)
    core = E.mulPoly(s, occ.rightLabel, Polynomial(*occ.suffix));
  else
    core = E.deriveMulti(occ.dShift, s);
  return detail::prefixWith(E, occ.prefix, std::move(core));
}

struct ReductionStep {
  Word word;           // the eliminated word
  Occurrence occurrence;
  Rational coefficient;
};

/// Input = remainder + sum of coefficient * S-word over the steps.
struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

struct ReductionResult {
  Polynomial remainder;
  ReductionTrace trace;
};

/// Picks one of the (non-empty) occurrences in a word; the default is the leftmost.
using OccurrenceChooser = std::function<std::size_t(std::span<const Occurrence>)>;

/// Elimination of the leading word: repeatedly subtract from the greatest
/// reducible term the matching S-word. The remainder is S-irreducible.
inline ReductionResult reduce(const Engine& E, const Polynomial& p, const RewriteSystem& S,
                              const OccurrenceChooser& choose = nullptr, bool keepTrace = true) {
  ReductionResult res;
  Polynomial work = p;
  while (!work.isZero()) {
    const Word w = work.leadingWord();
    const Rational c = work.leadingCoefficient();
    auto occs = findOccurrences(w, S);
    if (occs.empty()) {
      res.remainder.add(w, c);
      work.add(w, -c);
      continue;
    }
    std::size_t pick = choose ? choose(occs) : 0;
    if (pick >= occs.size()) throw std::out_of_range("occurrence chooser out of range");
    const Occurrence& occ = occs[pick];
    Polynomial sw = buildSWord(E, S[occ.element], occ);
    if (sw.isZero() || sw.leadingWord() != w || sw.leadingCoefficient() != 1)
      throw InvariantViolation("S-word leading term differs from the occurrence word");
    work.addScaled(sw, -c);
    if (keepTrace) res.trace.steps.push_back({w, occ, c});
  }
  return res;
}

/// Rebuilds the input of a reduction from its trace.
inline Polynomial replayTrace(const Engine& E, const ReductionResult& r, const RewriteSystem& S) {
  Polynomial out = r.remainder;
  for (const auto& st : r.trace.steps)
    out.addScaled(buildSWord(E, S[st.occurrence.element], st.occurrence), st.coefficient);
  return out;
}

inline bool isTrivial(const Engine& E, const Polynomial& p, const RewriteSystem& S) {
  return reduce(E, p, S, nullptr, false).remainder.isZero();
}

inline bool idealMembership(const Engine& E, const Polynomial& p, const RewriteSystem& S) {
  return isTrivial(E, p, S);
}

/// A box M such that a<m>f = 0 and f<m>b = 0 whenever some m_t >= M_t.
inline MultiIndex multiplicationBounds(const AlgebraSignature& sig, const Polynomial& f) {
  const std::size_t n = sig.arity();
  const MultiIndex& N = sig.locality();
  MultiIndex M = N;
  if (f.isZero()) return M;
  const long deg = static_cast<long>(f.degree());
  for (std::size_t t = 0; t < n; ++t) {
    long maxTail = 0, minLink = -1;
    for (const auto& [w, c] : f) {
      maxTail = std::max<long>(maxTail, w.tailD[t]);
      long ls = w.linkSum()[t];
      if (minLink < 0 || ls < minLink) minLink = ls;
    }
    long b = deg * (N[t] - 1) + maxTail + 1 - minLink;
    M[t] = static_cast<int>(std::max<long>(b, N[t]));
  }
  return M;
}

enum class CompositionKind { inclusion, rightInclusion, intersection, leftMultiplication, rightMultiplication };

inline const char* kindName(CompositionKind k) {
  switch (k) {
    case CompositionKind::inclusion: return "inclusion";
    case CompositionKind::rightInclusion: return "rightInclusion";
    case CompositionKind::intersection: return "intersection";
    case CompositionKind::leftMultiplication: return "leftMultiplication";
    case CompositionKind::rightMultiplication: return "rightMultiplication";
  }
  return "?";
}

/// One composition to evaluate. `w` is the ambient word (for the
/// multiplication kinds a pseudo-word, possibly with an invalid label,
/// used only for ordering).
struct CompositionTask {
  CompositionKind kind;
  std::size_t first = 0;
  std::size_t second = 0;
  Word w;
  std::vector<Link> prefix;    // u (with trailing label) applied to the second operand
  MultiIndex label;            // inclusion: m'; intersection: m; multiplications: m
  std::optional<Word> suffix;  // inclusion, intersection: v
  MultiIndex alpha, beta;      // right inclusion
  Gen generator = 0;           // multiplications

  friend bool operator<(const CompositionTask& a, const CompositionTask& b) {
    if (auto c = compareWords(a.w, b.w); c != 0) return c < 0;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.first != b.first) return a.first < b.first;
    if (a.second != b.second) return a.second < b.second;
    if (a.prefix.size() != b.prefix.size()) return a.prefix.size() < b.prefix.size();
    if (a.generator != b.generator) return a.generator < b.generator;
    return a.label < b.label;
  }
};

/// Inclusion, right-inclusion and intersection compositions of the ordered pair (S[i], S[j]).
inline std::vector<CompositionTask> overlapCompositions(const RewriteSystem& S, std::size_t i, std::size_t j) {
  std::vector<CompositionTask> out;
  const Word& F = S.leading(i);
  const Word& G = S.leading(j);
  const std::size_t lf = F.length(), lg = G.length();
  const std::size_t n = F.arity();
  const MultiIndex z = MultiIndex::zero(n);

  if (S.isDFree(j) && lg < lf) {
    for (std::size_t p = 0; p + lg < lf; ++p) {
      if (!detail::segmentMatches(F, p, G)) continue;
      CompositionTask t{CompositionKind::inclusion, i, j, F, detail::linksBefore(F, p),
                        F.links[p + lg - 1].label, F.suffixFrom(p + lg), z, z, 0};
      out.push_back(std::move(t));
    }
  }

  if (lg <= lf) {
    const std::size_t p = lf - lg;
    const bool selfTrivial = (i == j && p == 0);
    const bool mirrored = (p == 0 && i > j);
    if (!selfTrivial && !mirrored && detail::segmentMatches(F, p, G)) {
      MultiIndex alpha = positivePart(G.tailD, F.tailD);
      MultiIndex beta = positivePart(F.tailD, G.tailD);
      Word w = F;
      w.tailD += alpha;
      out.push_back({CompositionKind::rightInclusion, i, j, w, detail::linksBefore(F, p), z,
                     std::nullopt, alpha, beta, 0});
    }
  }

  if (S.isDFree(i)) {
    for (std::size_t ov = 1; ov < std::min(lf, lg); ++ov) {
      const std::size_t p = lf - ov;
      bool ok = true;
      for (std::size_t q = 0; q < ov && ok; ++q) ok = F.letter(p + q) == G.letter(q);
      for (std::size_t q = 0; q + 1 < ov && ok; ++q) ok = F.links[p + q].label == G.links[q].label;
      if (!ok) continue;
      Word w;
      w.links = F.links;
      w.links.push_back({F.tail, G.links[ov - 1].label});
      w.links.insert(w.links.end(), G.links.begin() + static_cast<long>(ov), G.links.end());
      w.tail = G.tail;
      w.tailD = G.tailD;
      out.push_back({CompositionKind::intersection, i, j, w, detail::linksBefore(F, p),
                     G.links[ov - 1].label, G.suffixFrom(ov), z, z, 0});
    }
  }
  return out;
}

/// Left multiplications a<m>f (m invalid) and, for non-D-free f, right multiplications f<m>a, m in the box.
inline std::vector<CompositionTask> multiplicationCompositions(const AlgebraSignature& sig, const RewriteSystem& S,
                                                               std::size_t i) {
  std::vector<CompositionTask> out;
  const Polynomial& f = S[i];
  const Word& F = f.leadingWord();
  const MultiIndex M = multiplicationBounds(sig, f);
  const MultiIndex z = sig.zero();
  for (Gen a = 0; a < sig.generatorCount(); ++a) {
    forEachInBox(z, M, [&](const MultiIndex& m) {
      if (sig.valid(m)) return;
      out.push_back({CompositionKind::leftMultiplication, i, i, F.prepend(a, m), {}, m, std::nullopt, z, z, a});
    });
  }
  if (!f.isDFree()) {
    for (Gen a = 0; a < sig.generatorCount(); ++a) {
      forEachInBox(z, M, [&](const MultiIndex& m) {
        Word w = F;
        w.links.push_back({F.tail, m});
        w.tail = a;
        w.tailD = z;
        out.push_back({CompositionKind::rightMultiplication, i, i, w, {}, m, std::nullopt, z, z, a});
      });
    }
  }
  return out;
}

/// Every composition of S, sorted.
inline std::vector<CompositionTask> allCompositions(const AlgebraSignature& sig, const RewriteSystem& S) {
  std::vector<CompositionTask> out;
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = 0; j < S.size(); ++j) {
      auto ts = overlapCompositions(S, i, j);
      out.insert(out.end(), ts.begin(), ts.end());
    }
    auto ms = multiplicationCompositions(sig, S, i);
    out.insert(out.end(), ms.begin(), ms.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The composition polynomial. For the overlap kinds its leading word is below w.
inline Polynomial evalComposition(const Engine& E, const RewriteSystem& S, const CompositionTask& t) {
  const Polynomial& f = S[t.first];
  const Polynomial& g = S[t.second];
  Polynomial r;
  switch (t.kind) {
    case CompositionKind::inclusion: {
      Polynomial sub = detail::prefixWith(E, t.prefix, E.mulPoly(g, t.label, Polynomial(*t.suffix)));
      r = f - sub;
      break;
    }
    case CompositionKind::rightInclusion:
      r = E.deriveMulti(t.alpha, f) - detail::prefixWith(E, t.prefix, E.deriveMulti(t.beta, g));
      break;
    case CompositionKind::intersection:
      r = E.mulPoly(f, t.label, Polynomial(*t.suffix)) - detail::prefixWith(E, t.prefix, g);
      break;
    case CompositionKind::leftMultiplication:
      return E.mulPrefix(t.generator, t.label, f);
    case CompositionKind::rightMultiplication:
      return E.mulPoly(f, t.label, E.genPoly(t.generator));
  }
  if (!r.isZero() && compareWords(r.leadingWord(), t.w) >= 0)
    throw InvariantViolation(std::string(kindName(t.kind)) + " composition did not cancel its word");
  return r;
}

struct CompositionFailure {
  CompositionTask task;
  Polynomial composition;
  Polynomial remainder;
};

struct GSBReport {
  std::vector<CompositionFailure> failures;
  std::size_t checked = 0;
  /// False when S has non-D-free elements: reduction to zero is then only
  /// a sufficient test, so a failure may be spurious.
  bool dFree = true;
  bool ok() const { return failures.empty(); }
};

namespace detail {

/// Evaluates fn(k) for k in [0, count) on up to `threads` workers; results keep index order.
template <class R, class Fn>
std::vector<R> parallelMap(std::size_t count, unsigned threads, Fn fn) {
  std::vector<R> out(count);
  if (threads <= 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) out[k] = fn(k);
    }));
  for (auto& f : workers) f.get();
  return out;
}

}  // namespace detail

/// Checks that every composition of S reduces to zero modulo S.
inline GSBReport checkGSB(const Engine& E, const RewriteSystem& S, unsigned threads = 1) {
  GSBReport rep;
  rep.dFree = S.allDFree();
  const auto tasks = allCompositions(E.signature(), S);
  rep.checked = tasks.size();
  auto results = detail::parallelMap<std::optional<CompositionFailure>>(tasks.size(), threads, [&](std::size_t k) {
    Polynomial c = evalComposition(E, S, tasks[k]);
    Polynomial r = reduce(E, c, S, nullptr, false).remainder;
    if (r.isZero()) return std::optional<CompositionFailure>{};
    return std::optional<CompositionFailure>{CompositionFailure{tasks[k], c, r}};
  });
  for (auto& r : results)
    if (r) rep.failures.push_back(std::move(*r));
  return rep;
}

/// Repeatedly reduces each element modulo the others, drops zeros and
/// makes everything monic. Output is sorted by leading word.
inline RewriteSystem interreduce(const Engine& E, const RewriteSystem& S) {
  std::vector<Polynomial> cur;
  for (const auto& p : S)
    if (!p.isZero()) cur.push_back(p.monic());
  auto byLead = [](const Polynomial& a, const Polynomial& b) {
    auto c = compareWords(a.leadingWord(), b.leadingWord());
    if (c != 0) return c < 0;
    return a.size() < b.size();
  };
  bool changed = true;
  while (changed) {
    changed = false;
    std::stable_sort(cur.begin(), cur.end(), byLead);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      RewriteSystem others;
      for (std::size_t q = 0; q < cur.size(); ++q)
        if (q != k) others.add(cur[q]);
      Polynomial r = reduce(E, cur[k], others, nullptr, false).remainder;
      if (r == cur[k]) continue;
      if (r.isZero())
        cur.erase(cur.begin() + static_cast<long>(k));
      else
        cur[k] = r.monic();
      changed = true;
      break;
    }
  }
  return RewriteSystem(cur);
}

struct CompletionLimits {
  std::size_t maxDegree = 12;
  std::size_t maxElements = 256;
  std::size_t maxSteps = 200000;
};

enum class CompletionStatus { complete, boundedComplete, limitReached };

inline const char* statusName(CompletionStatus s) {
  switch (s) {
    case CompletionStatus::complete: return "complete";
    case CompletionStatus::boundedComplete: return "boundedComplete";
    case CompletionStatus::limitReached: return "limitReached";
  }
  return "?";
}

struct CompletionResult {
  RewriteSystem system;
  CompletionStatus status = CompletionStatus::complete;
  std::size_t steps = 0;
  std::size_t added = 0;
};

/// Buchberger-style completion. Compositions are processed in increasing
/// order of their ambient word; nontrivial remainders join S. Compositions
/// whose word is longer than maxDegree are deferred, which yields
/// boundedComplete.
inline CompletionResult complete(const Engine& E, const RewriteSystem& S0, const CompletionLimits& lim = {}) {
  if (lim.maxDegree == 0 || lim.maxElements == 0 || lim.maxSteps == 0)
    throw std::invalid_argument("completion limits must be positive");
  CompletionResult res;
  RewriteSystem S = interreduce(E, S0);
  std::set<CompositionTask> queue;
  auto enqueueFor = [&](std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      for (auto& t : overlapCompositions(S, k, j)) queue.insert(std::move(t));
      if (j != k)
        for (auto& t : overlapCompositions(S, j, k)) queue.insert(std::move(t));
    }
    for (auto& t : multiplicationCompositions(E.signature(), S, k)) queue.insert(std::move(t));
  };
  for (std::size_t k = 0; k < S.size(); ++k) enqueueFor(k);

  bool deferred = false, limited = false;
  while (!queue.empty()) {
    CompositionTask t = *queue.begin();
    queue.erase(queue.begin());
    if (t.w.length() > lim.maxDegree) {
      deferred = true;
      continue;
    }
    if (res.steps >= lim.maxSteps) {
      limited = true;
      break;
    }
    ++res.steps;
    Polynomial r = reduce(E, evalComposition(E, S, t), S, nullptr, false).remainder;
    if (r.isZero()) continue;
    if (S.size() >= lim.maxElements) {
      limited = true;
      break;
    }
    enqueueFor(S.add(r));
    ++res.added;
  }
  res.system = interreduce(E, S);
  res.status = limited ? CompletionStatus::limitReached
                       : (deferred ? CompletionStatus::boundedComplete : CompletionStatus::complete);
  return res;
}

namespace detail {

/// Calls fn(links, tail) for every normal word with `len` letters (tail exponent zero).
template <class Fn>
void forEachPlainWord(const AlgebraSignature& sig, std::size_t len, Fn&& fn) {
  if (len == 0) return;
  const auto labels = sig.validLabels();
  std::vector<Link> links(len - 1, Link{0, sig.zero()});
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j + 1 == len) {
      for (Gen b = 0; b < sig.generatorCount(); ++b) fn(links, b);
      return;
    }
    for (Gen a = 0; a < sig.generatorCount(); ++a)
      for (const auto& m : labels) {
        links[j] = {a, m};
        rec(j + 1);
      }
  };
  rec(0);
}

}  // namespace detail

/// Whether h is a combination of normal S-words whose leading words lie
/// below w, with tail exponents of the S-words bounded by tailBound.
/// Exact linear algebra; a true answer is always sound.
inline bool trivialModSW(const Engine& E, const Polynomial& h, const RewriteSystem& S, const Word& w,
                         const MultiIndex& tailBound) {
  const AlgebraSignature& sig = E.signature();
  const MultiIndex z = sig.zero();
  MultiIndex tailHi = tailBound;
  for (std::size_t t = 0; t < tailHi.size(); ++t) tailHi[t] += 1;
  std::map<Word, Polynomial, WordDescending> pivots;
  auto insertRow = [&](Polynomial r) {
    while (!r.isZero()) {
      auto it = pivots.find(r.leadingWord());
      if (it == pivots.end()) {
        Word lead = r.leadingWord();
        pivots.emplace(std::move(lead), r.monic());
        return;
      }
      r.addScaled(it->second, -r.leadingCoefficient());
    }
  };
  auto below = [&](const Word& x) { return compareWords(x, w) < 0; };
  for (std::size_t e = 0; e < S.size(); ++e) {
    const Polynomial& s = S[e];
    const Word& L = s.leadingWord();
    for (std::size_t k = L.length(); k <= w.length(); ++k) {
      const std::size_t rest = k - L.length();
      // second kind: u<m> D^i s, u has `rest` letters
      auto secondKind = [&](const std::vector<Link>& prefix) {
        forEachInBox(z, tailHi, [&](const MultiIndex& i) {
          Word lead(prefix, L.tail, L.tailD + i);
          lead.links.insert(lead.links.end(), L.links.begin(), L.links.end());
          if (!below(lead)) return;
          insertRow(detail::prefixWith(E, prefix, E.deriveMulti(i, s)));
        });
      };
      if (rest == 0) {
        secondKind({});
      } else {
        detail::forEachPlainWord(sig, rest, [&](const std::vector<Link>& ls, Gen last) {
          std::vector<Link> prefix = ls;
          for (const auto& m : sig.validLabels()) {
            prefix.push_back({last, m});
            secondKind(prefix);
            prefix.pop_back();
          }
        });
      }
      // first kind: u<m> s <m'> v, v nonempty
      if (!s.isDFree() || rest == 0) continue;
      for (std::size_t plen = 0; plen < rest; ++plen) {
        const std::size_t vlen = rest - plen;
        auto withPrefix = [&](const std::vector<Link>& prefix) {
          detail::forEachPlainWord(sig, vlen, [&](const std::vector<Link>& vl, Gen vt) {
            forEachInBox(z, tailHi, [&](const MultiIndex& d) {
              const Word v(vl, vt, d);
              for (const auto& mp : sig.validLabels()) {
                Word lead(prefix, 0, z);
                lead.links.insert(lead.links.end(), L.links.begin(), L.links.end());
                lead.links.push_back({L.tail, mp});
                lead.links.insert(lead.links.end(), v.links.begin(), v.links.end());
                lead.tail = v.tail;
                lead.tailD = v.tailD;
                if (!below(lead)) continue;
                insertRow(detail::prefixWith(E, prefix, E.mulPoly(s, mp, Polynomial(v))));
              }
            });
          });
        };
        if (plen == 0) {
          withPrefix({});
        } else {
          detail::forEachPlainWord(sig, plen, [&](const std::vector<Link>& ls, Gen last) {
            std::vector<Link> prefix = ls;
            for (const auto& m : sig.validLabels()) {
              prefix.push_back({last, m});
              withPrefix(prefix);
              prefix.pop_back();
            }
          });
        }
      }
    }
  }
  Polynomial r = h;
  while (!r.isZero()) {
    auto it = pivots.find(r.leadingWord());
    if (it == pivots.end()) return false;
    r.addScaled(it->second, -r.leadingCoefficient());
  }
  return true;
}

/// Span of general S-words u<m>(D^i s <m'> v) up to a given length, with
/// labels in a box and tail exponents bounded. Rows are echelonized in
/// increasing order of their leading words, so the span of the rows below
/// any word w can be queried afterwards.
class SWordSpan {
 public:
  SWordSpan(const Engine& E, const RewriteSystem& S, std::size_t maxLength, const MultiIndex& tailBound) {
    const AlgebraSignature& sig = E.signature();
    const MultiIndex z = sig.zero();
    MultiIndex tailHi = tailBound;
    for (std::size_t t = 0; t < tailHi.size(); ++t) tailHi[t] += 1;
    std::vector<Polynomial> rows;
    auto push = [&](Polynomial r) {
      if (!r.isZero()) rows.push_back(std::move(r));
    };
    for (const auto& s : S) {
      const std::size_t l = s.degree();
      if (l > maxLength) continue;
      const MultiIndex box = multiplicationBounds(sig, s) + tailBound;
      forEachInBox(z, tailHi, [&](const MultiIndex& i) {
        const Polynomial ds = E.deriveMulti(i, s);
        push(ds);
        if (l + 1 > maxLength) return;
        for (Gen g = 0; g < sig.generatorCount(); ++g)
          forEachInBox(z, box, [&](const MultiIndex& m) {
            const Polynomial left = E.mulPrefix(g, m, ds);
            push(left);
            forEachInBox(z, tailHi, [&](const MultiIndex& j) {
              const Polynomial v = Polynomial(Word(g, j));
              push(E.mulPoly(ds, m, v));
              if (l + 2 > maxLength) return;
              for (Gen h = 0; h < sig.generatorCount(); ++h)
                for (const auto& mp : sig.validLabels()) push(E.mulPrefix(h, mp, E.mulPoly(ds, m, v)));
            });
            if (l + 2 > maxLength) return;
            for (Gen h = 0; h < sig.generatorCount(); ++h)
              forEachInBox(z, box, [&](const MultiIndex& mp) { push(E.mulPrefix(h, mp, left)); });
          });
      });
    }
    std::sort(rows.begin(), rows.end(), [](const Polynomial& a, const Polynomial& b) {
      return compareWords(a.leadingWord(), b.leadingWord()) < 0;
    });
    for (auto& r : rows) {
      const Word source = r.leadingWord();
      while (!r.isZero()) {
        auto it = pivots_.find(r.leadingWord());
        if (it == pivots_.end()) {
          Word lead = r.leadingWord();
          pivots_.emplace(std::move(lead), Pivot{r.monic(), source});
          break;
        }
        r.addScaled(it->second.row, -r.leadingCoefficient());
      }
    }
  }

  /// Whether h lies in the span of the rows whose leading word is below w.
  bool inSpanBelow(const Polynomial& h, const Word& w) const {
    Polynomial r = h;
    while (!r.isZero()) {
      auto it = pivots_.find(r.leadingWord());
      if (it == pivots_.end() || compareWords(it->second.source, w) >= 0) return false;
      r.addScaled(it->second.row, -r.leadingCoefficient());
    }
    return true;
  }

  std::size_t rank() const { return pivots_.size(); }

 private:
  struct Pivot {
    Polynomial row;
    Word source;
  };
  std::map<Word, Pivot, WordDescending> pivots_;
};

/// All S-irreducible normal words of length <= maxLength with tail exponent
/// <= maxTailD, sorted ascending.
inline std::vector<Word> irreducibleWords(const AlgebraSignature& sig, const RewriteSystem& S, std::size_t maxLength,
                                          const MultiIndex& maxTailD) {
  if (maxTailD.size() != sig.arity()) throw DimensionError("tail bound arity");
  std::vector<Word> out;
  const auto labels = sig.validLabels();
  const MultiIndex z = sig.zero();
  MultiIndex tailHi = maxTailD;
  for (std::size_t t = 0; t < tailHi.size(); ++t) tailHi[t] += 1;

  // The tail letter of `w` just became interior: prune on D-free matches ending there.
  auto interiorClash = [&](const Word& w) {
    const std::size_t end = w.length() - 2;
    for (std::size_t e = 0; e < S.size(); ++e) {
      if (!S.isDFree(e)) continue;
      const std::size_t l = S.leading(e).length();
      if (l > end + 1) continue;
      if (detail::segmentMatches(w, end + 1 - l, S.leading(e))) return true;
    }
    return false;
  };

  std::function<void(Word&)> grow = [&](Word& w) {
    forEachInBox(z, tailHi, [&](const MultiIndex& d) {
      Word full = w;
      full.tailD = d;
      if (findOccurrences(full, S).empty()) out.push_back(full);
    });
    if (w.length() >= maxLength) return;
    for (const auto& m : labels) {
      for (Gen b = 0; b < sig.generatorCount(); ++b) {
        Word next = w;
        next.links.push_back({w.tail, m});
        next.tail = b;
        if (interiorClash(next)) continue;
        grow(next);
      }
    }
  };
  if (maxLength >= 1) {
    for (Gen a = 0; a < sig.generatorCount(); ++a) {
      Word w(a, z);
      grow(w);
    }
  }
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return compareWords(a, b) < 0; });
  return out;
}

}  // namespace confalg
