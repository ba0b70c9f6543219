#pragma once

// Command dispatch for the confalg tool. runCommand is a pure function of
// the file contents and arguments; it writes results to `out` and
// diagnostics to `err`.

#include "confalg/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace confalg::cli {

enum ExitCode : int { ok = 0, notGSB = 2, usage = 64, dataError = 65, noInput = 66, software = 70 };

using nlohmann::json;

inline json toJson(const Polynomial& p, const AlgebraSignature& sig) {
  json terms = json::array();
  for (const auto& [w, c] : p) terms.push_back({{"coefficient", formatRational(c)}, {"word", formatWord(w, sig)}});
  return {{"text", formatPolynomial(p, sig)}, {"terms", terms}};
}

inline json toJson(const AlgebraSignature& sig) {
  json loc = json::array();
  for (int x : sig.locality()) loc.push_back(x);
  return {{"n", sig.arity()}, {"locality", loc}, {"generators", sig.generators()}};
}

inline json toJson(const MultiIndex& m) {
  json a = json::array();
  for (int x : m) a.push_back(x);
  return a;
}

inline std::string kindName(OccurrenceKind k) { return k == OccurrenceKind::firstKind ? "first" : "second"; }

inline json toJson(const ReductionTrace& tr, const RewriteSystem& S, const AlgebraSignature& sig) {
  json steps = json::array();
  for (const auto& st : tr.steps) {
    json s = {{"word", formatWord(st.word, sig)},
              {"element", st.occurrence.element},
              {"relation", formatPolynomial(S[st.occurrence.element], sig)},
              {"kind", kindName(st.occurrence.kind)},
              {"position", st.occurrence.position},
              {"coefficient", formatRational(st.coefficient)}};
    if (st.occurrence.kind == OccurrenceKind::secondKind) s["dShift"] = toJson(st.occurrence.dShift);
    steps.push_back(s);
  }
  return steps;
}

inline void printTrace(std::ostream& os, const ReductionTrace& tr, const RewriteSystem& S, const AlgebraSignature& sig) {
  os << "trace: " << tr.steps.size() << " step(s)\n";
  std::size_t k = 0;
  for (const auto& st : tr.steps) {
    os << "  " << ++k << ". " << formatRational(st.coefficient) << " * [" << formatWord(st.word, sig) << "] by #"
       << st.occurrence.element << " (" << formatPolynomial(S[st.occurrence.element], sig) << "), "
       << kindName(st.occurrence.kind) << " kind at " << st.occurrence.position;
    if (st.occurrence.kind == OccurrenceKind::secondKind && !st.occurrence.dShift.isZero())
      os << ", D{" << formatIndex(st.occurrence.dShift) << "}";
    os << "\n";
  }
}

namespace detail {

struct Options {
  bool trace = false, json = false, quiet = false, asIs = false;
  unsigned threads = 1;
  CompletionLimits limits;
  std::string file, expr1, expr2, label;
  std::size_t maxLength = 0, minLength = 2;
  std::string maxTailD = "0";
};

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The relations of a presentation, normalized; zero relations are skipped.
inline RewriteSystem relationSystem(const Engine& E, const Presentation& p) {
  RewriteSystem S;
  for (const auto& [name, e] : p.relations) {
    Polynomial r = E.normalize(e);
    if (!r.isZero()) S.add(r);
  }
  return S;
}

struct Context {
  Presentation pres;
  Engine engine;
  explicit Context(Presentation p) : pres(std::move(p)), engine(pres.signature) {}
  const AlgebraSignature& sig() const { return pres.signature; }
};

}  // namespace detail

/// Runs one command; argv excludes the program name.
inline int runCommand(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Computations in free associative n-conformal algebras", "confalg"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--trace", o.trace, "Print the reduction trace");
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_flag("--quiet", o.quiet, "Suppress diagnostics");
  app.add_option("--threads", o.threads, "Worker threads for checks")->check(CLI::Range(1u, 256u));

  auto addLimits = [&](CLI::App* c) {
    c->add_option("--max-degree", o.limits.maxDegree, "Defer compositions longer than this")->check(CLI::PositiveNumber);
    c->add_option("--max-elements", o.limits.maxElements, "Stop when the system reaches this size")
        ->check(CLI::PositiveNumber);
    c->add_option("--max-steps", o.limits.maxSteps, "Stop after this many compositions")->check(CLI::PositiveNumber);
  };
  auto fileArg = [&](CLI::App* c) { c->add_option("FILE", o.file, "Presentation file")->required(); };

  auto* cNormalize = app.add_subcommand("normalize", "Normal form of an expression");
  fileArg(cNormalize);
  cNormalize->add_option("EXPR", o.expr1)->required();
  auto* cMul = app.add_subcommand("mul", "Product [P<m>Q]");
  fileArg(cMul);
  cMul->add_option("P", o.expr1)->required();
  cMul->add_option("M", o.label)->required();
  cMul->add_option("Q", o.expr2)->required();
  auto* cReduce = app.add_subcommand("reduce", "Reduce an expression modulo the completed relations");
  fileArg(cReduce);
  cReduce->add_option("EXPR", o.expr1)->required();
  cReduce->add_flag("--as-is", o.asIs, "Use the relations without completing them");
  addLimits(cReduce);
  auto* cComplete = app.add_subcommand("complete", "Complete the relations to a Groebner-Shirshov basis");
  fileArg(cComplete);
  addLimits(cComplete);
  auto* cCheck = app.add_subcommand("check", "Check whether the relations form a Groebner-Shirshov basis");
  fileArg(cCheck);
  auto* cBasis = app.add_subcommand("basis", "Irreducible words of the completed relations");
  fileArg(cBasis);
  cBasis->add_option("--max-length", o.maxLength, "Longest word")->required()->check(CLI::PositiveNumber);
  cBasis->add_option("--min-length", o.minLength, "Shortest word (default 2)")->check(CLI::PositiveNumber);
  cBasis->add_option("--max-taild", o.maxTailD, "Tail exponent bound: INT or INT,INT,...");
  cBasis->add_flag("--as-is", o.asIs, "Use the relations without completing them");
  addLimits(cBasis);
  auto* cEq = app.add_subcommand("eq", "Decide equality of two expressions in the quotient");
  fileArg(cEq);
  cEq->add_option("LHS", o.expr1)->required();
  cEq->add_option("RHS", o.expr2)->required();
  cEq->add_flag("--as-is", o.asIs, "Use the relations without completing them");
  addLimits(cEq);
  auto* cEnvelope = app.add_subcommand("envelope", "Universal enveloping presentation of the lie block");
  fileArg(cEnvelope);
  auto* cHalf = app.add_subcommand("halfpbw", "1/2-PBW composition check for the lie block");
  fileArg(cHalf);

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return usage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  auto note = [&](const std::string& s) {
    if (!o.quiet) err << s << "\n";
  };

  try {
    detail::Context ctx(parsePresentation(detail::readFile(o.file)));
    const Engine& E = ctx.engine;
    const AlgebraSignature& sig = ctx.sig();
    json doc = {{"command", name}, {"signature", toJson(sig)}};
    int code = ok;

    auto parseExpr = [&](const std::string& s) { return E.normalize(parseExpression(s, sig)); };
    auto workingSystem = [&](std::optional<CompletionStatus>& status) {
      RewriteSystem S = detail::relationSystem(E, ctx.pres);
      if (o.asIs) return S;
      CompletionResult r = complete(E, S, o.limits);
      status = r.status;
      note(std::string("completion: ") + statusName(r.status) + ", " + std::to_string(r.system.size()) +
           " element(s)");
      return r.system;
    };
    auto emitPoly = [&](const Polynomial& p) {
      doc["result"] = toJson(p, sig);
      if (!o.json) out << formatPolynomial(p, sig) << "\n";
    };

    if (name == "normalize") {
      emitPoly(parseExpr(o.expr1));
    } else if (name == "mul") {
      emitPoly(E.mulPoly(parseExpr(o.expr1), parseIndex(o.label, sig), parseExpr(o.expr2)));
    } else if (name == "reduce") {
      std::optional<CompletionStatus> st;
      RewriteSystem S = workingSystem(st);
      ReductionResult r = reduce(E, parseExpr(o.expr1), S);
      emitPoly(r.remainder);
      if (o.trace) {
        doc["trace"] = toJson(r.trace, S, sig);
        if (!o.json) printTrace(out, r.trace, S, sig);
      }
    } else if (name == "complete") {
      CompletionResult r = complete(E, detail::relationSystem(E, ctx.pres), o.limits);
      json els = json::array();
      for (const auto& p : r.system) {
        els.push_back(toJson(p, sig));
        if (!o.json) out << formatPolynomial(p, sig) << "\n";
      }
      doc["result"] = {{"status", statusName(r.status)}, {"steps", r.steps}, {"elements", els}};
      note(std::string("status: ") + statusName(r.status) + ", " + std::to_string(r.steps) + " composition(s)");
    } else if (name == "check") {
      RewriteSystem S = detail::relationSystem(E, ctx.pres);
      GSBReport rep = checkGSB(E, S, o.threads);
      json fails = json::array();
      for (const auto& f : rep.failures)
        fails.push_back({{"kind", kindName(f.task.kind)},
                         {"first", f.task.first},
                         {"second", f.task.second},
                         {"word", formatWord(f.task.w, sig)},
                         {"remainder", toJson(f.remainder, sig)}});
      doc["result"] = {{"gsb", rep.ok()}, {"dFree", rep.dFree}, {"checked", rep.checked}, {"failures", fails}};
      if (!o.json) {
        if (rep.ok())
          out << "GSB: all " << rep.checked << " composition(s) trivial\n";
        else
          out << "not a GSB: " << rep.failures.size() << " of " << rep.checked << " composition(s) nontrivial\n";
        for (const auto& f : rep.failures)
          out << "  " << kindName(f.task.kind) << " (#" << f.task.first << ", #" << f.task.second << ") at "
              << formatWord(f.task.w, sig) << ": " << formatPolynomial(f.remainder, sig) << "\n";
      }
      if (!rep.dFree) note("note: relations are not D-free; a nonzero remainder may be spurious");
      if (!rep.ok()) code = notGSB;
    } else if (name == "basis") {
      MultiIndex tb(sig.arity());
      {
        std::vector<int> xs;
        std::stringstream ss(o.maxTailD);
        for (std::string item; std::getline(ss, item, ',');) xs.push_back(std::stoi(item));
        if (xs.size() == 1)
          for (std::size_t t = 0; t < sig.arity(); ++t) tb[t] = xs[0];
        else if (xs.size() == sig.arity())
          tb = MultiIndex(xs);
        else
          throw CLI::ValidationError("--max-taild", "needs 1 or n components");
        if (!tb.isNonNegative()) throw CLI::ValidationError("--max-taild", "must be non-negative");
      }
      std::optional<CompletionStatus> st;
      RewriteSystem S = workingSystem(st);
      json words = json::array();
      for (const auto& w : irreducibleWords(sig, S, o.maxLength, tb)) {
        if (w.length() < o.minLength) continue;
        words.push_back(formatWord(w, sig));
        if (!o.json) out << formatWord(w, sig) << "\n";
      }
      doc["result"] = words;
    } else if (name == "eq") {
      std::optional<CompletionStatus> st;
      RewriteSystem S = workingSystem(st);
      ReductionResult r = reduce(E, parseExpr(o.expr1) - parseExpr(o.expr2), S);
      std::string verdict = r.remainder.isZero() ? "equal"
                            : (st && *st != CompletionStatus::complete) ? "unknown"
                                                                         : "not equal";
      doc["result"] = verdict;
      if (!o.json) out << verdict << "\n";
      if (o.trace) {
        doc["trace"] = toJson(r.trace, S, sig);
        if (!o.json) printTrace(out, r.trace, S, sig);
      }
    } else if (name == "envelope" || name == "halfpbw") {
      if (!ctx.pres.lieConformal) {
        err << "error: '" << o.file << "' has no lie block\n";
        return dataError;
      }
      const LieConformalSpec& L = *ctx.pres.lieConformal;
      if (name == "envelope") {
        RewriteSystem S = envelopingPresentation(E, L);
        json els = json::array();
        for (const auto& p : S) {
          els.push_back(toJson(p, sig));
          if (!o.json) out << formatPolynomial(p, sig) << "\n";
        }
        doc["result"] = els;
      } else {
        HalfPBWReport rep = halfPBWCheck(E, L, o.threads);
        json cells = json::array();
        for (const auto& c : rep.cells) {
          json j = {{"i", sig.name(c.i)}, {"j", sig.name(c.j)},   {"k", sig.name(c.k)},
                    {"m", toJson(c.m)},   {"mp", toJson(c.mp)}, {"stage", stageName(c.stage)}};
          if (c.stage == HalfPBWStage::failed) j["remainder"] = toJson(c.remainder, sig);
          cells.push_back(j);
        }
        doc["result"] = {{"ok", rep.ok()}, {"inputPassesJacobi", rep.inputPassesJacobi}, {"cells", cells}};
        if (!o.json) {
          out << "1/2-PBW: " << rep.cells.size() << " polynomial(s); elw " << rep.count(HalfPBWStage::elw)
              << ", normal S-words " << rep.count(HalfPBWStage::normalSWords) << ", general S-words "
              << rep.count(HalfPBWStage::generalSWords) << ", failed " << rep.count(HalfPBWStage::failed) << "\n";
          for (const auto& c : rep.failures())
            out << "  failed: " << sig.name(c.i) << "<" << formatIndex(c.m) << "> " << sig.name(c.j) << "<"
                << formatIndex(c.mp) << "> " << sig.name(c.k) << ": " << formatPolynomial(c.remainder, sig) << "\n";
          out << "Jacobi check on input: " << (rep.inputPassesJacobi ? "passed" : "failed") << "\n";
        }
        if (!rep.ok()) code = notGSB;
      }
    }
    if (o.json) out << doc.dump(2) << "\n";
    return code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return dataError;
  } catch (const std::system_error& e) {
    err << "error: " << e.what() << "\n";
    return noInput;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return software;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return dataError;
  }
}

}  // namespace confalg::cli
