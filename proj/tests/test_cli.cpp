#include "catch_amalgamated.hpp"

#include "confalg/cli.hpp"
#include "support.hpp"

#include <filesystem>

using namespace confalg;
using namespace testsupport;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::runCommand(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CONFALG_DATA_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(CONFALG_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tempFile(const std::string& content) {
  static int counter = 0;
  auto path = std::filesystem::temp_directory_path() / ("confalg_test_" + std::to_string(++counter) + ".alg");
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("parseExpression examples") {
  AlgebraSignature sig = idempotentSignature();
  Engine E(sig);
  auto e = parseExpression("a<0,0> a - a", sig);
  REQUIRE(e.size() == 2);
  CHECK(e[0].first == 1);
  CHECK_FALSE(e[0].second.isLeaf());
  CHECK(e[1].first == -1);
  CHECK(e[1].second.isLeaf());

  auto l = parseExpression("(a<1,0> a)<1,0> a", sig);
  REQUIRE(l.size() == 1);
  CHECK_FALSE(l[0].second.asNode().left->isLeaf());
  auto r = parseExpression("a<1,0> a<1,0> a", sig);
  CHECK(r[0].second.asNode().left->isLeaf());

  auto d = parseExpression("D{1,0} a <1,0> a", sig);
  REQUIRE(d.size() == 1);
  const auto& node = d[0].second.asNode();
  CHECK(node.left->asLeaf().d == MultiIndex{1, 0});
  CHECK(node.label == MultiIndex{1, 0});
  CHECK(node.right->asLeaf().d == MultiIndex{0, 0});
  CHECK(E.normalize(d) == -parse(E, "a<0,0> a"));

  CHECK(parse(E, "2*(a - a<0,0> a) + 1/2 a") == parse(E, "5/2 a - 2 a<0,0> a"));
  CHECK(parse(E, "0").isZero());
  CHECK(parse(E, "a<2,0>(a<0,0> a - a)") == 2 * parse(E, "a<1,0> a<1,0> a"));
}

TEST_CASE("parse errors carry positions") {
  AlgebraSignature sig = idempotentSignature();
  try {
    parseExpression("a<0,0> b", sig);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 8);
  }
  CHECK_THROWS_AS(parseExpression("a<0> a", sig), ParseError);
  CHECK_THROWS_AS(parseExpression("a<0,0 a", sig), ParseError);
  CHECK_THROWS_AS(parseExpression("a +", sig), ParseError);
  CHECK_THROWS_AS(parseExpression("1/0 a", sig), ParseError);
  CHECK_THROWS_AS(parsePresentation("algebra\n  n: 2\n  locality: [2]\n  generators: [a]\n"), ParseError);
  CHECK_THROWS_AS(parsePresentation("relations\n  f: a\n"), ParseError);
  try {
    parsePresentation("algebra\n  n: 1\n  locality: [1]\n  generators: [a]\nrelations\n  f: a<0> c\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 6);
  }
}

TEST_CASE("formatPolynomial examples") {
  AlgebraSignature sig = idempotentSignature();
  Engine E(sig);
  CHECK(formatPolynomial(parse(E, "a<0,0> a - a"), sig) == "a<0,0> a - a");
  CHECK(formatPolynomial(Polynomial(), sig) == "0");
  CHECK(formatPolynomial(4 * parse(E, "a<1,1> a<1,1> a"), sig) == "4 a<1,1> a<1,1> a");
  CHECK(formatPolynomial(parse(E, "-1/3 D{0,2} a"), sig) == "-1/3 D{0,2} a");
  CHECK(formatPolynomial(parse(E, "a<1,0> D{1,1} a"), sig) == "a<1,0> D{1,1} a");
}

TEST_CASE("format then parse is the identity") {
  AlgebraSignature sig({"a", "b"}, MultiIndex{2, 3});
  Engine E(sig);
  std::mt19937 rng(77);
  for (int k = 0; k < 300; ++k) {
    Polynomial p;
    for (int t = 0; t < 4; ++t)
      p.add(randomWord(rng, sig, 1 + rng() % 4, 3), Rational(static_cast<int>(rng() % 11) - 5, 1 + static_cast<int>(rng() % 4)));
    std::string text = formatPolynomial(p, sig);
    CHECK(parse(E, text) == p);
    CHECK(formatPolynomial(parse(E, text), sig) == text);
  }
}

TEST_CASE("presentation files round trip") {
  for (const char* name : {"idempotent.alg", "sl2_loop.alg", "abelian3.alg", "heisenberg_loop.alg"}) {
    Presentation p = parsePresentation(cli::detail::readFile(data(name)));
    Engine E(p.signature);
    std::string text = formatPresentation(p, E);
    Presentation q = parsePresentation(text);
    CHECK(q.signature == p.signature);
    CHECK(formatPresentation(q, E) == text);
    CHECK(bool(q.lieConformal) == bool(p.lieConformal));
    if (p.lieConformal) CHECK(q.lieConformal->table == p.lieConformal->table);
  }
}

TEST_CASE("presentation lie blocks") {
  Presentation p = parsePresentation(cli::detail::readFile(data("sl2_loop.alg")));
  REQUIRE(p.lieAlgebra);
  REQUIRE(p.lieConformal);
  CHECK(p.lieConformal->table.size() == 3);
  CHECK_THROWS_AS(parsePresentation("algebra\n n: 1\n locality: [1]\n generators: [x, y]\nlie\n bracket(x,y): x\n "
                                    "bracket(y,x): x\n"),
                  ParseError);
  CHECK_THROWS_AS(parsePresentation("algebra\n n: 1\n locality: [2]\n generators: [x, y]\nlie\n bracket(x,y): x\n"),
                  ParseError);
  CHECK_THROWS_AS(parsePresentation("algebra\n n: 1\n locality: [2]\n generators: [x, y]\nlie\n bracket(x,y)<0>: x\n"),
                  ParseError);
  Presentation c = parsePresentation("algebra\n n: 1\n locality: [2]\n generators: [x, y]\nlie\n bracket(y,x)<1>: 2 D{1} x\n");
  CHECK(c.lieConformal->entry(1, 0, MultiIndex{1}) == 2 * Polynomial(Word(0, MultiIndex{1})));
}

TEST_CASE("CRLF input is accepted") {
  std::string path = tempFile("algebra\r\n  n: 2\r\n  locality: [2, 2]\r\n  generators: [a]\r\nrelations\r\n  f: a<0,0> a - a\r\n");
  CHECK(run({"complete", path}).out == golden("complete_idempotent.txt"));
}

TEST_CASE("golden outputs") {
  CHECK(run({"complete", data("idempotent.alg")}).out == golden("complete_idempotent.txt"));
  CHECK(run({"--json", "complete", data("idempotent.alg")}).out == golden("complete_idempotent.json"));
  CHECK(run({"basis", data("idempotent.alg"), "--max-length", "4"}).out == golden("basis_idempotent_len4.txt"));
  CHECK(run({"envelope", data("sl2_loop.alg")}).out == golden("envelope_sl2.txt"));
  CHECK(run({"halfpbw", data("sl2_loop.alg"), "--json"}).out == golden("halfpbw_sl2.json"));
  CHECK(run({"--json", "--trace", "reduce", data("idempotent.alg"), "a<2,0> a<0,0> a<0,1> a"}).out ==
        golden("reduce_trace.json"));
  Run check = run({"check", data("idempotent.alg")});
  CHECK(check.code == 2);
  CHECK(check.out == golden("check_idempotent.txt"));
}

TEST_CASE("command examples") {
  Run c = run({"complete", data("idempotent.alg")});
  CHECK(c.code == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 6);
  Run e = run({"eq", data("idempotent.alg"), "a<0,0> a<0,0> a", "a"});
  CHECK(e.code == 0);
  CHECK(e.out == "equal\n");
  CHECK(run({"eq", data("idempotent.alg"), "a<1,1> a", "a"}).out == "not equal\n");
  CHECK(run({"eq", data("idempotent.alg"), "a<1,1> a", "a", "--max-steps", "2"}).out == "unknown\n");
  Run b = run({"basis", data("idempotent.alg"), "--max-length", "2"});
  CHECK(b.out == "a<0,1> a\na<1,0> a\na<1,1> a\n");
  CHECK(run({"basis", data("idempotent.alg"), "--max-length", "1", "--min-length", "1", "--max-taild", "1"}).out ==
        "a\nD{0,1} a\nD{1,0} a\nD{1,1} a\n");
  CHECK(run({"mul", data("idempotent.alg"), "a", "2,2", "a<0,0> a - a"}).out == "4 a<1,1> a<1,1> a\n");
  CHECK(run({"normalize", data("idempotent.alg"), "D{1,0} a<1,0> a"}).out == "-a<0,0> a\n");
  CHECK(run({"reduce", data("idempotent.alg"), "a<0,0> a<0,0> a", "--as-is"}).out == "a\n");
  Run h = run({"halfpbw", data("sl2_loop.alg")});
  CHECK(h.code == 0);
  Run bad = run({"halfpbw", data("sl2_corrupted.alg")});
  CHECK(bad.code == 2);
  CHECK(bad.out.find("failed 1") != std::string::npos);
}

TEST_CASE("json schema") {
  for (auto args : std::vector<std::vector<std::string>>{{"--json", "normalize", data("idempotent.alg"), "a"},
                                                         {"--json", "check", data("sl2_loop.alg")},
                                                         {"--json", "eq", data("idempotent.alg"), "a", "a"},
                                                         {"--json", "basis", data("idempotent.alg"), "--max-length", "2"},
                                                         {"--json", "envelope", data("sl2_loop.alg")},
                                                         {"--json", "--trace", "reduce", data("idempotent.alg"), "a"}}) {
    Run r = run(args);
    auto j = nlohmann::json::parse(r.out);
    std::set<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.insert(k);
    std::set<std::string> expect{"command", "signature", "result"};
    if (std::find(args.begin(), args.end(), "--trace") != args.end()) expect.insert("trace");
    CHECK(keys == expect);
    CHECK(j["signature"].contains("locality"));
  }
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::usage);
  CHECK(run({"frobnicate"}).code == cli::usage);
  CHECK(run({"basis", data("idempotent.alg")}).code == cli::usage);
  CHECK(run({"basis", data("idempotent.alg"), "--max-length", "2", "--max-taild", "1,2,3"}).code == cli::usage);
  CHECK(run({"normalize", data("idempotent.alg"), "a<1> a"}).code == cli::dataError);
  CHECK(run({"normalize", data("does_not_exist.alg"), "a"}).code == cli::noInput);
  CHECK(run({"normalize", tempFile("algebra\n n: 2\n"), "a"}).code == cli::dataError);
  CHECK(run({"envelope", data("idempotent.alg")}).code == cli::dataError);
  CHECK(run({"check", data("sl2_loop.alg")}).code == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("quiet suppresses diagnostics and output is deterministic") {
  Run a = run({"eq", data("idempotent.alg"), "a<0,0> a", "a"});
  CHECK_FALSE(a.err.empty());
  Run q = run({"--quiet", "eq", data("idempotent.alg"), "a<0,0> a", "a"});
  CHECK(q.err.empty());
  CHECK(q.out == a.out);
  Run x = run({"--json", "check", data("idempotent.alg"), "--threads", "4"});
  Run y = run({"--json", "check", data("idempotent.alg"), "--threads", "1"});
  CHECK(x.out == y.out);
}
