#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bcheck/harness.hpp"
#include "bcheck/parser.hpp"

using namespace bcheck;

namespace {

// Evaluate one generated test on the unmutated build.
bool gen_test_passes(const GenTest& t, const Scope& s) {
  Ast p = parse_pred(t.pred);
  if (t.is_solve) {
    TypedAst ty = infer(p, {{t.var, t.var_type}}, s);
    SolveResult r = solve(p, ty, {{t.var, t.var_type}}, s);
    for (const ValueEnv& env : r.solutions)
      if (value_eq(env.at(t.var), t.expected_value)) return true;
    return false;
  }
  TypedAst ty = infer(p, {}, s);
  return dual_eval(p, ty, {}, s).cls == Classification::TrueP;
}

}  // namespace

TEST_CASE("union seed expands into many passing variants") {
  Scope s = Scope::defaults();
  SeedFact seed = parse_seed("union({1},{2})={1,2}", s);
  CHECK(seed.op == "union");
  REQUIRE(seed.args.size() == 2);
  CHECK(value_eq(seed.expected,
                 Value::set({Value::integer(1), Value::integer(2)})));

  auto tests = gen_unit_tests(seed, s);
  CHECK(tests.size() >= 24);
  int solves = 0;
  std::set<std::string> preds;
  for (const GenTest& t : tests) {
    preds.insert(t.pred);
    if (t.is_solve) ++solves;
    CHECK(gen_test_passes(t, s));
  }
  CHECK(solves >= 2);                     // one per argument position
  CHECK(preds.size() == tests.size());    // variants are distinct
  // commutative operator: the swapped orientation is present
  CHECK(preds.count("{2} \\/ {1} = {1, 2}") == 1);
  // representation variants: interval and comprehension forms appear
  bool interval = false, compr = false;
  for (const std::string& p : preds) {
    if (p.find("(1..2)") != std::string::npos) interval = true;
    if (p.find("{qq | qq : INTEGER") != std::string::npos) compr = true;
  }
  CHECK(interval);
  CHECK(compr);
}

TEST_CASE("non-commutative seed never swaps its arguments") {
  Scope s = Scope::defaults();
  SeedFact seed = parse_seed("diff({1,2},{1})={2}", s);
  auto tests = gen_unit_tests(seed, s);
  for (const GenTest& t : tests) {
    if (t.is_solve) continue;
    CHECK(t.pred.find("{1} - {1, 2}") == std::string::npos);
    CHECK(t.pred.find("{1} - {2, 1}") == std::string::npos);
    CHECK(gen_test_passes(t, s));
  }
}

TEST_CASE("empty-set seed: forward and solve variants only") {
  Scope s = Scope::defaults();
  SeedFact seed = parse_seed("card({})=0", s);
  auto tests = gen_unit_tests(seed, s);
  REQUIRE(tests.size() == 2);
  CHECK_FALSE(tests[0].is_solve);
  // the lone forward variant grounds the empty set in an integer context
  CHECK(tests[0].pred == "card(({1} - {1})) = 0");
  CHECK(tests[1].is_solve);
  CHECK(tests[1].pred == "card(vv) = 0");
  for (const GenTest& t : tests) CHECK(gen_test_passes(t, s));
}

TEST_CASE("unsupported operators are rejected") {
  Scope s = Scope::defaults();
  SeedFact seed;
  seed.op = "compose";
  seed.args = {Value::empty_set(), Value::empty_set()};
  seed.expected = Value::empty_set();
  CHECK_THROWS_AS(gen_unit_tests(seed, s), UnsupportedOperator);
  CHECK_THROWS_AS(gen_unit_tests(parse_seed("union({1})={1}", s), s),
                  UnsupportedOperator);  // wrong arity
}

TEST_CASE("all suites pass on the unmutated build") {
  Scope s = Scope::defaults();
  for (const std::string& name : suite_names()) {
    SuiteResult r = run_suite(name, Mutation::None, s, nullptr, 4);
    INFO(name, ": ", r.failures.empty() ? "" : r.failures[0]);
    CHECK(r.ok());
    CHECK(r.passed > 0);
  }
}

TEST_CASE("suites catch the mutations they are designed for") {
  Scope s = Scope::defaults();
  CHECK_FALSE(run_suite("laws", Mutation::M1, s, nullptr, 4).ok());
  CHECK_FALSE(run_suite("unit", Mutation::M2, s).ok());
  CHECK_FALSE(run_suite("generated", Mutation::M2, s).ok());
  CHECK_FALSE(run_suite("laws", Mutation::M3, s, nullptr, 4).ok());
  // a pruned search enumerates fewer cases: laws stay green, solving does not
  CHECK(run_suite("laws", Mutation::M4, s, nullptr, 4).ok());
  CHECK_FALSE(run_suite("unit", Mutation::M4, s).ok());
  CHECK_FALSE(run_suite("laws", Mutation::M5, s, nullptr, 4).ok());
}

TEST_CASE("mutation matrix detects every mutation") {
  Scope s = Scope::defaults();
  MutationMatrix mm = mutation_matrix(s);  // throws if one slips through
  REQUIRE(mm.suites == std::vector<std::string>{"unit", "generated", "laws"});
  REQUIRE(mm.rows.size() == all_mutations().size());
  CHECK_FALSE(mm.passed(Mutation::M1, "laws"));
  CHECK_FALSE(mm.passed(Mutation::M2, "unit"));
  CHECK_FALSE(mm.passed(Mutation::M2, "laws"));
  // the function-space cardinality item trips M3 locally too
  CHECK_FALSE(mm.passed(Mutation::M3, "unit"));
  CHECK(mm.passed(Mutation::M3, "generated"));
  CHECK_FALSE(mm.passed(Mutation::M3, "laws"));
  CHECK(mm.passed(Mutation::M4, "laws"));
  CHECK_FALSE(mm.passed(Mutation::M4, "unit"));
  CHECK_FALSE(mm.passed(Mutation::M5, "laws"));

  std::string text = mm.to_text();
  CHECK(text.find("M4") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  std::string json = mm.to_json();
  CHECK(json.find("\"mutation\": \"M1\"") != std::string::npos);
  CHECK(json.find("\"laws\": \"fail\"") != std::string::npos);
}

TEST_CASE("coverage over the standard suites clears the bar") {
  Scope s = Scope::defaults();
  CoverageReport rep = coverage_report({"unit", "generated", "laws"}, s);
  CHECK(rep.total >= 80);
  CHECK(rep.percent() >= 90.0);
  CHECK(rep.internal_hits == 0);

  std::string text = rep.to_text();
  CHECK(text.find("overall: ") != std::string::npos);
  std::string json = rep.to_json();
  CHECK(json.find("\"internal_hits\": 0") != std::string::npos);
  std::string html = rep.to_html();
  CHECK(html.find("<table>") != std::string::npos);
  CHECK(html.find("Kernel branch coverage") != std::string::npos);
}

TEST_CASE("empty coverage map reports zero covered") {
  CoverageReport rep = coverage_from({});
  CHECK(rep.covered == 0);
  CHECK(rep.total > 0);
  CHECK(rep.percent() == 0.0);
}

TEST_CASE("random predicates are deterministic in the seed") {
  std::mt19937 a(7), b(7), c(8);
  Ast x = random_pred(a, 5);
  Ast y = random_pred(b, 5);
  CHECK(ast_eq(x, y));
  bool differs = false;
  for (int i = 0; i < 10 && !differs; ++i)
    differs = !ast_eq(random_pred(a, 5), random_pred(c, 5));
  CHECK(differs);
}
