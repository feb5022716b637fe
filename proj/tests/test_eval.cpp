#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bcheck/eval.hpp"
#include "bcheck/parser.hpp"
#include "bcheck/printer.hpp"

using namespace bcheck;

namespace {

DualResult run(const std::string& text, const DualOptions& opt = {},
               const ValueEnv& env = {}, const TypeEnv& types = {}) {
  Scope s = Scope::defaults();
  Ast a = parse_pred(text);
  TypedAst t = infer(a, types, s, /*allow_free=*/!env.empty());
  return dual_eval(a, t, env, s, opt);
}

Value ev(const std::string& text) {
  Scope s = Scope::defaults();
  Ast a = parse_expr(text);
  TypedAst t = infer(a, {}, s);
  EvalContext ctx(s);
  return eval_expr(a, {}, t, ctx);
}

}  // namespace

TEST_CASE("classification covers all nine rows") {
  using C = Classification;
  CHECK(classify(Outcome::True, Outcome::True) == C::BugBothTrueFalse);
  CHECK(classify(Outcome::True, Outcome::False) == C::TrueP);
  CHECK(classify(Outcome::True, Outcome::Fail) == C::TrueP);
  CHECK(classify(Outcome::False, Outcome::True) == C::FalseP);
  CHECK(classify(Outcome::Fail, Outcome::True) == C::FalseP);
  CHECK(classify(Outcome::False, Outcome::False) == C::NotWellDefined);
  CHECK(classify(Outcome::Fail, Outcome::Fail) == C::NotWellDefined);
  CHECK(classify(Outcome::True, Outcome::Timeout) == C::ProbablyTrue);
  CHECK(classify(Outcome::False, Outcome::Timeout) == C::FalseOrUndefined);
  CHECK(classify(Outcome::Timeout, Outcome::True) == C::ProbablyFalse);
  CHECK(classify(Outcome::Timeout, Outcome::False) == C::TrueOrUndefined);
  CHECK(classify(Outcome::Timeout, Outcome::Timeout) == C::Unknown);
  CHECK(verdict_string(C::TrueP) == "true");
  CHECK(verdict_string(C::FalseP) == "false");
  CHECK(verdict_string(C::NotWellDefined) == "unknown");
  CHECK(verdict_string(C::Unknown) == "unknown");
  CHECK(verdict_string(C::BugBothTrueFalse) == "both_true_false");
  CHECK(verdict_string(C::ProbablyTrue) == "probably_true");
}

TEST_CASE("forced timeouts reach the timeout rows") {
  DualOptions opt;
  opt.force_pos_timeout = true;
  CHECK(run("1 < 2", opt).cls == Classification::TrueOrUndefined);
  CHECK(run("2 < 1", opt).cls == Classification::ProbablyFalse);
  opt.force_pos_timeout = false;
  opt.force_neg_timeout = true;
  CHECK(run("1 < 2", opt).cls == Classification::ProbablyTrue);
  CHECK(run("2 < 1", opt).cls == Classification::FalseOrUndefined);
  opt.force_pos_timeout = true;
  CHECK(run("1 < 2", opt).cls == Classification::Unknown);
}

TEST_CASE("expression evaluation") {
  CHECK(value_eq(ev("2+3*4"), Value::integer(14)));
  CHECK(value_eq(ev("card({1,2,2,3})"), Value::integer(3)));
  CHECK(value_eq(ev("{1,2} \\/ {2,3}"), ev("{1,2,3}")));
  CHECK(value_eq(ev("{1,2} - {1}"), ev("{2}")));       // set difference
  CHECK(value_eq(ev("7 - 4"), Value::integer(3)));     // arithmetic
  CHECK(value_eq(ev("{1} * {2}"), ev("{1|->2}")));     // cartesian
  CHECK(value_eq(ev("{x | x : 1..3 & x > 1}"), ev("{2,3}")));
  CHECK(value_eq(ev("%x.(x : 1..2 | x+10)"), ev("{1|->11, 2|->12}")));
  CHECK(value_eq(ev("({1|->2} \\/ {3|->4})(3)"), Value::integer(4)));
  CHECK(value_eq(ev("rev({1|->7, 2|->8, 3|->9})"), ev("{1|->9, 2|->8, 3|->7}")));
  CHECK(value_eq(ev("NATURAL"), ev("0..3")));   // scope-capped
  CHECK(value_eq(ev("NAT1"), ev("1..3")));
  CHECK(value_eq(ev("INTEGER"), ev("-3..3")));
  CHECK(value_eq(ev("BOOL"), ev("{FALSE,TRUE}")));
}

TEST_CASE("simple predicates classify as designed") {
  CHECK(run("1 + 1 = 2").cls == Classification::TrueP);
  CHECK(run("1 + 1 = 3").cls == Classification::FalseP);
  CHECK(run("{1,2} <: {1,2,3}").cls == Classification::TrueP);
  CHECK(run("{1,2} <<: {1,2}").cls == Classification::FalseP);
  CHECK(run("{1,2} <<: {1,2,3}").cls == Classification::TrueP);
  CHECK(run("2 : NAT & 2 /: NAT1 or 2 > 1").cls == Classification::TrueP);
  CHECK(run("!x.(x : ID => x : ID)").cls == Classification::TrueP);
  CHECK(run("#x.(x : 1..3 & x*x = 4)").cls == Classification::TrueP);
  CHECK(run("#x.(x : 1..3 & x*x = 5)").cls == Classification::FalseP);
  CHECK(run("{1|->1, 2|->2} ^ {1|->3} = {1|->1, 2|->2, 3|->3}").cls ==
        Classification::TrueP);
  CHECK(run("{1|->2} : {1} --> {2}").cls == Classification::TrueP);
  CHECK(run("{1|->2} : {1,9} --> {2}").cls == Classification::FalseP);
  CHECK(run("{1|->1, 2|->1} : seq({1})").cls == Classification::TrueP);
  CHECK(run("{2|->1} : seq({1})").cls == Classification::FalseP);
  CHECK(run("{1,2} : POW(INTEGER)").cls == Classification::TrueP);
  CHECK(run("{} : POW1(INTEGER)").cls == Classification::FalseP);
  CHECK(run("5 : INTEGER").cls == Classification::TrueP);  // not scope-capped
  CHECK(run("-1 : NATURAL").cls == Classification::FalseP);
}

TEST_CASE("undefinedness classifies as unknown, never crashes") {
  CHECK(run("1/0 = 5").cls == Classification::NotWellDefined);
  CHECK(run("min({}) < 3").cls == Classification::NotWellDefined);
  CHECK(run("first({1|->2} - {1|->2}) = 1").cls ==
        Classification::NotWellDefined);
  // an undefined disjunct does not poison a true one
  CHECK(run("1/0 = 5 or 1 < 2").cls == Classification::TrueP);
  CHECK(run("1 < 2 or 1/0 = 5").cls == Classification::TrueP);
  // but it blocks a false conjunction from being plainly false
  CHECK(run("1/0 = 5 & 1 < 2").cls == Classification::NotWellDefined);
  CHECK(run("2 < 1 & 1/0 = 5").cls == Classification::FalseP);
}

TEST_CASE("undefinedness with free variables") {
  ValueEnv env{{"x", Value::integer(0)}, {"y", Value::integer(0)}};
  TypeEnv types{{"x", BType::integer()}, {"y", BType::integer()}};
  Scope s = Scope::defaults();
  Ast a = parse_pred("x = 2/y & y = x-x");
  TypedAst t = infer(a, types, s);
  CHECK(dual_eval(a, t, env, s).cls == Classification::NotWellDefined);
}

TEST_CASE("negation swaps the chains") {
  for (const char* text : {"1 < 2", "2 < 1", "1/0 = 5", "{1} <: {1,2}"}) {
    DualResult d = run(text);
    DualResult nd = run("not(" + std::string(text) + ")");
    CHECK(d.pos == nd.neg);
    CHECK(d.neg == nd.pos);
  }
}

TEST_CASE("three-valued connectives match the reference tables") {
  // encode true/false/undefined operands and check or/and/=>/<=> against
  // Kleene tables with undefined treated as unknown
  const char* T = "1 = 1";
  const char* F = "1 = 2";
  const char* U = "1/0 = 1";
  auto cls = [&](std::string p) { return run(p).cls; };
  auto bin = [&](const char* op, const char* a, const char* b) {
    return cls("(" + std::string(a) + ") " + op + " (" + b + ")");
  };
  using C = Classification;
  CHECK(bin("or", T, U) == C::TrueP);
  CHECK(bin("or", U, T) == C::TrueP);
  CHECK(bin("or", F, U) == C::NotWellDefined);
  CHECK(bin("or", U, U) == C::NotWellDefined);
  CHECK(bin("&", F, U) == C::FalseP);
  CHECK(bin("&", U, F) == C::FalseP);  // negative chain finds the false side
  CHECK(bin("&", T, U) == C::NotWellDefined);
  CHECK(bin("=>", F, U) == C::TrueP);
  CHECK(bin("=>", U, T) == C::TrueP);
  CHECK(bin("=>", T, U) == C::NotWellDefined);
  CHECK(bin("<=>", T, T) == C::TrueP);
  CHECK(bin("<=>", T, F) == C::FalseP);
  CHECK(bin("<=>", F, F) == C::TrueP);
  CHECK(bin("<=>", U, T) == C::NotWellDefined);
  CHECK(bin("<=>", T, U) == C::NotWellDefined);
}

TEST_CASE("quantifiers over undefined bodies") {
  CHECK(run("!x.(x : 1..0 => 1/0 = 1)").cls == Classification::TrueP);
  CHECK(run("!x.(x : 1..2 => 2/x > 0)").cls == Classification::TrueP);
  CHECK(run("!x.(x : 0..2 => 2/x > 0)").cls == Classification::NotWellDefined);
  CHECK(run("#x.(x : 0..2 & 2/x = 1)").cls == Classification::TrueP);
  CHECK(run("#x.(x : 0..0 & 2/x = 1)").cls == Classification::NotWellDefined);
}

TEST_CASE("M5 turns both assertions of the doubled-membership example") {
  const std::string src =
      "MACHINE DoubleEvaluationTest\n"
      "SETS ID={aa,bb}\n"
      "CONSTANTS iv\n"
      "PROPERTIES iv : ID & iv /= bb\n"
      "ASSERTIONS iv : {aa}; iv /: {bb}\n"
      "END\n";
  Machine m = parse_machine(src);
  MachineReport clean = check_machine(m, Scope::defaults(), {});
  REQUIRE(clean.assertions.size() == 2);
  CHECK_FALSE(clean.unsat);
  CHECK(value_eq(clean.binding.at("iv"), Value::elem("ID", 0, "aa")));
  CHECK(clean.assertions[0].verdict == "true");
  CHECK(clean.assertions[1].verdict == "true");
  CHECK(clean.all_true());
  CHECK_FALSE(clean.any_bug());

  DualOptions opt;
  opt.mutation = Mutation::M5;
  MachineReport bad = check_machine(m, Scope::defaults(), opt);
  REQUIRE(bad.assertions.size() == 2);
  CHECK(bad.assertions[0].verdict == "unknown");
  CHECK(bad.assertions[1].verdict == "both_true_false");
  CHECK(bad.any_bug());
  CHECK_FALSE(bad.all_true());
  CHECK(bad.to_text() ==
        "iv : {aa}\n== unknown\n\niv /: {bb}\n== both_true_false\n\n");
}

TEST_CASE("solve enumerates assignments in canonical order") {
  Scope s = Scope::defaults();
  {
    Ast p = parse_pred("x : 1..3 & x*x = 4");
    TypedAst t = infer(p, {{"x", BType::integer()}}, s);
    SolveResult r = solve(p, t, {{"x", BType::integer()}}, s);
    REQUIRE(r.solutions.size() == 1);
    CHECK(value_eq(r.solutions[0].at("x"), Value::integer(2)));
    CHECK(r.cases == 7);  // -3..3
    CHECK_FALSE(r.bug);
  }
  {
    Ast p = parse_pred("iv : ID & iv /= ID2");
    TypedAst t = infer(p, {{"iv", BType::enumerated("ID")}}, s);
    SolveResult r = solve(p, t, {{"iv", BType::enumerated("ID")}}, s);
    REQUIRE(r.solutions.size() == 1);
    CHECK(value_eq(r.solutions[0].at("iv"), s.elem_value("ID", 0)));
  }
  {
    // division by zero rows surface as undefined, not as crashes
    Ast p = parse_pred("10 / x > 3");
    TypedAst t = infer(p, {{"x", BType::integer()}}, s);
    SolveResult r = solve(p, t, {{"x", BType::integer()}}, s);
    CHECK(r.solutions.size() == 2);  // x=1 (10), x=2 (5); 10/3 is only 3
    CHECK(r.undefined.size() == 1);  // x=0
  }
}

TEST_CASE("solve under M4 loses a solution") {
  Scope s = Scope::defaults();
  Ast p = parse_pred("x : 1..3 & x*x = 4");
  TypedAst t = infer(p, {{"x", BType::integer()}}, s);
  DualOptions opt;
  opt.mutation = Mutation::M4;
  SolveResult r = solve(p, t, {{"x", BType::integer()}}, s, opt);
  // values -3..3 with every third dropped: -3,-2,0,1,3 — misses 2
  CHECK(r.cases == 5);
  CHECK(r.solutions.empty());
}

TEST_CASE("unsatisfiable properties are reported, assertions skipped") {
  const std::string src =
      "MACHINE Bad\n"
      "CONSTANTS n\n"
      "PROPERTIES n : 1..3 & n > 9\n"
      "ASSERTIONS n = 1\n"
      "END\n";
  MachineReport rep = check_machine(parse_machine(src), Scope::defaults(), {});
  CHECK(rep.unsat);
  CHECK(rep.assertions.empty());
  CHECK_FALSE(rep.all_true());
  CHECK(rep.to_text() == "properties unsatisfiable\n");
}

TEST_CASE("machine report JSON shape") {
  const std::string src =
      "MACHINE M\n"
      "CONSTANTS n\n"
      "PROPERTIES n : 1..3 & n*n = n+n\n"
      "ASSERTIONS n = 2; n > 5\n"
      "END\n";
  MachineReport rep = check_machine(parse_machine(src), Scope::defaults(), {});
  std::string j = rep.to_json();
  CHECK(j.find("\"unsat\": false") != std::string::npos);
  CHECK(j.find("\"n\": \"2\"") != std::string::npos);
  CHECK(j.find("\"verdict\": \"true\"") != std::string::npos);
  CHECK(j.find("\"verdict\": \"false\"") != std::string::npos);
}

TEST_CASE("dual evaluation records coverage") {
  CoverageMap cov;
  DualOptions opt;
  opt.coverage = &cov;
  run("{1} /\\ {1,2} = {1} & 3 mod 2 = 1", opt);
  CHECK(cov.count("inter.ok") == 1);
  CHECK(cov.count("mod.ok") == 1);
  for (const auto& [id, n] : cov) {
    INFO(id);
    CHECK(branch_registered(id));
  }
}
