#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bcheck/parser.hpp"
#include "bcheck/printer.hpp"
#include "bcheck/typecheck.hpp"

using namespace bcheck;

static BType type_of_expr(const std::string& text, const TypeEnv& env = {}) {
  Ast a = parse_expr(text);
  TypedAst t = infer(a, env, Scope::defaults());
  return t.type_of(a);
}

TEST_CASE("literal and constructor types") {
  CHECK(type_of_expr("3") == BType::integer());
  CHECK(type_of_expr("TRUE") == BType::boolean());
  CHECK(type_of_expr("{1,2}") == BType::pow(BType::integer()));
  CHECK(type_of_expr("1|->TRUE") ==
        BType::prod(BType::integer(), BType::boolean()));
  CHECK(type_of_expr("1..3") == BType::pow(BType::integer()));
  CHECK(type_of_expr("INTEGER") == BType::pow(BType::integer()));
  CHECK(type_of_expr("BOOL") == BType::pow(BType::boolean()));
}

TEST_CASE("carriers and elements resolve from the scope") {
  CHECK(type_of_expr("ID") == BType::pow(BType::enumerated("ID")));
  CHECK(type_of_expr("ID1") == BType::enumerated("ID"));
  CHECK(type_of_expr("{ID1,ID2}") == BType::pow(BType::enumerated("ID")));
}

TEST_CASE("operator result types") {
  CHECK(type_of_expr("POW({1})") ==
        BType::pow(BType::pow(BType::integer())));
  CHECK(type_of_expr("dom({1|->TRUE})") == BType::pow(BType::integer()));
  CHECK(type_of_expr("ran({1|->TRUE})") == BType::pow(BType::boolean()));
  CHECK(type_of_expr("card({1})") == BType::integer());
  CHECK(type_of_expr("{1|->TRUE}~") ==
        BType::pow(BType::prod(BType::boolean(), BType::integer())));
  CHECK(type_of_expr("{1|->TRUE}(2)") == BType::boolean());
  CHECK(type_of_expr("{1|->TRUE}[{1}]") == BType::pow(BType::boolean()));
  CHECK(type_of_expr("union({{1}})") == BType::pow(BType::integer()));
  CHECK(type_of_expr("id({1})") ==
        BType::pow(BType::prod(BType::integer(), BType::integer())));
  CHECK(type_of_expr("seq({TRUE})") ==
        BType::pow(BType::pow(BType::prod(BType::integer(), BType::boolean()))));
  CHECK(type_of_expr("%x.(x:1..3|x|->x)") ==
        BType::pow(BType::prod(BType::integer(),
                               BType::prod(BType::integer(), BType::integer()))));
  CHECK(type_of_expr("{x,y|x:ID & y:BOOL}") ==
        BType::pow(BType::prod(BType::enumerated("ID"), BType::boolean())));
  CHECK(type_of_expr("ID <-> BOOL") ==
        BType::pow(BType::pow(BType::prod(BType::enumerated("ID"),
                                          BType::boolean()))));
}

TEST_CASE("overloaded '*' resolves from context") {
  CHECK(type_of_expr("2*3") == BType::integer());
  CHECK(type_of_expr("{1}*{TRUE}") ==
        BType::pow(BType::prod(BType::integer(), BType::boolean())));
  CHECK(type_of_expr("ID*ID") ==
        BType::pow(BType::prod(BType::enumerated("ID"),
                               BType::enumerated("ID"))));
  // resolution through a variable: y's type fixes the '*'
  Ast a = parse_pred("z = x*y & y = {TRUE} & x = {1}");
  TypedAst t = infer(a, {}, Scope::defaults(), /*allow_free=*/true);
  CHECK(t.free_types.at("z") ==
        BType::pow(BType::prod(BType::integer(), BType::boolean())));
}

TEST_CASE("overloaded '-' resolves from context") {
  CHECK(type_of_expr("2-3") == BType::integer());
  CHECK(type_of_expr("{1,2}-{1}") == BType::pow(BType::integer()));
  TypeEnv env{{"S", BType::pow(BType::enumerated("ID"))}};
  CHECK(type_of_expr("S-S", env) == BType::pow(BType::enumerated("ID")));
}

TEST_CASE("ambiguity is an error") {
  CHECK_THROWS_AS(type_of_expr("{}"), TypeError);
  Ast a = parse_pred("x - y = x");
  CHECK_THROWS_AS(infer(a, {}, Scope::defaults(), true), TypeError);
}

TEST_CASE("unknown identifiers and type clashes") {
  CHECK_THROWS_AS(type_of_expr("mystery"), UnknownIdentifier);
  CHECK_THROWS_AS(type_of_expr("{1,TRUE}"), TypeError);
  CHECK_THROWS_AS(infer(parse_pred("1 = TRUE"), {}, Scope::defaults()),
                  TypeError);
  CHECK_THROWS_AS(infer(parse_pred("1 : 2..3 & 1 : {TRUE}"), {},
                        Scope::defaults()),
                  TypeError);
  CHECK_THROWS_AS(type_of_expr("1 + {2}"), TypeError);
  CHECK_THROWS_AS(type_of_expr("card(5)"), TypeError);
}

TEST_CASE("binder types are recorded") {
  Ast a = parse_pred("!x.(x : ID => x /= ID1)");
  TypedAst t = infer(a, {}, Scope::defaults());
  REQUIRE(t.binders_of(a).size() == 1);
  CHECK(t.binders_of(a)[0] == BType::enumerated("ID"));
}

TEST_CASE("free identifiers get inferred types") {
  Ast a = parse_pred("f : ID --> BOOL & x : dom(f)");
  TypedAst t = infer(a, {}, Scope::defaults(), /*allow_free=*/true);
  CHECK(t.free_types.at("f") ==
        BType::pow(BType::prod(BType::enumerated("ID"), BType::boolean())));
  CHECK(t.free_types.at("x") == BType::enumerated("ID"));
}

TEST_CASE("typed print inserts binder constraints") {
  Ast a = parse_pred("!x.(x : ID => x /= ID1)");
  TypedAst t = infer(a, {}, Scope::defaults());
  CHECK(pretty_print_typed(a, t) ==
        "!x.(x : ID => (x : ID => x /= ID1))");

  Ast e = parse_expr("%x.(x:1..2|x+1)");
  TypedAst te = infer(e, {}, Scope::defaults());
  CHECK(pretty_print_typed(e, te) ==
        "%x.(x : INTEGER & x : 1..2|x+1)");
}

TEST_CASE("typed print wraps free identifiers in a quantifier") {
  Ast a = parse_pred("x < y");
  TypedAst t = infer(a, {}, Scope::defaults(), /*allow_free=*/true);
  CHECK(pretty_print_typed(a, t) ==
        "!(x,y).(x : INTEGER & y : INTEGER => x < y)");
}

TEST_CASE("crosscheck passes on well-typed inputs") {
  Scope s = Scope::defaults();
  for (const char* text : {
           "!x.(x : INTEGER => x + 1 > x)",
           "#(a,b).(a |-> b : {1|->TRUE})",
           "{x | x : ID} = ID",
           "f : ID +-> BOOL & dom(f) <: ID",
           "%x.(x : 1..3 | x - 1)",
           "{1,2} * {TRUE} /= {}",
           "s : seq({0,1}) & size(s) < 3",
       }) {
    auto rep = crosscheck_typing(text, {}, s);
    INFO(text, " stage=", rep.stage, " detail=", rep.detail);
    CHECK(rep.status == CrossReport::Status::Pass);
  }
}

TEST_CASE("crosscheck reports ill-typed input as not applicable") {
  auto rep = crosscheck_typing("1 = TRUE", {}, Scope::defaults());
  CHECK(rep.status == CrossReport::Status::NotApplicable);
  CHECK(rep.stage == "infer");
}

TEST_CASE("machine inference") {
  std::string src =
      "MACHINE M1\n"
      "SETS ID={aa,bb}\n"
      "CONSTANTS iv\n"
      "PROPERTIES iv:ID & iv/=aa\n"
      "ASSERTIONS iv=bb\n"
      "END\n";
  Machine m = parse_machine(src);
  TypedMachine tm = infer_machine(m, Scope::defaults());
  CHECK(tm.const_types.at("iv") == BType::enumerated("ID"));
  CHECK(tm.scope.carrier_size("ID") == 2);
  CHECK(tm.scope.elem_name("ID", 0) == "aa");
  REQUIRE(tm.assertions.size() == 1);

  auto rep = crosscheck_machine(src, Scope::defaults());
  INFO(rep.stage, ": ", rep.detail, "\n", rep.typed_text);
  CHECK(rep.status == CrossReport::Status::Pass);
}

TEST_CASE("machine: constants must be constrained by the properties") {
  std::string src =
      "MACHINE M\n"
      "CONSTANTS a, b\n"
      "PROPERTIES a : 1..3\n"
      "END\n";
  CHECK_THROWS_AS(infer_machine(parse_machine(src), Scope::defaults()),
                  TypeError);
}

TEST_CASE("machine: undeclared free identifier in properties") {
  std::string src =
      "MACHINE M\n"
      "CONSTANTS a\n"
      "PROPERTIES a : 1..3 & ghost = 2\n"
      "END\n";
  CHECK_THROWS_AS(infer_machine(parse_machine(src), Scope::defaults()),
                  UnknownIdentifier);
}
