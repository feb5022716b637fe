#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bcheck/value.hpp"

using namespace bcheck;

TEST_CASE("set canonicalization sorts and deduplicates") {
  Value s = Value::set({Value::integer(3), Value::integer(1), Value::integer(3),
                        Value::integer(-2)});
  REQUIRE(s.items.size() == 3);
  CHECK(to_string(s) == "{-2,1,3}");
  CHECK(value_eq(s, Value::set({Value::integer(1), Value::integer(-2),
                                Value::integer(3)})));
}

TEST_CASE("nested sets are canonicalized recursively") {
  Value inner1 = Value::set({Value::integer(2), Value::integer(1)});
  Value inner2 = Value::set({Value::integer(1), Value::integer(2)});
  Value outer = Value::set({inner1, inner2});
  CHECK(outer.items.size() == 1);
  CHECK(to_string(outer) == "{{1,2}}");
}

TEST_CASE("heterogeneous sets are rejected") {
  CHECK_THROWS_AS(Value::set({Value::integer(1), Value::boolean(true)}),
                  HeterogeneousSet);
  CHECK_THROWS_AS(Value::set({Value::integer(1), Value::empty_set()}),
                  HeterogeneousSet);
}

TEST_CASE("total order: kind rank then content") {
  Value b = Value::boolean(false);
  Value i = Value::integer(-3);
  Value e = Value::elem("ID", 0);
  Value p = Value::pair(Value::integer(1), Value::integer(2));
  Value s = Value::empty_set();
  CHECK(value_lt(b, i));
  CHECK(value_lt(i, e));
  CHECK(value_lt(e, p));
  CHECK(value_lt(p, s));
  CHECK(value_lt(Value::boolean(false), Value::boolean(true)));
  CHECK(value_lt(Value::integer(-3), Value::integer(0)));
  CHECK(value_lt(Value::elem("ID", 0), Value::elem("ID", 1)));
  // sets compare by cardinality first, then lexicographically
  Value s1 = Value::set({Value::integer(9)});
  Value s2 = Value::set({Value::integer(1), Value::integer(2)});
  CHECK(value_lt(s1, s2));
}

TEST_CASE("element display name does not affect equality") {
  Value a = Value::elem("ID", 0, "aa");
  Value b = Value::elem("ID", 0, "ID1");
  CHECK(value_eq(a, b));
  CHECK(to_string(a) == "aa");
  CHECK(to_string(b) == "ID1");
}

TEST_CASE("pair printing uses maplet notation") {
  Value p = Value::pair(Value::integer(1), Value::elem("ID", 1, "ID2"));
  CHECK(to_string(p) == "(1|->ID2)");
}

TEST_CASE("default scope bounds") {
  Scope s = Scope::defaults();
  CHECK(s.int_lo == -3);
  CHECK(s.int_hi == 3);
  CHECK(s.max_set_card == 4);
  CHECK(s.carrier_size("ID") == 2);
  CHECK(s.elem_name("ID", 0) == "ID1");
  CHECK(s.elem_name("ID", 1) == "ID2");
}

TEST_CASE("enumerate_type: base types") {
  Scope s = Scope::defaults();
  auto ints = enumerate_type(BType::integer(), s);
  REQUIRE(ints.size() == 7);
  CHECK(ints.front().n == -3);
  CHECK(ints.back().n == 3);
  auto bools = enumerate_type(BType::boolean(), s);
  REQUIRE(bools.size() == 2);
  CHECK(bools[0].b == false);
  auto elems = enumerate_type(BType::enumerated("ID"), s);
  REQUIRE(elems.size() == 2);
  CHECK(to_string(elems[0]) == "ID1");
}

TEST_CASE("enumerate_type: products in lexicographic order") {
  Scope s = Scope::defaults();
  auto prods = enumerate_type(
      BType::prod(BType::boolean(), BType::enumerated("ID")), s);
  REQUIRE(prods.size() == 4);
  CHECK(to_string(prods[0]) == "(FALSE|->ID1)");
  CHECK(to_string(prods[3]) == "(TRUE|->ID2)");
}

TEST_CASE("enumerate_type: power sets bounded by max_set_card") {
  Scope s = Scope::defaults();
  auto sets = enumerate_type(BType::pow(BType::enumerated("ID")), s);
  REQUIRE(sets.size() == 4);
  CHECK(to_string(sets[0]) == "{}");
  CHECK(to_string(sets[1]) == "{ID1}");
  CHECK(to_string(sets[2]) == "{ID2}");
  CHECK(to_string(sets[3]) == "{ID1,ID2}");

  // |POW(INT)| with 7 integers and card <= 4: C(7,0..4) = 1+7+21+35+35
  auto int_sets = enumerate_type(BType::pow(BType::integer()), s);
  CHECK(int_sets.size() == 99);
  CHECK(enumeration_size(BType::pow(BType::integer()), s) == 99);
  // all distinct and sorted
  for (size_t i = 1; i < int_sets.size(); ++i)
    CHECK(value_lt(int_sets[i - 1], int_sets[i]));
}

TEST_CASE("enumeration_size matches enumerate_type and overflows safely") {
  Scope s = Scope::defaults();
  BType rel = BType::pow(BType::prod(BType::integer(), BType::integer()));
  CHECK(enumeration_size(rel, s) ==
        (long long)enumerate_type(rel, s).size());
  BType huge = BType::pow(rel);
  CHECK_THROWS_AS(enumeration_size(huge, s), ScopeOverflow);
}

TEST_CASE("canonical is idempotent") {
  Value messy;
  messy.kind = ValueKind::Set;
  messy.items = {Value::integer(2), Value::integer(1), Value::integer(2)};
  Value c = canonical(messy);
  CHECK(to_string(c) == "{1,2}");
  CHECK(value_eq(canonical(c), c));
}
