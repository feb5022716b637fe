#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bcheck {

// ---------------------------------------------------------------------------
// Canonical finite B values.
//
// Relations, functions and sequences are all sets of pairs; there is no
// separate representation for them.  Sets are kept sorted and duplicate-free
// under the canonical total order, so structural equality is value equality.
// ---------------------------------------------------------------------------

enum class ValueKind { Bool, Int, Elem, Pair, Set };

struct Value {
  ValueKind kind = ValueKind::Bool;
  bool b = false;
  long long n = 0;
  std::string carrier;  // Elem only
  int index = 0;        // Elem only, 0-based
  std::string name;     // Elem display name; ignored by compare
  std::vector<Value> items;  // Pair: [left,right]; Set: canonical elements

  static Value boolean(bool v);
  static Value integer(long long v);
  static Value elem(std::string carrier, int index, std::string name = "");
  static Value pair(Value left, Value right);
  // Sorts and deduplicates; throws HeterogeneousSet on mixed member types.
  static Value set(std::vector<Value> elems);
  static Value empty_set() { return set({}); }

  const Value& left() const { return items[0]; }
  const Value& right() const { return items[1]; }
  bool is_set() const { return kind == ValueKind::Set; }
};

enum class Ordering { LT, EQ, GT };

// Total order: Bool < Int < Elem < Pair < Set; within kinds false<true,
// integer order, (carrier,index) lexicographic, pairs lexicographic,
// sets length-then-lexicographic.
Ordering compare(const Value& a, const Value& b);
bool value_eq(const Value& a, const Value& b);
bool value_lt(const Value& a, const Value& b);

struct HeterogeneousSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical form: recursively sorted, duplicate-free sets. Idempotent.
Value canonical(const Value& v);

std::string to_string(const Value& v);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind { Bool, Int, Enum, Prod, Pow };

struct BType {
  TypeKind kind = TypeKind::Bool;
  std::string carrier;       // Enum only
  std::vector<BType> args;   // Prod: [left,right]; Pow: [inner]

  static BType boolean() { return {TypeKind::Bool, "", {}}; }
  static BType integer() { return {TypeKind::Int, "", {}}; }
  static BType enumerated(std::string c) { return {TypeKind::Enum, std::move(c), {}}; }
  static BType prod(BType l, BType r);
  static BType pow(BType inner);

  const BType& left() const { return args[0]; }
  const BType& right() const { return args[1]; }
  const BType& inner() const { return args[0]; }
};

bool operator==(const BType& a, const BType& b);
inline bool operator!=(const BType& a, const BType& b) { return !(a == b); }
std::string to_string(const BType& t);

// ---------------------------------------------------------------------------
// Enumeration scope
// ---------------------------------------------------------------------------

struct Scope {
  std::map<std::string, int> carriers;  // carrier name -> size (>= 1)
  std::map<std::string, std::vector<std::string>> elem_names;
  long long int_lo = -3;
  long long int_hi = 3;
  int max_set_card = 4;
  long long fuel = 1'000'000;
  long long enum_hard_limit = 10'000'000;

  static Scope defaults();

  bool has_carrier(const std::string& c) const { return carriers.count(c) != 0; }
  int carrier_size(const std::string& c) const;
  // Display name for element i of a carrier ("<carrier><i+1>" unless declared).
  std::string elem_name(const std::string& c, int i) const;
  Value elem_value(const std::string& c, int i) const;
};

struct ScopeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All values of type t within scope bounds, exactly once, in canonical order.
// PowT yields subsets of the inner enumeration with cardinality <= max_set_card.
std::vector<Value> enumerate_type(const BType& t, const Scope& s);

// Number of values enumerate_type would yield; throws ScopeOverflow past the
// hard limit.
long long enumeration_size(const BType& t, const Scope& s);

}  // namespace bcheck
