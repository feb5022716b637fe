#pragma once

#include <string>

#include "bcheck/ast.hpp"

namespace bcheck {

// Minimal-parentheses printer: a child is parenthesized iff its binding
// strength is lower than the context requires, or equal with mismatched
// associativity.  One canonical whitespace style: operators at the logical,
// comparison, arrow and relational levels get single surrounding spaces,
// tighter operators none.
std::string pretty_print(const Ast& ast);
std::string pretty_print(const Machine& m);

bool machine_eq(const Machine& a, const Machine& b);

struct RoundtripReport {
  bool pass = false;
  std::string printed;       // first normalization pass
  std::string reprinted;     // second pass
  std::string divergence;    // empty when pass
};

// p1 = print(parse(text)); p2 = print(parse(p1)); pass iff p1 == p2
// byte-for-byte and parse(p1) is structurally equal to parse(text).
RoundtripReport roundtrip_check(const std::string& text);
RoundtripReport roundtrip_check_machine(const std::string& text);

}  // namespace bcheck
