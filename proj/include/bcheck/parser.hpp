#pragma once

#include <stdexcept>
#include <string>

#include "bcheck/ast.hpp"
#include "bcheck/lexer.hpp"

namespace bcheck {

struct ParseError : std::runtime_error {
  Pos pos;
  ParseError(Pos p, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg),
        pos(p) {}
};

Ast parse_pred(const std::string& text);
Ast parse_expr(const std::string& text);
Machine parse_machine(const std::string& text);

// Operator surface data shared by the parser and the pretty printer.
enum class Assoc { Left, Right, None };
struct OpInfo {
  const char* symbol;
  int prec;      // binding strength, ascending
  Assoc assoc;
};
// Lookup for infix expression operators / infix predicate connectives /
// comparisons; returns nullptr for other kinds.
const OpInfo* infix_info(Nk k);
// Token text -> expression binop kind (arrow/relational/arith levels).
bool expr_binop_for(const std::string& tok, Nk& out);
// Token text -> comparison kind.
bool comparison_for(const std::string& tok, Nk& out);

}  // namespace bcheck
