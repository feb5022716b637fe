#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bcheck/ast.hpp"

namespace bcheck {

enum class TokKind { Ident, Int, Keyword, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  Pos pos;
};

struct LexError : std::runtime_error {
  Pos pos;
  LexError(Pos p, const std::string& msg)
      : std::runtime_error("lex error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg),
        pos(p) {}
};

// Maximal-munch over the symbol table.  There is no '|-' token, so the '|'
// of a lambda followed by '-' lexes as two tokens, while '|->' is one.
std::vector<Token> tokenize(const std::string& text);

}  // namespace bcheck
