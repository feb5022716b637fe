#include "bcheck/lexer.hpp"

#include <array>
#include <cctype>
#include <set>

namespace bcheck {

namespace {

// Longest first; scanning tries these in order.
const char* kSymbols[] = {
    ">->>", "+->>", "-->>", "/<<:", "<<:", "/<:", "<=>", "<<|", "|>>", "<->",
    "+->", "-->", ">+>", ">->", "|->", "=>", "<:", "<=", ">=", "/=", "/:",
    "<+", "<|", "|>", "\\/", "/\\", "**", "..", "^", "<", ">", "=", ":", "+",
    "-", "*", "/", "\\", "~", ";", ",", ".", "(", ")", "{", "}", "[", "]",
    "|", "%", "!", "#", "&",
};

const std::set<std::string> kKeywords = {
    "MACHINE", "SETS", "CONSTANTS", "PROPERTIES", "ASSERTIONS", "END",
    "POW", "POW1", "FIN", "FIN1",
    "dom", "ran", "card", "union", "inter", "min", "max", "id", "seq",
    "size", "first", "last", "front", "tail", "rev",
    "mod", "not", "or",
    "TRUE", "FALSE", "BOOL",
    "INTEGER", "INT", "NATURAL", "NATURAL1", "NAT", "NAT1",
};

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      size_t end = text.find("*/", i + 2);
      if (end == std::string::npos)
        throw LexError({line, col}, "unterminated comment");
      advance(end + 2 - i);
      continue;
    }
    Pos pos{line, col};
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
      out.push_back({TokKind::Int, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      TokKind k = kKeywords.count(word) ? TokKind::Keyword : TokKind::Ident;
      out.push_back({k, word, pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      size_t len = std::char_traits<char>::length(sym);
      if (text.compare(i, len, sym) == 0) {
        out.push_back({TokKind::Symbol, sym, pos});
        advance(len);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw LexError(pos, std::string("illegal character '") + c + "'");
  }
  out.push_back({TokKind::End, "", {line, col}});
  return out;
}

}  // namespace bcheck
