#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcheck/ast.hpp"
#include "bcheck/eval.hpp"
#include "bcheck/typecheck.hpp"

namespace bcheck {

// One law: a predicate over declared typed variables, checked exhaustively.
struct Law {
  std::string name;
  std::string category;
  TypedVars vars;  // declaration order; the last variable varies fastest
  std::shared_ptr<Ast> body;  // stable address: typed is keyed by node
  TypedAst typed;
  std::string text;  // body as written in the corpus
  int line = 0;
};

struct CorpusError : std::runtime_error {
  int line;
  CorpusError(int l, const std::string& msg)
      : std::runtime_error("corpus line " + std::to_string(l) + ": " + msg),
        line(l) {}
};

struct DuplicateLaw : CorpusError {
  DuplicateLaw(int l, const std::string& name)
      : CorpusError(l, "duplicate law '" + name + "'") {}
};

const std::vector<std::string>& law_categories();

// "name:typeset,..." declarations as used in corpus VARS headers.
TypedVars parse_typed_vars(const std::string& decls, const Scope& scope);

// Corpus format: "SECTION <category> VARS <v:typeset,...>" headers,
// "name == <predicate>" entries, '#' comments.  Laws are parsed and
// type-checked against the declared variables.
std::vector<Law> load_corpus_text(const std::string& text, const Scope& scope);
std::vector<Law> load_corpus(const std::string& path, const Scope& scope);
std::string default_corpus_path();

struct LawVerdict {
  enum class Kind {
    NoCounterexample,
    Counterexample,  // FalseP
    UndefinedAt,     // NotWellDefined
    BugAt,           // BugBothTrueFalse
    TimeoutAt,
  };
  Kind kind = Kind::NoCounterexample;
  long long cases = 0;  // assignments checked up to and including the finding
  ValueEnv env;         // the finding's assignment (empty for NoCounterexample)
  Classification cls = Classification::TrueP;

  bool ok() const { return kind == Kind::NoCounterexample; }
};
std::string to_string(LawVerdict::Kind k);
std::string describe(const LawVerdict& v, const TypedVars& vars);

// Enumerates all assignments (search enumeration, last declared variable
// fastest) and returns the first non-TrueP classification, or
// NoCounterexample with the exact case count.  With `all`, every finding is
// appended and the first one is returned.
LawVerdict check_law(const Law& l, const Scope& scope,
                     const DualOptions& opt = {},
                     std::vector<LawVerdict>* all = nullptr);

struct LawOutcome {
  std::string name;
  std::string category;
  LawVerdict verdict;
};

struct CorpusReport {
  std::vector<LawOutcome> laws;  // corpus order, independent of parallelism
  long long total = 0;
  long long passed = 0;
  long long counterexamples = 0;
  long long undefined = 0;
  long long bugs = 0;
  long long timeouts = 0;

  bool any_bug() const { return bugs > 0; }
  bool clean() const {
    return counterexamples == 0 && undefined == 0 && bugs == 0 &&
           timeouts == 0;
  }
  std::string to_text(const std::vector<Law>& corpus) const;
  std::string to_json(const std::vector<Law>& corpus) const;
};

CorpusReport check_corpus(const std::vector<Law>& corpus, const Scope& scope,
                          const DualOptions& opt = {}, int jobs = 1);

}  // namespace bcheck
