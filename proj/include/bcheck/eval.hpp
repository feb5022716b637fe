#pragma once

#include <map>
#include <string>
#include <vector>

#include "bcheck/ast.hpp"
#include "bcheck/kernel.hpp"
#include "bcheck/typecheck.hpp"
#include "bcheck/value.hpp"

namespace bcheck {

// Result of one evaluation chain.  Fail means the chain could not establish
// its polarity (e.g. an undefined subterm); it collapses with False in the
// classification table, but is kept distinct for reporting.
enum class Outcome { True, False, Fail, Timeout };
std::string to_string(Outcome o);

// The nine-row joint classification of the positive and negative chains.
enum class Classification {
  BugBothTrueFalse,
  TrueP,
  FalseP,
  NotWellDefined,
  ProbablyTrue,
  FalseOrUndefined,
  ProbablyFalse,
  TrueOrUndefined,
  Unknown,
};
Classification classify(Outcome pos, Outcome neg);
std::string to_string(Classification c);
// Report rendering: TrueP->"true", FalseP->"false",
// NotWellDefined/Unknown->"unknown", BugBothTrueFalse->"both_true_false",
// remaining rows spelled out.
std::string verdict_string(Classification c);

using ValueEnv = std::map<std::string, Value>;

// Expression evaluation over canonical values.  Throws UndefError,
// TimeoutError, InternalKernelError.  Binder types come from the TypedAst.
Value eval_expr(const Ast& e, const ValueEnv& env, const TypedAst& t,
                EvalContext& ctx);
KernelResult eval_expr_checked(const Ast& e, const ValueEnv& env,
                               const TypedAst& t, EvalContext& ctx);

// One chain each.  Quantifiers expand via enumerate_type; the negative chain
// is structurally dual and its atomic algorithms are independent of the
// positive ones.  Throws TimeoutError on fuel exhaustion.
Outcome eval_pos(const Ast& p, const ValueEnv& env, const TypedAst& t,
                 EvalContext& ctx);
Outcome eval_neg(const Ast& p, const ValueEnv& env, const TypedAst& t,
                 EvalContext& ctx);

struct DualOptions {
  Mutation mutation = Mutation::None;
  CoverageMap* coverage = nullptr;
  bool force_pos_timeout = false;  // test hooks to reach all nine table rows
  bool force_neg_timeout = false;
};

struct DualResult {
  Outcome pos = Outcome::Fail;
  Outcome neg = Outcome::Fail;
  Classification cls = Classification::NotWellDefined;
};

DualResult dual_eval(const Ast& p, const TypedAst& t, const ValueEnv& env,
                     const Scope& scope, const DualOptions& opt = {});

using TypedVars = std::vector<std::pair<std::string, BType>>;

struct SolveResult {
  std::vector<ValueEnv> solutions;  // assignments classifying TrueP
  std::vector<ValueEnv> undefined;  // assignments classifying NotWellDefined
  bool bug = false;                 // some assignment hit BugBothTrueFalse
  bool timeout = false;
  long long cases = 0;
};

// Enumerates assignments of vars (search enumeration, canonical odometer
// order with the last variable varying fastest) merged over base_env.
SolveResult solve(const Ast& p, const TypedAst& t, const TypedVars& vars,
                  const Scope& scope, const DualOptions& opt = {},
                  const ValueEnv& base_env = {});

struct AssertionVerdict {
  std::string text;
  Classification cls = Classification::Unknown;
  std::string verdict;
};

struct MachineReport {
  bool unsat = false;
  ValueEnv binding;  // first PROPERTIES solution in canonical order
  std::vector<AssertionVerdict> assertions;

  bool any_bug() const;
  bool all_true() const;
  std::string to_text() const;
  std::string to_json() const;
};

MachineReport check_machine(const Machine& m, const Scope& base,
                            const DualOptions& opt = {});

}  // namespace bcheck
