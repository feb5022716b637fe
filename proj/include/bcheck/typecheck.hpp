#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcheck/ast.hpp"
#include "bcheck/value.hpp"

namespace bcheck {

struct TypeError : std::runtime_error {
  Pos pos;
  TypeError(Pos p, const std::string& msg)
      : std::runtime_error("type error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg),
        pos(p) {}
};

struct UnknownIdentifier : TypeError {
  UnknownIdentifier(Pos p, const std::string& name)
      : TypeError(p, "unknown identifier '" + name + "'") {}
};

using TypeEnv = std::map<std::string, BType>;

// Per-node type assignment for one inference run.  Maps are keyed by node
// address and stay valid as long as the inferred tree is alive.
struct TypedAst {
  const Ast* root = nullptr;
  std::map<const Ast*, BType> types;                    // expression nodes
  std::map<const Ast*, std::vector<BType>> binder_types;  // quantifier-like nodes
  TypeEnv free_types;  // resolved types of free identifiers (when allowed)

  const BType& type_of(const Ast& node) const;
  const std::vector<BType>& binders_of(const Ast& node) const;
};

// Unification-based inference.  Free identifiers must be in env or declared
// by the scope's carriers/elements; with allow_free they are assigned fresh
// types and reported in free_types.  Every expression node must end up with
// a ground type or a TypeError ("ambiguous") is raised.
TypedAst infer(const Ast& ast, const TypeEnv& env, const Scope& scope,
               bool allow_free = false);

struct TypedMachine {
  Scope scope;  // base scope extended with the machine's SETS
  TypeEnv const_types;
  TypedAst properties;
  std::vector<TypedAst> assertions;
};

Scope machine_scope(const Machine& m, const Scope& base);
TypedMachine infer_machine(const Machine& m, const Scope& base);

// The input with every bound (and free) variable constrained by a
// membership predicate on its type set, re-parseable by the untyped parser.
std::string pretty_print_typed(const Ast& ast, const TypedAst& t);

// AST with the annotations inserted (what pretty_print_typed prints).
Ast annotate_types(const Ast& ast, const TypedAst& t);

struct CrossReport {
  enum class Status { Pass, Fail, NotApplicable };
  Status status = Status::Fail;
  std::string stage;   // where a failure occurred
  std::string detail;
  std::string typed_text;
};

// t1 = infer(parse(text)); s = typed print; t2 = infer(parse(s));
// pass iff per-node types of t1 and t2 agree on corresponding nodes.
CrossReport crosscheck_typing(const std::string& text, const TypeEnv& env,
                              const Scope& scope);
CrossReport crosscheck_machine(const std::string& text, const Scope& base);

}  // namespace bcheck
