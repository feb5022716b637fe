#pragma once

#include <string>
#include <vector>

namespace bcheck {

struct Pos {
  int line = 1;
  int col = 1;
};

// One AST with two syntactic sorts: predicate kinds (P*) and expression
// kinds (E*).  Sort errors are parse errors, not a separate checking pass.
enum class Nk {
  // predicates
  PAnd, POr, PImplies, PEquiv, PNot, PForall, PExists,
  PEq, PNeq, PMember, PNotMember,
  PSubset, PNotSubset, PStrictSubset, PNotStrictSubset,
  PLt, PLe, PGt, PGe,
  // expressions: atoms
  EInt, EBool, EIdent,
  ESetLit, EComprehension, ELambda,
  // infix expression operators
  EMaplet, EInterval,
  EUnion, EInter, EDiff, EOverride,
  EDomRestr, ERanRestr, EDomSub, ERanSub, ECompose,
  ERelSpace, EPartialFn, ETotalFn, EPartialInj, ETotalInj,
  EPartialSurj, ETotalSurj, EBijection,
  EPlus, EMinus, EMul, EDiv, EMod, EPowOp, EConcat,
  // prefix / postfix
  EUMinus, EInverse, EImage, EApply,
  // prefix keyword operators
  EPow, EPow1, EFin, EFin1,
  EDom, ERan, ECard, EGenUnion, EGenInter, EMin, EMax, EIdFn, ESeqSpace,
  ESize, EFirst, ELast, EFront, ETail, ERev,
  // built-in constant sets
  EIntegerSet, EIntSet, ENaturalSet, ENatSet, ENatural1Set, ENat1Set, EBoolSet,
};

struct Ast {
  Nk kind = Nk::EInt;
  Pos pos;
  std::string name;                  // EIdent
  long long num = 0;                 // EInt
  bool bval = false;                 // EBool
  std::vector<std::string> binders;  // PForall/PExists/EComprehension/ELambda
  std::vector<Ast> kids;

  Ast() = default;
  Ast(Nk k, Pos p) : kind(k), pos(p) {}
};

bool is_pred_kind(Nk k);
bool is_comparison(Nk k);

// Structural equality; source positions are ignored.
bool ast_eq(const Ast& a, const Ast& b);

Ast mk_int(long long n);
Ast mk_bool(bool b);
Ast mk_ident(const std::string& name);
Ast mk_node(Nk k, std::vector<Ast> kids);
Ast mk_binder(Nk k, std::vector<std::string> vars, std::vector<Ast> kids);

struct Machine {
  std::string name;
  // SETS ID={aa,bb}; ...
  std::vector<std::pair<std::string, std::vector<std::string>>> sets;
  std::vector<std::string> constants;
  Ast properties;
  std::vector<Ast> assertions;
  bool has_properties = false;
};

}  // namespace bcheck
