#include "bcheck/ast.hpp"

namespace bcheck {

bool is_pred_kind(Nk k) {
  switch (k) {
    case Nk::PAnd: case Nk::POr: case Nk::PImplies: case Nk::PEquiv:
    case Nk::PNot: case Nk::PForall: case Nk::PExists:
    case Nk::PEq: case Nk::PNeq: case Nk::PMember: case Nk::PNotMember:
    case Nk::PSubset: case Nk::PNotSubset:
    case Nk::PStrictSubset: case Nk::PNotStrictSubset:
    case Nk::PLt: case Nk::PLe: case Nk::PGt: case Nk::PGe:
      return true;
    default:
      return false;
  }
}

bool is_comparison(Nk k) {
  switch (k) {
    case Nk::PEq: case Nk::PNeq: case Nk::PMember: case Nk::PNotMember:
    case Nk::PSubset: case Nk::PNotSubset:
    case Nk::PStrictSubset: case Nk::PNotStrictSubset:
    case Nk::PLt: case Nk::PLe: case Nk::PGt: case Nk::PGe:
      return true;
    default:
      return false;
  }
}

bool ast_eq(const Ast& a, const Ast& b) {
  if (a.kind != b.kind || a.name != b.name || a.num != b.num ||
      a.bval != b.bval || a.binders != b.binders ||
      a.kids.size() != b.kids.size())
    return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!ast_eq(a.kids[i], b.kids[i])) return false;
  return true;
}

Ast mk_int(long long n) {
  Ast a(Nk::EInt, {});
  a.num = n;
  return a;
}

Ast mk_bool(bool b) {
  Ast a(Nk::EBool, {});
  a.bval = b;
  return a;
}

Ast mk_ident(const std::string& name) {
  Ast a(Nk::EIdent, {});
  a.name = name;
  return a;
}

Ast mk_node(Nk k, std::vector<Ast> kids) {
  Ast a(k, {});
  a.kids = std::move(kids);
  return a;
}

Ast mk_binder(Nk k, std::vector<std::string> vars, std::vector<Ast> kids) {
  Ast a(k, {});
  a.binders = std::move(vars);
  a.kids = std::move(kids);
  return a;
}

}  // namespace bcheck
