#include "bcheck/typecheck.hpp"

#include <algorithm>
#include <cassert>

#include "bcheck/parser.hpp"
#include "bcheck/printer.hpp"

namespace bcheck {

const BType& TypedAst::type_of(const Ast& node) const {
  auto it = types.find(&node);
  if (it == types.end())
    throw std::logic_error("no type recorded for node");
  return it->second;
}

const std::vector<BType>& TypedAst::binders_of(const Ast& node) const {
  auto it = binder_types.find(&node);
  if (it == binder_types.end())
    throw std::logic_error("no binder types recorded for node");
  return it->second;
}

namespace {

// ---------------------------------------------------------------------------
// Unification engine over a small term arena.
// ---------------------------------------------------------------------------

enum class Tk { Var, Bool, Int, Enum, Prod, Pow };

struct Term {
  Tk k = Tk::Var;
  int a = -1, b = -1;   // children
  int bound = -1;       // Var: bound term, or -1
  std::string carrier;  // Enum
};

class Engine {
 public:
  int mk_var() {
    terms_.push_back({Tk::Var});
    return (int)terms_.size() - 1;
  }
  int mk(Tk k, int a = -1, int b = -1, std::string carrier = "") {
    terms_.push_back({k, a, b, -1, std::move(carrier)});
    return (int)terms_.size() - 1;
  }
  int from_btype(const BType& t) {
    switch (t.kind) {
      case TypeKind::Bool: return mk(Tk::Bool);
      case TypeKind::Int: return mk(Tk::Int);
      case TypeKind::Enum: return mk(Tk::Enum, -1, -1, t.carrier);
      case TypeKind::Prod:
        return mk(Tk::Prod, from_btype(t.left()), from_btype(t.right()));
      case TypeKind::Pow: return mk(Tk::Pow, from_btype(t.inner()));
    }
    return mk_var();
  }

  int find(int id) {
    while (terms_[id].k == Tk::Var && terms_[id].bound != -1)
      id = terms_[id].bound;
    return id;
  }

  Tk head(int id) { return terms_[find(id)].k; }

  void unify(int x, int y, Pos pos) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    Term& tx = terms_[x];
    Term& ty = terms_[y];
    if (tx.k == Tk::Var) {
      if (occurs(x, y)) throw TypeError(pos, "cyclic type");
      terms_[x].bound = y;
      return;
    }
    if (ty.k == Tk::Var) {
      if (occurs(y, x)) throw TypeError(pos, "cyclic type");
      terms_[y].bound = x;
      return;
    }
    if (tx.k != ty.k || (tx.k == Tk::Enum && tx.carrier != ty.carrier))
      throw TypeError(pos, "expected " + show(x) + ", found " + show(y));
    int xa = tx.a, xb = tx.b, ya = ty.a, yb = ty.b;
    if (xa != -1) unify(xa, ya, pos);
    if (xb != -1) unify(xb, yb, pos);
  }

  std::optional<BType> ground(int id) {
    id = find(id);
    const Term& t = terms_[id];
    switch (t.k) {
      case Tk::Var: return std::nullopt;
      case Tk::Bool: return BType::boolean();
      case Tk::Int: return BType::integer();
      case Tk::Enum: return BType::enumerated(t.carrier);
      case Tk::Prod: {
        auto l = ground(t.a), r = ground(t.b);
        if (!l || !r) return std::nullopt;
        return BType::prod(*l, *r);
      }
      case Tk::Pow: {
        auto i = ground(t.a);
        if (!i) return std::nullopt;
        return BType::pow(*i);
      }
    }
    return std::nullopt;
  }

  std::string show(int id) {
    id = find(id);
    const Term& t = terms_[id];
    switch (t.k) {
      case Tk::Var: return "?" + std::to_string(id);
      case Tk::Bool: return "BOOL";
      case Tk::Int: return "INTEGER";
      case Tk::Enum: return t.carrier;
      case Tk::Prod: return "(" + show(t.a) + "*" + show(t.b) + ")";
      case Tk::Pow: return "POW(" + show(t.a) + ")";
    }
    return "?";
  }

 private:
  bool occurs(int var, int id) {
    id = find(id);
    if (id == var) return true;
    const Term& t = terms_[id];
    if (t.a != -1 && occurs(var, t.a)) return true;
    if (t.b != -1 && occurs(var, t.b)) return true;
    return false;
  }

  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// AST walk
// ---------------------------------------------------------------------------

struct Deferred {
  bool is_mul;  // '*' vs '-'
  int a, b, r;
  Pos pos;
  bool done = false;
};

class Inferencer {
 public:
  Inferencer(const TypeEnv& env, const Scope& scope, bool allow_free)
      : env_(env), scope_(scope), allow_free_(allow_free) {
    for (const auto& [c, n] : scope.carriers)
      for (int i = 0; i < n; ++i) elem_carrier_[scope.elem_name(c, i)] = c;
  }

  TypedAst run(const Ast& ast) {
    if (is_pred_kind(ast.kind))
      visit_pred(ast);
    else
      node_term_[&ast] = visit_expr(ast);
    resolve_deferred();
    TypedAst out;
    out.root = &ast;
    for (const auto& [node, term] : node_term_) {
      auto t = eng_.ground(term);
      if (!t)
        throw TypeError(node->pos, "ambiguous type (e.g. unconstrained empty set)");
      out.types[node] = *t;
    }
    for (const auto& [node, terms] : binder_terms_) {
      std::vector<BType> ts;
      for (int term : terms) {
        auto t = eng_.ground(term);
        if (!t) throw TypeError(node->pos, "ambiguous type for bound variable");
        ts.push_back(*t);
      }
      out.binder_types[node] = std::move(ts);
    }
    for (const auto& [name, info] : frees_) {
      auto t = eng_.ground(info.first);
      if (!t)
        throw TypeError(info.second, "ambiguous type for identifier '" + name + "'");
      out.free_types[name] = *t;
    }
    return out;
  }

 private:
  Engine eng_;
  const TypeEnv& env_;
  const Scope& scope_;
  bool allow_free_;
  std::map<std::string, std::string> elem_carrier_;
  std::map<std::string, std::vector<int>> bound_;  // shadowing stack
  std::map<std::string, std::pair<int, Pos>> frees_;
  std::map<const Ast*, int> node_term_;
  std::map<const Ast*, std::vector<int>> binder_terms_;
  std::vector<Deferred> defs_;

  int record(const Ast& a, int term) {
    node_term_[&a] = term;
    return term;
  }

  std::vector<int> push_binders(const Ast& a) {
    std::vector<int> ts;
    for (const auto& v : a.binders) {
      int t = eng_.mk_var();
      bound_[v].push_back(t);
      ts.push_back(t);
    }
    binder_terms_[&a] = ts;
    return ts;
  }

  void pop_binders(const Ast& a) {
    for (const auto& v : a.binders) {
      bound_[v].pop_back();
      if (bound_[v].empty()) bound_.erase(v);
    }
  }

  int fold_prod(const std::vector<int>& ts) {
    int acc = ts[0];
    for (size_t i = 1; i < ts.size(); ++i)
      acc = eng_.mk(Tk::Prod, acc, ts[i]);
    return acc;
  }

  void visit_pred(const Ast& a) {
    switch (a.kind) {
      case Nk::PAnd: case Nk::POr: case Nk::PImplies: case Nk::PEquiv:
        visit_pred(a.kids[0]);
        visit_pred(a.kids[1]);
        return;
      case Nk::PNot:
        visit_pred(a.kids[0]);
        return;
      case Nk::PForall: case Nk::PExists: {
        push_binders(a);
        visit_pred(a.kids[0]);
        pop_binders(a);
        return;
      }
      case Nk::PEq: case Nk::PNeq: {
        int l = visit_expr(a.kids[0]);
        int r = visit_expr(a.kids[1]);
        eng_.unify(l, r, a.pos);
        return;
      }
      case Nk::PMember: case Nk::PNotMember: {
        int x = visit_expr(a.kids[0]);
        int s = visit_expr(a.kids[1]);
        eng_.unify(s, eng_.mk(Tk::Pow, x), a.pos);
        return;
      }
      case Nk::PSubset: case Nk::PNotSubset:
      case Nk::PStrictSubset: case Nk::PNotStrictSubset: {
        int l = visit_expr(a.kids[0]);
        int r = visit_expr(a.kids[1]);
        eng_.unify(l, r, a.pos);
        eng_.unify(l, eng_.mk(Tk::Pow, eng_.mk_var()), a.pos);
        return;
      }
      case Nk::PLt: case Nk::PLe: case Nk::PGt: case Nk::PGe: {
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Int), a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Int), a.pos);
        return;
      }
      default:
        throw TypeError(a.pos, "expected a predicate");
    }
  }

  int visit_expr(const Ast& a) {
    switch (a.kind) {
      case Nk::EInt:
        return record(a, eng_.mk(Tk::Int));
      case Nk::EBool:
        return record(a, eng_.mk(Tk::Bool));
      case Nk::EIdent:
        return record(a, ident_term(a));
      case Nk::ESetLit: {
        int elem = eng_.mk_var();
        for (const Ast& k : a.kids) eng_.unify(visit_expr(k), elem, k.pos);
        return record(a, eng_.mk(Tk::Pow, elem));
      }
      case Nk::EComprehension: {
        auto ts = push_binders(a);
        visit_pred(a.kids[0]);
        pop_binders(a);
        return record(a, eng_.mk(Tk::Pow, fold_prod(ts)));
      }
      case Nk::ELambda: {
        auto ts = push_binders(a);
        visit_pred(a.kids[0]);
        int body = visit_expr(a.kids[1]);
        pop_binders(a);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, fold_prod(ts), body)));
      }
      case Nk::EMaplet:
        return record(a, eng_.mk(Tk::Prod, visit_expr(a.kids[0]),
                                 visit_expr(a.kids[1])));
      case Nk::EInterval: {
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Int), a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Int), a.pos);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Int)));
      }
      case Nk::EUnion: case Nk::EInter: case Nk::EOverride: {
        int l = visit_expr(a.kids[0]);
        int r = visit_expr(a.kids[1]);
        eng_.unify(l, r, a.pos);
        eng_.unify(l, eng_.mk(Tk::Pow, eng_.mk_var()), a.pos);
        return record(a, l);
      }
      case Nk::EDiff: {
        // '\' is set-only; '-' (EMinus) is the overloaded one
        int l = visit_expr(a.kids[0]);
        int r = visit_expr(a.kids[1]);
        eng_.unify(l, r, a.pos);
        eng_.unify(l, eng_.mk(Tk::Pow, eng_.mk_var()), a.pos);
        return record(a, l);
      }
      case Nk::EDomRestr: case Nk::EDomSub: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        int rel = eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be));
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, al), a.pos);
        eng_.unify(visit_expr(a.kids[1]), rel, a.pos);
        return record(a, rel);
      }
      case Nk::ERanRestr: case Nk::ERanSub: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        int rel = eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be));
        eng_.unify(visit_expr(a.kids[0]), rel, a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Pow, be), a.pos);
        return record(a, rel);
      }
      case Nk::ECompose: {
        int al = eng_.mk_var(), be = eng_.mk_var(), ga = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        eng_.unify(visit_expr(a.kids[1]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, be, ga)), a.pos);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, ga)));
      }
      case Nk::EConcat: {
        int al = eng_.mk_var();
        int seq = eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, eng_.mk(Tk::Int), al));
        eng_.unify(visit_expr(a.kids[0]), seq, a.pos);
        eng_.unify(visit_expr(a.kids[1]), seq, a.pos);
        return record(a, seq);
      }
      case Nk::ERelSpace: case Nk::EPartialFn: case Nk::ETotalFn:
      case Nk::EPartialInj: case Nk::ETotalInj: case Nk::EPartialSurj:
      case Nk::ETotalSurj: case Nk::EBijection: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, al), a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Pow, be), a.pos);
        return record(
            a, eng_.mk(Tk::Pow, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be))));
      }
      case Nk::EPlus: case Nk::EDiv: case Nk::EMod: case Nk::EPowOp: {
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Int), a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Int), a.pos);
        return record(a, eng_.mk(Tk::Int));
      }
      case Nk::EMul: case Nk::EMinus: {
        int l = visit_expr(a.kids[0]);
        int r = visit_expr(a.kids[1]);
        int res = eng_.mk_var();
        defs_.push_back({a.kind == Nk::EMul, l, r, res, a.pos});
        return record(a, res);
      }
      case Nk::EUMinus: {
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Int), a.pos);
        return record(a, eng_.mk(Tk::Int));
      }
      case Nk::EInverse: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, be, al)));
      }
      case Nk::EImage: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        eng_.unify(visit_expr(a.kids[1]), eng_.mk(Tk::Pow, al), a.pos);
        return record(a, eng_.mk(Tk::Pow, be));
      }
      case Nk::EApply: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        eng_.unify(visit_expr(a.kids[1]), al, a.pos);
        return record(a, be);
      }
      case Nk::EPow: case Nk::EPow1: case Nk::EFin: case Nk::EFin1: {
        int inner = eng_.mk(Tk::Pow, eng_.mk_var());
        eng_.unify(visit_expr(a.kids[0]), inner, a.pos);
        return record(a, eng_.mk(Tk::Pow, inner));
      }
      case Nk::EDom: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        return record(a, eng_.mk(Tk::Pow, al));
      }
      case Nk::ERan: {
        int al = eng_.mk_var(), be = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), a.pos);
        return record(a, eng_.mk(Tk::Pow, be));
      }
      case Nk::ECard: {
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, eng_.mk_var()), a.pos);
        return record(a, eng_.mk(Tk::Int));
      }
      case Nk::EGenUnion: case Nk::EGenInter: {
        int inner = eng_.mk(Tk::Pow, eng_.mk_var());
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, inner), a.pos);
        return record(a, inner);
      }
      case Nk::EMin: case Nk::EMax: {
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Int)), a.pos);
        return record(a, eng_.mk(Tk::Int));
      }
      case Nk::EIdFn: {
        int al = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, al), a.pos);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, al)));
      }
      case Nk::ESeqSpace: {
        int al = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]), eng_.mk(Tk::Pow, al), a.pos);
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Pow, eng_.mk(
                             Tk::Prod, eng_.mk(Tk::Int), al))));
      }
      case Nk::ESize: {
        int al = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, eng_.mk(Tk::Int), al)),
                   a.pos);
        return record(a, eng_.mk(Tk::Int));
      }
      case Nk::EFirst: case Nk::ELast: {
        int al = eng_.mk_var();
        eng_.unify(visit_expr(a.kids[0]),
                   eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, eng_.mk(Tk::Int), al)),
                   a.pos);
        return record(a, al);
      }
      case Nk::EFront: case Nk::ETail: case Nk::ERev: {
        int al = eng_.mk_var();
        int seq = eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, eng_.mk(Tk::Int), al));
        eng_.unify(visit_expr(a.kids[0]), seq, a.pos);
        return record(a, seq);
      }
      case Nk::EIntegerSet: case Nk::EIntSet: case Nk::ENaturalSet:
      case Nk::ENatSet: case Nk::ENatural1Set: case Nk::ENat1Set:
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Int)));
      case Nk::EBoolSet:
        return record(a, eng_.mk(Tk::Pow, eng_.mk(Tk::Bool)));
      default:
        throw TypeError(a.pos, "expected an expression");
    }
  }

  int ident_term(const Ast& a) {
    if (auto it = bound_.find(a.name); it != bound_.end() && !it->second.empty())
      return it->second.back();
    if (auto it = env_.find(a.name); it != env_.end())
      return eng_.from_btype(it->second);
    if (auto it = elem_carrier_.find(a.name); it != elem_carrier_.end())
      return eng_.mk(Tk::Enum, -1, -1, it->second);
    if (scope_.has_carrier(a.name))
      return eng_.mk(Tk::Pow, eng_.mk(Tk::Enum, -1, -1, a.name));
    if (allow_free_) {
      auto it = frees_.find(a.name);
      if (it == frees_.end())
        it = frees_.emplace(a.name, std::make_pair(eng_.mk_var(), a.pos)).first;
      return it->second.first;
    }
    throw UnknownIdentifier(a.pos, a.name);
  }

  void resolve_deferred() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (Deferred& d : defs_) {
        if (d.done) continue;
        Tk ha = eng_.head(d.a), hb = eng_.head(d.b), hr = eng_.head(d.r);
        auto any = [&](Tk k) { return ha == k || hb == k || hr == k; };
        if (any(Tk::Int)) {
          int i = eng_.mk(Tk::Int);
          eng_.unify(d.a, i, d.pos);
          eng_.unify(d.b, i, d.pos);
          eng_.unify(d.r, i, d.pos);
          d.done = true;
          progress = true;
        } else if (any(Tk::Pow)) {
          if (d.is_mul) {
            int al = eng_.mk_var(), be = eng_.mk_var();
            eng_.unify(d.a, eng_.mk(Tk::Pow, al), d.pos);
            eng_.unify(d.b, eng_.mk(Tk::Pow, be), d.pos);
            eng_.unify(d.r, eng_.mk(Tk::Pow, eng_.mk(Tk::Prod, al, be)), d.pos);
          } else {
            eng_.unify(d.a, d.b, d.pos);
            eng_.unify(d.a, d.r, d.pos);
          }
          d.done = true;
          progress = true;
        } else if (any(Tk::Bool) || any(Tk::Enum) || any(Tk::Prod)) {
          throw TypeError(d.pos, d.is_mul
                                     ? "'*' expects integers or sets"
                                     : "'-' expects integers or sets");
        }
      }
    }
    for (const Deferred& d : defs_)
      if (!d.done)
        throw TypeError(d.pos, "ambiguous overloaded operator (add a type "
                               "constraint)");
  }
};

}  // namespace

TypedAst infer(const Ast& ast, const TypeEnv& env, const Scope& scope,
               bool allow_free) {
  return Inferencer(env, scope, allow_free).run(ast);
}

Scope machine_scope(const Machine& m, const Scope& base) {
  Scope s = base;
  for (const auto& [carrier, elems] : m.sets) {
    s.carriers[carrier] = (int)elems.size();
    s.elem_names[carrier] = elems;
  }
  return s;
}

TypedMachine infer_machine(const Machine& m, const Scope& base) {
  TypedMachine out;
  out.scope = machine_scope(m, base);
  if (!m.has_properties)
    throw TypeError({}, "machine has no PROPERTIES clause");
  out.properties = infer(m.properties, {}, out.scope, /*allow_free=*/true);
  for (const auto& [name, type] : out.properties.free_types) {
    if (std::find(m.constants.begin(), m.constants.end(), name) ==
        m.constants.end())
      throw UnknownIdentifier(m.properties.pos, name);
    out.const_types[name] = type;
  }
  for (const auto& c : m.constants)
    if (!out.const_types.count(c))
      throw TypeError({}, "constant '" + c + "' does not occur in PROPERTIES");
  for (const Ast& a : m.assertions)
    out.assertions.push_back(infer(a, out.const_types, out.scope));
  return out;
}

// ---------------------------------------------------------------------------
// Typed printing and cross-checking
// ---------------------------------------------------------------------------

namespace {

Ast type_set_expr(const BType& t) {
  switch (t.kind) {
    case TypeKind::Bool: return Ast(Nk::EBoolSet, {});
    case TypeKind::Int: return Ast(Nk::EIntegerSet, {});
    case TypeKind::Enum: return mk_ident(t.carrier);
    case TypeKind::Prod:
      return mk_node(Nk::EMul, {type_set_expr(t.left()), type_set_expr(t.right())});
    case TypeKind::Pow:
      return mk_node(Nk::EPow, {type_set_expr(t.inner())});
  }
  return Ast(Nk::EIntegerSet, {});
}

Ast constraint_for(const std::string& var, const BType& t) {
  return mk_node(Nk::PMember, {mk_ident(var), type_set_expr(t)});
}

Ast conj(std::vector<Ast> preds) {
  Ast acc = std::move(preds[0]);
  for (size_t i = 1; i < preds.size(); ++i)
    acc = mk_node(Nk::PAnd, {std::move(acc), std::move(preds[i])});
  return acc;
}

Ast binder_constraints(const Ast& node, const TypedAst& t) {
  std::vector<Ast> cs;
  const auto& types = t.binders_of(node);
  for (size_t i = 0; i < node.binders.size(); ++i)
    cs.push_back(constraint_for(node.binders[i], types[i]));
  return conj(std::move(cs));
}

Ast annotate_node(const Ast& a, const TypedAst& t) {
  Ast out = a;
  out.kids.clear();
  for (const Ast& k : a.kids) out.kids.push_back(annotate_node(k, t));
  switch (a.kind) {
    case Nk::PForall:
      out.kids[0] = mk_node(Nk::PImplies,
                            {binder_constraints(a, t), std::move(out.kids[0])});
      break;
    case Nk::PExists:
    case Nk::EComprehension:
      out.kids[0] = mk_node(Nk::PAnd,
                            {binder_constraints(a, t), std::move(out.kids[0])});
      break;
    case Nk::ELambda:
      out.kids[0] = mk_node(Nk::PAnd,
                            {binder_constraints(a, t), std::move(out.kids[0])});
      break;
    default:
      break;
  }
  return out;
}

}  // namespace

Ast annotate_types(const Ast& ast, const TypedAst& t) {
  Ast out = annotate_node(ast, t);
  if (!t.free_types.empty() && is_pred_kind(ast.kind)) {
    std::vector<Ast> cs;
    std::vector<std::string> names;
    for (const auto& [name, type] : t.free_types) {
      names.push_back(name);
      cs.push_back(constraint_for(name, type));
    }
    Ast wrapped = mk_binder(Nk::PForall, std::move(names),
                            {mk_node(Nk::PImplies, {conj(std::move(cs)),
                                                    std::move(out)})});
    return wrapped;
  }
  return out;
}

std::string pretty_print_typed(const Ast& ast, const TypedAst& t) {
  return pretty_print(annotate_types(ast, t));
}

namespace {

bool walk_compare(const Ast& o, const TypedAst& t1, const Ast& r,
                  const TypedAst& t2, std::string& why) {
  if (o.kind != r.kind || o.name != r.name || o.num != r.num ||
      o.bval != r.bval || o.binders != r.binders) {
    why = "structure mismatch";
    return false;
  }
  if (!is_pred_kind(o.kind)) {
    if (!(t1.type_of(o) == t2.type_of(r))) {
      why = "type mismatch: " + to_string(t1.type_of(o)) + " vs " +
            to_string(t2.type_of(r));
      return false;
    }
  }
  if (!o.binders.empty()) {
    if (!(t1.binders_of(o) == t2.binders_of(r))) {
      why = "bound-variable type mismatch";
      return false;
    }
  }
  // Skip the inserted constraint in the re-parsed tree.
  auto body_skipping = [&](const Ast& rb, Nk wrapper) -> const Ast* {
    if (rb.kind != wrapper) return nullptr;
    return &rb.kids[1];
  };
  switch (o.kind) {
    case Nk::PForall: {
      const Ast* rb = body_skipping(r.kids[0], Nk::PImplies);
      if (!rb) { why = "missing annotation wrapper"; return false; }
      return walk_compare(o.kids[0], t1, *rb, t2, why);
    }
    case Nk::PExists:
    case Nk::EComprehension: {
      const Ast* rb = body_skipping(r.kids[0], Nk::PAnd);
      if (!rb) { why = "missing annotation wrapper"; return false; }
      return walk_compare(o.kids[0], t1, *rb, t2, why);
    }
    case Nk::ELambda: {
      const Ast* rb = body_skipping(r.kids[0], Nk::PAnd);
      if (!rb) { why = "missing annotation wrapper"; return false; }
      return walk_compare(o.kids[0], t1, *rb, t2, why) &&
             walk_compare(o.kids[1], t1, r.kids[1], t2, why);
    }
    default:
      break;
  }
  if (o.kids.size() != r.kids.size()) {
    why = "child count mismatch";
    return false;
  }
  for (size_t i = 0; i < o.kids.size(); ++i)
    if (!walk_compare(o.kids[i], t1, r.kids[i], t2, why)) return false;
  return true;
}

}  // namespace

CrossReport crosscheck_typing(const std::string& text, const TypeEnv& env,
                              const Scope& scope) {
  CrossReport rep;
  Ast a1;
  bool is_pred = true;
  try {
    try {
      a1 = parse_pred(text);
    } catch (const ParseError&) {
      a1 = parse_expr(text);
      is_pred = false;
    }
  } catch (const std::exception& e) {
    rep.stage = "parse";
    rep.detail = e.what();
    return rep;
  }
  TypedAst t1;
  try {
    t1 = infer(a1, env, scope, /*allow_free=*/true);
  } catch (const TypeError& e) {
    rep.status = CrossReport::Status::NotApplicable;
    rep.stage = "infer";
    rep.detail = e.what();
    return rep;
  }
  if (!is_pred && !t1.free_types.empty()) {
    rep.status = CrossReport::Status::NotApplicable;
    rep.stage = "infer";
    rep.detail = "expression with free identifiers";
    return rep;
  }
  Ast annotated = annotate_types(a1, t1);
  rep.typed_text = pretty_print(annotated);
  Ast a2;
  try {
    a2 = is_pred ? parse_pred(rep.typed_text) : parse_expr(rep.typed_text);
  } catch (const std::exception& e) {
    rep.stage = "reparse";
    rep.detail = e.what();
    return rep;
  }
  TypedAst t2;
  try {
    t2 = infer(a2, env, scope);
  } catch (const std::exception& e) {
    rep.stage = "reinfer";
    rep.detail = e.what();
    return rep;
  }
  const Ast* target = &a2;
  if (is_pred && !t1.free_types.empty()) {
    // peel the synthetic forall wrapper
    if (a2.kind != Nk::PForall || a2.kids[0].kind != Nk::PImplies) {
      rep.stage = "compare";
      rep.detail = "missing free-variable wrapper";
      return rep;
    }
    target = &a2.kids[0].kids[1];
  }
  std::string why;
  if (!walk_compare(a1, t1, *target, t2, why)) {
    rep.stage = "compare";
    rep.detail = why;
    return rep;
  }
  rep.status = CrossReport::Status::Pass;
  return rep;
}

CrossReport crosscheck_machine(const std::string& text, const Scope& base) {
  CrossReport rep;
  Machine m1;
  try {
    m1 = parse_machine(text);
  } catch (const std::exception& e) {
    rep.stage = "parse";
    rep.detail = e.what();
    return rep;
  }
  TypedMachine t1;
  try {
    t1 = infer_machine(m1, base);
  } catch (const TypeError& e) {
    rep.status = CrossReport::Status::NotApplicable;
    rep.stage = "infer";
    rep.detail = e.what();
    return rep;
  }
  Machine annotated = m1;
  {
    std::vector<Ast> cs;
    for (const auto& [name, type] : t1.const_types)
      cs.push_back(constraint_for(name, type));
    Ast props = annotate_node(m1.properties, t1.properties);
    if (!cs.empty())
      props = mk_node(Nk::PAnd, {conj(std::move(cs)), std::move(props)});
    annotated.properties = std::move(props);
    for (size_t i = 0; i < m1.assertions.size(); ++i)
      annotated.assertions[i] = annotate_node(m1.assertions[i], t1.assertions[i]);
  }
  rep.typed_text = pretty_print(annotated);
  Machine m2;
  try {
    m2 = parse_machine(rep.typed_text);
  } catch (const std::exception& e) {
    rep.stage = "reparse";
    rep.detail = e.what();
    return rep;
  }
  TypedMachine t2;
  try {
    t2 = infer_machine(m2, base);
  } catch (const std::exception& e) {
    rep.stage = "reinfer";
    rep.detail = e.what();
    return rep;
  }
  std::string why;
  const Ast* p2 = &m2.properties;
  if (!t1.const_types.empty()) {
    if (p2->kind != Nk::PAnd) {
      rep.stage = "compare";
      rep.detail = "missing constant constraints";
      return rep;
    }
    p2 = &p2->kids[1];
  }
  if (!walk_compare(m1.properties, t1.properties, *p2, t2.properties, why)) {
    rep.stage = "compare";
    rep.detail = "properties: " + why;
    return rep;
  }
  for (size_t i = 0; i < m1.assertions.size(); ++i) {
    if (!walk_compare(m1.assertions[i], t1.assertions[i], m2.assertions[i],
                      t2.assertions[i], why)) {
      rep.stage = "compare";
      rep.detail = "assertion " + std::to_string(i + 1) + ": " + why;
      return rep;
    }
  }
  if (!(t1.const_types == t2.const_types)) {
    rep.stage = "compare";
    rep.detail = "constant types differ";
    return rep;
  }
  rep.status = CrossReport::Status::Pass;
  return rep;
}

}  // namespace bcheck
