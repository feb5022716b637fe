#include "bcheck/eval.hpp"

#include <json.hpp>

#include "bcheck/printer.hpp"

namespace bcheck {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::True: return "true";
    case Outcome::False: return "false";
    case Outcome::Fail: return "fail";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

Classification classify(Outcome pos, Outcome neg) {
  // Fail is a chain that did not succeed, like the table's "false"
  auto fold = [](Outcome o) { return o == Outcome::Fail ? Outcome::False : o; };
  Outcome p = fold(pos), n = fold(neg);
  if (p == Outcome::True && n == Outcome::True)
    return Classification::BugBothTrueFalse;
  if (p == Outcome::True && n == Outcome::False) return Classification::TrueP;
  if (p == Outcome::False && n == Outcome::True) return Classification::FalseP;
  if (p == Outcome::False && n == Outcome::False)
    return Classification::NotWellDefined;
  if (p == Outcome::True) return Classification::ProbablyTrue;
  if (p == Outcome::False) return Classification::FalseOrUndefined;
  if (n == Outcome::True) return Classification::ProbablyFalse;
  if (n == Outcome::False) return Classification::TrueOrUndefined;
  return Classification::Unknown;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::BugBothTrueFalse: return "BugBothTrueFalse";
    case Classification::TrueP: return "TrueP";
    case Classification::FalseP: return "FalseP";
    case Classification::NotWellDefined: return "NotWellDefined";
    case Classification::ProbablyTrue: return "ProbablyTrue";
    case Classification::FalseOrUndefined: return "FalseOrUndefined";
    case Classification::ProbablyFalse: return "ProbablyFalse";
    case Classification::TrueOrUndefined: return "TrueOrUndefined";
    case Classification::Unknown: return "Unknown";
  }
  return "?";
}

std::string verdict_string(Classification c) {
  switch (c) {
    case Classification::BugBothTrueFalse: return "both_true_false";
    case Classification::TrueP: return "true";
    case Classification::FalseP: return "false";
    case Classification::NotWellDefined: return "unknown";
    case Classification::Unknown: return "unknown";
    case Classification::ProbablyTrue: return "probably_true";
    case Classification::FalseOrUndefined: return "false_or_undefined";
    case Classification::ProbablyFalse: return "probably_false";
    case Classification::TrueOrUndefined: return "true_or_undefined";
  }
  return "unknown";
}

namespace {

bool arrow_fn_kind(Nk k, FnKind& out) {
  switch (k) {
    case Nk::ERelSpace: out = FnKind::Relation; return true;
    case Nk::EPartialFn: out = FnKind::Partial; return true;
    case Nk::ETotalFn: out = FnKind::Total; return true;
    case Nk::EPartialInj: out = FnKind::PartialInj; return true;
    case Nk::ETotalInj: out = FnKind::TotalInj; return true;
    case Nk::EPartialSurj: out = FnKind::PartialSurj; return true;
    case Nk::ETotalSurj: out = FnKind::TotalSurj; return true;
    case Nk::EBijection: out = FnKind::Bijection; return true;
    default: return false;
  }
}

Value fold_maplet(const std::vector<Value>& vs) {
  Value acc = vs[0];
  for (size_t i = 1; i < vs.size(); ++i) acc = Value::pair(acc, vs[i]);
  return acc;
}

struct Evaluator {
  const TypedAst& t;
  EvalContext& ctx;

  // ---- identifiers ----
  Value ident(const Ast& e, const ValueEnv& env) {
    if (auto it = env.find(e.name); it != env.end()) return it->second;
    const Scope& s = *ctx.scope;
    for (const auto& [carrier, n] : s.carriers) {
      if (carrier == e.name) {
        std::vector<Value> members;
        for (int i = 0; i < n; ++i) members.push_back(s.elem_value(carrier, i));
        return Value::set(std::move(members));
      }
      for (int i = 0; i < n; ++i)
        if (s.elem_name(carrier, i) == e.name) return s.elem_value(carrier, i);
    }
    throw InternalKernelError("unbound identifier '" + e.name + "'");
  }

  Value scope_int_set(long long lo) {
    const Scope& s = *ctx.scope;
    std::vector<Value> members;
    for (long long i = std::max(lo, s.int_lo); i <= s.int_hi; ++i)
      members.push_back(Value::integer(i));
    return Value::set(std::move(members));
  }

  // ---- binder iteration (full type enumeration, canonical order,
  // last variable fastest) ----
  struct Binders {
    std::vector<std::string> names;
    std::vector<std::vector<Value>> domains;
    std::vector<size_t> idx;
    bool first = true;

    bool next() {
      if (first) {
        first = false;
        for (const auto& d : domains)
          if (d.empty()) return false;
        return true;
      }
      for (size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < domains[i].size()) return true;
        idx[i] = 0;
      }
      return false;
    }
    void bind(ValueEnv& env) const {
      for (size_t i = 0; i < names.size(); ++i)
        env[names[i]] = domains[i][idx[i]];
    }
    std::vector<Value> current() const {
      std::vector<Value> vs;
      for (size_t i = 0; i < names.size(); ++i)
        vs.push_back(domains[i][idx[i]]);
      return vs;
    }
  };

  Binders binders_for(const Ast& q) {
    Binders b;
    b.names = q.binders;
    const auto& types = t.binders_of(q);
    for (const auto& ty : types)
      b.domains.push_back(enumerate_type(ty, *ctx.scope));
    b.idx.assign(b.names.size(), 0);
    return b;
  }

  // ---- expressions ----
  Value expr(const Ast& e, const ValueEnv& env) {
    ctx.spend();
    switch (e.kind) {
      case Nk::EInt: return Value::integer(e.num);
      case Nk::EBool: return Value::boolean(e.bval);
      case Nk::EIdent: return ident(e, env);
      case Nk::ESetLit: {
        std::vector<Value> members;
        for (const Ast& k : e.kids) members.push_back(expr(k, env));
        return Value::set(std::move(members));
      }
      case Nk::EComprehension: {
        Binders b = binders_for(e);
        ValueEnv env2 = env;
        std::vector<Value> members;
        while (b.next()) {
          ctx.spend();
          b.bind(env2);
          // positive chain only: a member is included iff the body
          // positively holds for it
          if (pos(e.kids[0], env2) == Outcome::True)
            members.push_back(fold_maplet(b.current()));
        }
        return Value::set(std::move(members));
      }
      case Nk::ELambda: {
        Binders b = binders_for(e);
        ValueEnv env2 = env;
        std::vector<Value> members;
        while (b.next()) {
          ctx.spend();
          b.bind(env2);
          if (pos(e.kids[0], env2) == Outcome::True)
            members.push_back(
                Value::pair(fold_maplet(b.current()), expr(e.kids[1], env2)));
        }
        return Value::set(std::move(members));
      }
      case Nk::EMaplet:
        return Value::pair(expr(e.kids[0], env), expr(e.kids[1], env));
      case Nk::EInterval:
        return k_interval(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EUnion:
        return k_union(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EInter:
        return k_inter(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EDiff:
        return k_diff(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EOverride:
        return k_override(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EDomRestr:
        return k_dom_restr(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::ERanRestr:
        return k_ran_restr(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EDomSub:
        return k_dom_sub(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::ERanSub:
        return k_ran_sub(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::ECompose:
        return k_compose(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EConcat:
        return k_concat(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EPlus:
        return k_add(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EMinus:
        if (t.type_of(e).kind == TypeKind::Int)
          return k_sub(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
        return k_diff(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EMul:
        if (t.type_of(e).kind == TypeKind::Int)
          return k_mul(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
        return k_cartesian(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EDiv:
        return k_div(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EMod:
        return k_mod(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EPowOp:
        return k_pow(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EUMinus: return k_neg(expr(e.kids[0], env), ctx);
      case Nk::EInverse: return k_inverse(expr(e.kids[0], env), ctx);
      case Nk::EImage:
        return k_image(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EApply:
        return k_apply(expr(e.kids[0], env), expr(e.kids[1], env), ctx);
      case Nk::EPow: return k_pow_set(expr(e.kids[0], env), ctx);
      case Nk::EPow1: return k_pow1_set(expr(e.kids[0], env), ctx);
      case Nk::EFin: return k_fin_set(expr(e.kids[0], env), ctx);
      case Nk::EFin1: return k_fin1_set(expr(e.kids[0], env), ctx);
      case Nk::EDom: return k_dom(expr(e.kids[0], env), ctx);
      case Nk::ERan: return k_ran(expr(e.kids[0], env), ctx);
      case Nk::ECard: return k_card(expr(e.kids[0], env), ctx);
      case Nk::EGenUnion: return k_gen_union(expr(e.kids[0], env), ctx);
      case Nk::EGenInter: return k_gen_inter(expr(e.kids[0], env), ctx);
      case Nk::EMin: return k_min(expr(e.kids[0], env), ctx);
      case Nk::EMax: return k_max(expr(e.kids[0], env), ctx);
      case Nk::EIdFn: return k_identity(expr(e.kids[0], env), ctx);
      case Nk::ESeqSpace: return k_seq_space(expr(e.kids[0], env), ctx);
      case Nk::ESize: return k_size(expr(e.kids[0], env), ctx);
      case Nk::EFirst: return k_first(expr(e.kids[0], env), ctx);
      case Nk::ELast: return k_last(expr(e.kids[0], env), ctx);
      case Nk::EFront: return k_front(expr(e.kids[0], env), ctx);
      case Nk::ETail: return k_tail(expr(e.kids[0], env), ctx);
      case Nk::ERev: return k_rev(expr(e.kids[0], env), ctx);
      case Nk::EIntegerSet: case Nk::EIntSet: return scope_int_set(INT64_MIN);
      case Nk::ENaturalSet: case Nk::ENatSet: return scope_int_set(0);
      case Nk::ENatural1Set: case Nk::ENat1Set: return scope_int_set(1);
      case Nk::EBoolSet:
        return Value::set({Value::boolean(false), Value::boolean(true)});
      default: {
        FnKind fk;
        if (arrow_fn_kind(e.kind, fk))
          return k_function_space(expr(e.kids[0], env), expr(e.kids[1], env),
                                  fk, ctx);
        throw InternalKernelError("expression kind not handled");
      }
    }
  }

  // ---- atomic predicate helpers ----
  template <class F>
  Outcome atom(F&& f) {
    try {
      return f() ? Outcome::True : Outcome::False;
    } catch (const UndefError&) {
      return Outcome::Fail;
    }
  }

  bool member_pos(const Ast& xa, const Ast& sa, const ValueEnv& env) {
    FnKind fk;
    if (arrow_fn_kind(sa.kind, fk)) {
      Value r = expr(xa, env);
      Value d = expr(sa.kids[0], env);
      Value c = expr(sa.kids[1], env);
      return k_is_function_kind(r, d, c, fk, ctx);
    }
    switch (sa.kind) {
      case Nk::ESeqSpace: {
        Value r = expr(xa, env);
        Value s = expr(sa.kids[0], env);
        return k_is_sequence(r, ctx) &&
               k_subset_positive(k_ran(r, ctx), s, ctx);
      }
      case Nk::EPow: case Nk::EFin:
        return k_subset_positive(expr(xa, env), expr(sa.kids[0], env), ctx);
      case Nk::EPow1: case Nk::EFin1: {
        Value x = expr(xa, env);
        return !x.items.empty() &&
               k_subset_positive(x, expr(sa.kids[0], env), ctx);
      }
      case Nk::EIntegerSet: case Nk::EIntSet:
        expr(xa, env);
        return true;
      case Nk::ENaturalSet: case Nk::ENatSet:
        return expr(xa, env).n >= 0;
      case Nk::ENatural1Set: case Nk::ENat1Set:
        return expr(xa, env).n >= 1;
      case Nk::EBoolSet:
        expr(xa, env);
        return true;
      default:
        return k_member_positive(expr(xa, env), expr(sa, env), ctx);
    }
  }

  bool member_neg(const Ast& xa, const Ast& sa, const ValueEnv& env) {
    FnKind fk;
    if (arrow_fn_kind(sa.kind, fk)) {
      Value r = expr(xa, env);
      Value d = expr(sa.kids[0], env);
      Value c = expr(sa.kids[1], env);
      return k_function_kind_violation(r, d, c, fk, ctx);
    }
    switch (sa.kind) {
      case Nk::ESeqSpace: {
        Value r = expr(xa, env);
        if (!k_is_sequence(r, ctx)) return true;
        Value s = expr(sa.kids[0], env);
        for (const Value& p : r.items)
          if (k_member_negative(p.right(), s, ctx)) return true;
        return false;
      }
      case Nk::EPow: case Nk::EFin:
        return k_subset_negative(expr(xa, env), expr(sa.kids[0], env), ctx);
      case Nk::EPow1: case Nk::EFin1: {
        Value x = expr(xa, env);
        return x.items.empty() ||
               k_subset_negative(x, expr(sa.kids[0], env), ctx);
      }
      case Nk::EIntegerSet: case Nk::EIntSet:
        expr(xa, env);
        return false;
      case Nk::ENaturalSet: case Nk::ENatSet:
        return expr(xa, env).n < 0;
      case Nk::ENatural1Set: case Nk::ENat1Set:
        return expr(xa, env).n < 1;
      case Nk::EBoolSet:
        expr(xa, env);
        return false;
      default:
        return k_member_negative(expr(xa, env), expr(sa, env), ctx);
    }
  }

  // ---- chains ----
  Outcome pos(const Ast& p, const ValueEnv& env) {
    ctx.spend();
    switch (p.kind) {
      case Nk::PAnd: {
        Outcome a = pos(p.kids[0], env);
        if (a != Outcome::True) return a;
        return pos(p.kids[1], env);
      }
      case Nk::POr: {
        Outcome a = pos(p.kids[0], env);
        if (a == Outcome::True) return a;
        Outcome b = pos(p.kids[1], env);
        if (b == Outcome::True) return b;
        if (a == Outcome::Fail || b == Outcome::Fail) return Outcome::Fail;
        return Outcome::False;
      }
      case Nk::PImplies: {
        // pos(P => Q) = neg(P) or pos(Q)
        Outcome a = neg(p.kids[0], env);
        if (a == Outcome::True) return a;
        Outcome b = pos(p.kids[1], env);
        if (b == Outcome::True) return b;
        if (a == Outcome::Fail || b == Outcome::Fail) return Outcome::Fail;
        return Outcome::False;
      }
      case Nk::PEquiv: {
        Outcome pa = pos(p.kids[0], env);
        if (pa == Outcome::True) return pos(p.kids[1], env);
        Outcome na = neg(p.kids[0], env);
        if (na == Outcome::True) return neg(p.kids[1], env);
        return Outcome::Fail;  // left side undefined either way
      }
      case Nk::PNot: return neg(p.kids[0], env);
      case Nk::PForall: {
        Binders b = binders_for(p);
        ValueEnv env2 = env;
        while (b.next()) {
          b.bind(env2);
          Outcome r = pos(p.kids[0], env2);
          if (r != Outcome::True) return r;
        }
        return Outcome::True;
      }
      case Nk::PExists: {
        Binders b = binders_for(p);
        ValueEnv env2 = env;
        bool saw_fail = false;
        while (b.next()) {
          b.bind(env2);
          Outcome r = pos(p.kids[0], env2);
          if (r == Outcome::True) return r;
          if (r == Outcome::Fail) saw_fail = true;
        }
        return saw_fail ? Outcome::Fail : Outcome::False;
      }
      case Nk::PEq:
        return atom([&] {
          return k_eq_positive(expr(p.kids[0], env), expr(p.kids[1], env), ctx);
        });
      case Nk::PNeq:
        return atom([&] {
          return k_neq_witness(expr(p.kids[0], env), expr(p.kids[1], env), ctx);
        });
      case Nk::PMember:
        return atom([&] { return member_pos(p.kids[0], p.kids[1], env); });
      case Nk::PNotMember:
        return atom([&] { return member_neg(p.kids[0], p.kids[1], env); });
      case Nk::PSubset:
        return atom([&] {
          return k_subset_positive(expr(p.kids[0], env), expr(p.kids[1], env),
                                   ctx);
        });
      case Nk::PNotSubset:
        return atom([&] {
          return k_subset_negative(expr(p.kids[0], env), expr(p.kids[1], env),
                                   ctx);
        });
      case Nk::PStrictSubset:
        return atom([&] {
          Value a = expr(p.kids[0], env), b = expr(p.kids[1], env);
          return k_subset_positive(a, b, ctx) && k_neq_witness(a, b, ctx);
        });
      case Nk::PNotStrictSubset:
        return atom([&] {
          Value a = expr(p.kids[0], env), b = expr(p.kids[1], env);
          return k_subset_negative(a, b, ctx) || k_eq_positive(a, b, ctx);
        });
      case Nk::PLt:
        return atom([&] {
          return expr(p.kids[0], env).n < expr(p.kids[1], env).n;
        });
      case Nk::PLe:
        return atom([&] {
          return expr(p.kids[0], env).n <= expr(p.kids[1], env).n;
        });
      case Nk::PGt:
        return atom([&] {
          return expr(p.kids[0], env).n > expr(p.kids[1], env).n;
        });
      case Nk::PGe:
        return atom([&] {
          return expr(p.kids[0], env).n >= expr(p.kids[1], env).n;
        });
      default:
        throw InternalKernelError("predicate kind not handled");
    }
  }

  Outcome neg(const Ast& p, const ValueEnv& env) {
    ctx.spend();
    switch (p.kind) {
      case Nk::PAnd: {
        // neg(P & Q) = neg(P) or neg(Q)
        Outcome a = neg(p.kids[0], env);
        if (a == Outcome::True) return a;
        Outcome b = neg(p.kids[1], env);
        if (b == Outcome::True) return b;
        if (a == Outcome::Fail || b == Outcome::Fail) return Outcome::Fail;
        return Outcome::False;
      }
      case Nk::POr: {
        Outcome a = neg(p.kids[0], env);
        if (a != Outcome::True) return a;
        return neg(p.kids[1], env);
      }
      case Nk::PImplies: {
        // neg(P => Q) = pos(P) & neg(Q)
        Outcome a = pos(p.kids[0], env);
        if (a != Outcome::True) return a;
        return neg(p.kids[1], env);
      }
      case Nk::PEquiv: {
        Outcome pa = pos(p.kids[0], env);
        if (pa == Outcome::True) return neg(p.kids[1], env);
        Outcome na = neg(p.kids[0], env);
        if (na == Outcome::True) return pos(p.kids[1], env);
        return Outcome::Fail;
      }
      case Nk::PNot: return pos(p.kids[0], env);
      case Nk::PForall: {
        // neg(!x.P) = #x.neg(P)
        Binders b = binders_for(p);
        ValueEnv env2 = env;
        bool saw_fail = false;
        while (b.next()) {
          b.bind(env2);
          Outcome r = neg(p.kids[0], env2);
          if (r == Outcome::True) return r;
          if (r == Outcome::Fail) saw_fail = true;
        }
        return saw_fail ? Outcome::Fail : Outcome::False;
      }
      case Nk::PExists: {
        Binders b = binders_for(p);
        ValueEnv env2 = env;
        while (b.next()) {
          b.bind(env2);
          Outcome r = neg(p.kids[0], env2);
          if (r != Outcome::True) return r;
        }
        return Outcome::True;
      }
      case Nk::PEq:
        return atom([&] {
          return k_neq_witness(expr(p.kids[0], env), expr(p.kids[1], env), ctx);
        });
      case Nk::PNeq:
        return atom([&] {
          return k_eq_positive(expr(p.kids[0], env), expr(p.kids[1], env), ctx);
        });
      case Nk::PMember:
        return atom([&] { return member_neg(p.kids[0], p.kids[1], env); });
      case Nk::PNotMember:
        return atom([&] { return member_pos(p.kids[0], p.kids[1], env); });
      case Nk::PSubset:
        return atom([&] {
          return k_subset_negative(expr(p.kids[0], env), expr(p.kids[1], env),
                                   ctx);
        });
      case Nk::PNotSubset:
        return atom([&] {
          return k_subset_positive(expr(p.kids[0], env), expr(p.kids[1], env),
                                   ctx);
        });
      case Nk::PNotStrictSubset:
        return atom([&] {
          Value a = expr(p.kids[0], env), b = expr(p.kids[1], env);
          return k_subset_positive(a, b, ctx) && k_neq_witness(a, b, ctx);
        });
      case Nk::PStrictSubset:
        return atom([&] {
          Value a = expr(p.kids[0], env), b = expr(p.kids[1], env);
          return k_subset_negative(a, b, ctx) || k_eq_positive(a, b, ctx);
        });
      // comparison negatives use the complementary comparison
      case Nk::PLt:
        return atom([&] {
          return expr(p.kids[1], env).n <= expr(p.kids[0], env).n;
        });
      case Nk::PLe:
        return atom([&] {
          return expr(p.kids[1], env).n < expr(p.kids[0], env).n;
        });
      case Nk::PGt:
        return atom([&] {
          return expr(p.kids[1], env).n >= expr(p.kids[0], env).n;
        });
      case Nk::PGe:
        return atom([&] {
          return expr(p.kids[1], env).n > expr(p.kids[0], env).n;
        });
      default:
        throw InternalKernelError("predicate kind not handled");
    }
  }
};

}  // namespace

Value eval_expr(const Ast& e, const ValueEnv& env, const TypedAst& t,
                EvalContext& ctx) {
  Evaluator ev{t, ctx};
  return ev.expr(e, env);
}

KernelResult eval_expr_checked(const Ast& e, const ValueEnv& env,
                               const TypedAst& t, EvalContext& ctx) {
  try {
    return KernelResult::ok(eval_expr(e, env, t, ctx));
  } catch (const UndefError& u) {
    return KernelResult::undef(u.what());
  } catch (const InternalKernelError& i) {
    return KernelResult::internal(i.what());
  }
}

Outcome eval_pos(const Ast& p, const ValueEnv& env, const TypedAst& t,
                 EvalContext& ctx) {
  Evaluator ev{t, ctx};
  return ev.pos(p, env);
}

Outcome eval_neg(const Ast& p, const ValueEnv& env, const TypedAst& t,
                 EvalContext& ctx) {
  Evaluator ev{t, ctx};
  return ev.neg(p, env);
}

DualResult dual_eval(const Ast& p, const TypedAst& t, const ValueEnv& env,
                     const Scope& scope, const DualOptions& opt) {
  DualResult r;
  {
    EvalContext ctx(scope);
    ctx.mutation = opt.mutation;
    ctx.coverage = opt.coverage;
    ctx.force_timeout = opt.force_pos_timeout;
    try {
      r.pos = eval_pos(p, env, t, ctx);
    } catch (const TimeoutError&) {
      r.pos = Outcome::Timeout;
    }
  }
  {
    EvalContext ctx(scope);
    ctx.mutation = opt.mutation;
    ctx.coverage = opt.coverage;
    ctx.force_timeout = opt.force_neg_timeout;
    try {
      r.neg = eval_neg(p, env, t, ctx);
    } catch (const TimeoutError&) {
      r.neg = Outcome::Timeout;
    }
  }
  r.cls = classify(r.pos, r.neg);
  return r;
}

SolveResult solve(const Ast& p, const TypedAst& t, const TypedVars& vars,
                  const Scope& scope, const DualOptions& opt,
                  const ValueEnv& base_env) {
  SolveResult out;
  EvalContext search_ctx(scope);
  search_ctx.mutation = opt.mutation;
  search_ctx.coverage = opt.coverage;
  std::vector<std::vector<Value>> domains;
  for (const auto& [name, type] : vars)
    domains.push_back(enumerate_for_search(type, search_ctx));
  std::vector<size_t> idx(vars.size(), 0);
  bool first = true;
  auto next = [&] {
    if (first) {
      first = false;
      for (const auto& d : domains)
        if (d.empty()) return false;
      return true;
    }
    for (size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < domains[i].size()) return true;
      idx[i] = 0;
    }
    return false;
  };
  while (next()) {
    ValueEnv env = base_env;
    for (size_t i = 0; i < vars.size(); ++i)
      env[vars[i].first] = domains[i][idx[i]];
    ++out.cases;
    DualResult r = dual_eval(p, t, env, scope, opt);
    ValueEnv assignment;
    for (const auto& [name, type] : vars) assignment[name] = env[name];
    switch (r.cls) {
      case Classification::TrueP:
        out.solutions.push_back(std::move(assignment));
        break;
      case Classification::NotWellDefined:
        out.undefined.push_back(std::move(assignment));
        break;
      case Classification::BugBothTrueFalse:
        out.bug = true;
        break;
      case Classification::FalseP:
        break;
      default:
        out.timeout = true;
        break;
    }
  }
  return out;
}

bool MachineReport::any_bug() const {
  for (const auto& a : assertions)
    if (a.cls == Classification::BugBothTrueFalse) return true;
  return false;
}

bool MachineReport::all_true() const {
  if (unsat) return false;
  for (const auto& a : assertions)
    if (a.cls != Classification::TrueP) return false;
  return true;
}

std::string MachineReport::to_text() const {
  if (unsat) return "properties unsatisfiable\n";
  std::string s;
  for (const auto& a : assertions)
    s += a.text + "\n== " + a.verdict + "\n\n";
  return s;
}

std::string MachineReport::to_json() const {
  nlohmann::json j;
  if (unsat) {
    j["unsat"] = true;
    j["assertions"] = nlohmann::json::array();
    return j.dump(2);
  }
  j["unsat"] = false;
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [name, v] : binding) b[name] = to_string(v);
  j["binding"] = b;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : assertions)
    arr.push_back({{"assertion", a.text}, {"verdict", a.verdict}});
  j["assertions"] = arr;
  return j.dump(2);
}

MachineReport check_machine(const Machine& m, const Scope& base,
                            const DualOptions& opt) {
  MachineReport rep;
  TypedMachine tm = infer_machine(m, base);
  TypedVars vars;
  for (const auto& c : m.constants) vars.emplace_back(c, tm.const_types.at(c));
  SolveResult props = solve(m.properties, tm.properties, vars, tm.scope, opt);
  if (props.solutions.empty()) {
    rep.unsat = true;
    return rep;
  }
  rep.binding = props.solutions.front();
  for (size_t i = 0; i < m.assertions.size(); ++i) {
    DualResult r =
        dual_eval(m.assertions[i], tm.assertions[i], rep.binding, tm.scope, opt);
    rep.assertions.push_back(
        {pretty_print(m.assertions[i]), r.cls, verdict_string(r.cls)});
  }
  return rep;
}

}  // namespace bcheck
