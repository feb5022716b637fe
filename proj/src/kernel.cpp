#include "bcheck/kernel.hpp"

#include <algorithm>
#include <set>

namespace bcheck {

// ---------------------------------------------------------------------------
// Mutations
// ---------------------------------------------------------------------------

Mutation mutation_from_string(const std::string& id) {
  if (id == "none" || id == "") return Mutation::None;
  if (id == "M1") return Mutation::M1;
  if (id == "M2") return Mutation::M2;
  if (id == "M3") return Mutation::M3;
  if (id == "M4") return Mutation::M4;
  if (id == "M5") return Mutation::M5;
  throw UnknownMutation(id);
}

std::string to_string(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::M1: return "M1";
    case Mutation::M2: return "M2";
    case Mutation::M3: return "M3";
    case Mutation::M4: return "M4";
    case Mutation::M5: return "M5";
  }
  return "none";
}

const std::vector<Mutation>& all_mutations() {
  static const std::vector<Mutation> ms = {Mutation::M1, Mutation::M2,
                                           Mutation::M3, Mutation::M4,
                                           Mutation::M5};
  return ms;
}

// ---------------------------------------------------------------------------
// Branch registry
// ---------------------------------------------------------------------------

const std::vector<BranchInfo>& kernel_branches() {
  static const std::vector<BranchInfo> b = {
      // arith
      {"add.ok", "arith", false},
      {"sub.ok", "arith", false},
      {"mul.ok", "arith", false},
      {"neg.ok", "arith", false},
      {"div.ok", "arith", false},
      {"div.zero", "arith", false},
      {"mod.ok", "arith", false},
      {"mod.undef", "arith", false},
      {"pow.ok", "arith", false},
      {"pow.zero_zero", "arith", false},
      {"pow.neg_exp", "arith", false},
      {"arith.internal", "arith", true},
      // sets
      {"union.ok", "sets", false},
      {"inter.ok", "sets", false},
      {"diff.ok", "sets", false},
      {"cartesian.ok", "sets", false},
      {"pow.set", "sets", false},
      {"pow1.set", "sets", false},
      {"fin.set", "sets", false},
      {"fin1.set", "sets", false},
      {"gen_union.ok", "sets", false},
      {"gen_inter.ok", "sets", false},
      {"gen_inter.empty", "sets", false},
      {"card.ok", "sets", false},
      {"min.ok", "sets", false},
      {"min.empty", "sets", false},
      {"max.ok", "sets", false},
      {"max.empty", "sets", false},
      {"interval.ok", "sets", false},
      {"interval.empty", "sets", false},
      {"sets.internal", "sets", true},
      // membership / equality / inclusion
      {"member.pos_found", "membership", false},
      {"member.pos_absent", "membership", false},
      {"member.neg_all_differ", "membership", false},
      {"member.neg_equal", "membership", false},
      {"eq.pos_true", "membership", false},
      {"eq.pos_false", "membership", false},
      {"neq.witness", "membership", false},
      {"neq.none", "membership", false},
      {"subset.pos_holds", "membership", false},
      {"subset.pos_fails", "membership", false},
      {"subset.neg_witness", "membership", false},
      {"subset.neg_none", "membership", false},
      {"membership.internal", "membership", true},
      // relations
      {"dom.ok", "relations", false},
      {"ran.ok", "relations", false},
      {"inverse.ok", "relations", false},
      {"compose.ok", "relations", false},
      {"override.ok", "relations", false},
      {"dom_restr.ok", "relations", false},
      {"ran_restr.ok", "relations", false},
      {"dom_sub.ok", "relations", false},
      {"ran_sub.ok", "relations", false},
      {"image.ok", "relations", false},
      {"identity.ok", "relations", false},
      {"apply.ok", "relations", false},
      {"apply.outside", "relations", false},
      {"apply.non_function", "relations", false},
      {"relations.internal", "relations", true},
      // function kinds
      {"fnkind.ok", "functions", false},
      {"fnkind.not_functional", "functions", false},
      {"fnkind.dom_excess", "functions", false},
      {"fnkind.ran_excess", "functions", false},
      {"fnkind.not_total", "functions", false},
      {"fnkind.not_injective", "functions", false},
      {"fnkind.not_surjective", "functions", false},
      {"fnviol.found", "functions", false},
      {"fnviol.none", "functions", false},
      {"fnspace.ok", "functions", false},
      {"functions.internal", "functions", true},
      // sequences
      {"isseq.yes", "sequences", false},
      {"isseq.no", "sequences", false},
      {"size.ok", "sequences", false},
      {"size.undef", "sequences", false},
      {"concat.ok", "sequences", false},
      {"concat.undef", "sequences", false},
      {"first.ok", "sequences", false},
      {"first.undef", "sequences", false},
      {"last.ok", "sequences", false},
      {"last.undef", "sequences", false},
      {"front.ok", "sequences", false},
      {"front.undef", "sequences", false},
      {"tail.ok", "sequences", false},
      {"tail.undef", "sequences", false},
      {"rev.ok", "sequences", false},
      {"rev.undef", "sequences", false},
      {"seq_space.ok", "sequences", false},
      {"sequences.internal", "sequences", true},
      // search enumeration
      {"search.ok", "enum", false},
  };
  return b;
}

bool branch_registered(const std::string& id) {
  static const std::set<std::string> ids = [] {
    std::set<std::string> s;
    for (const auto& b : kernel_branches()) s.insert(b.id);
    return s;
  }();
  return ids.count(id) != 0;
}

namespace {

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

[[noreturn]] void internal(EvalContext& ctx, const char* branch,
                           const std::string& what) {
  ctx.hit(branch);
  throw InternalKernelError(what);
}

const Value& as_set(const Value& v, EvalContext& ctx, const char* branch,
                    const char* op) {
  if (!v.is_set()) internal(ctx, branch, std::string(op) + ": expected a set");
  return v;
}

long long as_int(const Value& v, EvalContext& ctx, const char* branch,
                 const char* op) {
  if (v.kind != ValueKind::Int)
    internal(ctx, branch, std::string(op) + ": expected an integer");
  return v.n;
}

const Value& as_pair(const Value& v, EvalContext& ctx, const char* branch,
                     const char* op) {
  if (v.kind != ValueKind::Pair)
    internal(ctx, branch, std::string(op) + ": expected a pair");
  return v;
}

bool contains(const Value& s, const Value& x) {
  auto it = std::lower_bound(s.items.begin(), s.items.end(), x, value_lt);
  return it != s.items.end() && value_eq(*it, x);
}

long long checked_mul(long long a, long long b, EvalContext& ctx) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    internal(ctx, "arith.internal", "integer overflow");
  return r;
}

// Independent structural difference search (deliberately does not reuse
// compare): returns true iff a distinguishing position exists.
bool struct_differs(const Value& a, const Value& b) {
  if (a.kind != b.kind) return true;
  switch (a.kind) {
    case ValueKind::Bool: return a.b != b.b;
    case ValueKind::Int: return a.n != b.n;
    case ValueKind::Elem:
      return a.carrier != b.carrier || a.index != b.index;
    case ValueKind::Pair:
      return struct_differs(a.left(), b.left()) ||
             struct_differs(a.right(), b.right());
    case ValueKind::Set: {
      if (a.items.size() != b.items.size()) return true;
      for (size_t i = 0; i < a.items.size(); ++i)
        if (struct_differs(a.items[i], b.items[i])) return true;
      return false;
    }
  }
  return false;
}

// All subsets of the given elements; spends fuel per candidate.
std::vector<Value> all_subsets(const std::vector<Value>& elems,
                               EvalContext& ctx) {
  if (elems.size() > 24) ctx.spend(ctx.fuel_left + 1);  // cannot fit in fuel
  size_t n = elems.size();
  std::vector<Value> out;
  out.reserve((size_t)1 << n);
  for (size_t mask = 0; mask < ((size_t)1 << n); ++mask) {
    ctx.spend();
    std::vector<Value> members;
    for (size_t i = 0; i < n; ++i)
      if (mask & ((size_t)1 << i)) members.push_back(elems[i]);
    out.push_back(Value::set(std::move(members)));
  }
  return out;
}

std::vector<Value> seq_elems(const Value& s);  // fwd

}  // namespace

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

Value k_add(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "+");
  long long y = as_int(b, ctx, "arith.internal", "+");
  long long r;
  if (__builtin_add_overflow(x, y, &r))
    internal(ctx, "arith.internal", "integer overflow");
  ctx.hit("add.ok");
  return Value::integer(r);
}

Value k_sub(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "-");
  long long y = as_int(b, ctx, "arith.internal", "-");
  long long r;
  if (__builtin_sub_overflow(x, y, &r))
    internal(ctx, "arith.internal", "integer overflow");
  ctx.hit("sub.ok");
  return Value::integer(r);
}

Value k_mul(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "*");
  long long y = as_int(b, ctx, "arith.internal", "*");
  ctx.hit("mul.ok");
  if (ctx.mutation == Mutation::M2 && x == 3 && y == 3)
    return Value::integer(10);
  return Value::integer(checked_mul(x, y, ctx));
}

Value k_neg(const Value& a, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "unary -");
  ctx.hit("neg.ok");
  return Value::integer(-x);
}

Value k_div(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "/");
  long long y = as_int(b, ctx, "arith.internal", "/");
  if (y == 0) {
    ctx.hit("div.zero");
    throw UndefError("division by zero");
  }
  ctx.hit("div.ok");
  return Value::integer(x / y);  // truncates toward zero
}

Value k_mod(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "mod");
  long long y = as_int(b, ctx, "arith.internal", "mod");
  if (x < 0 || y <= 0) {
    ctx.hit("mod.undef");
    throw UndefError("mod requires a >= 0 and b > 0");
  }
  ctx.hit("mod.ok");
  return Value::integer(x % y);
}

Value k_pow(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  long long x = as_int(a, ctx, "arith.internal", "**");
  long long y = as_int(b, ctx, "arith.internal", "**");
  if (y < 0) {
    ctx.hit("pow.neg_exp");
    throw UndefError("** with negative exponent");
  }
  if (x == 0 && y == 0) {
    ctx.hit("pow.zero_zero");
    return Value::integer(1);  // Atelier-B convention
  }
  long long r = 1;
  for (long long i = 0; i < y; ++i) {
    ctx.spend();
    r = checked_mul(r, x, ctx);
  }
  ctx.hit("pow.ok");
  return Value::integer(r);
}

// ---------------------------------------------------------------------------
// Sets
// ---------------------------------------------------------------------------

Value k_union(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "\\/");
  as_set(b, ctx, "sets.internal", "\\/");
  std::vector<Value> members = a.items;
  members.insert(members.end(), b.items.begin(), b.items.end());
  ctx.spend((long long)members.size());
  ctx.hit("union.ok");
  return Value::set(std::move(members));
}

Value k_inter(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "/\\");
  as_set(b, ctx, "sets.internal", "/\\");
  std::vector<Value> members;
  bool as_difference = ctx.mutation == Mutation::M1;
  for (const Value& x : a.items) {
    ctx.spend();
    if (contains(b, x) != as_difference) members.push_back(x);
  }
  ctx.hit("inter.ok");
  return Value::set(std::move(members));
}

Value k_diff(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "\\");
  as_set(b, ctx, "sets.internal", "\\");
  std::vector<Value> members;
  for (const Value& x : a.items) {
    ctx.spend();
    if (!contains(b, x)) members.push_back(x);
  }
  ctx.hit("diff.ok");
  return Value::set(std::move(members));
}

Value k_cartesian(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "*");
  as_set(b, ctx, "sets.internal", "*");
  std::vector<Value> members;
  for (const Value& x : a.items)
    for (const Value& y : b.items) {
      ctx.spend();
      members.push_back(Value::pair(x, y));
    }
  ctx.hit("cartesian.ok");
  return Value::set(std::move(members));
}

namespace {
Value power_set_of(const Value& a, bool exclude_empty, EvalContext& ctx) {
  std::vector<Value> subsets = all_subsets(a.items, ctx);
  if (exclude_empty) {
    std::erase_if(subsets, [](const Value& s) { return s.items.empty(); });
  }
  return Value::set(std::move(subsets));
}
}  // namespace

Value k_pow_set(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "POW");
  ctx.hit("pow.set");
  return power_set_of(a, false, ctx);
}

Value k_pow1_set(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "POW1");
  ctx.hit("pow1.set");
  return power_set_of(a, true, ctx);
}

Value k_fin_set(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "FIN");
  ctx.hit("fin.set");
  // every subset of a scope-finite set is finite
  return power_set_of(a, false, ctx);
}

Value k_fin1_set(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "FIN1");
  ctx.hit("fin1.set");
  return power_set_of(a, true, ctx);
}

Value k_gen_union(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "union");
  Value acc = Value::empty_set();
  for (const Value& s : a.items) {
    as_set(s, ctx, "sets.internal", "union");
    acc = k_union(acc, s, ctx);
  }
  ctx.hit("gen_union.ok");
  return acc;
}

Value k_gen_inter(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "inter");
  if (a.items.empty()) {
    ctx.hit("gen_inter.empty");
    throw UndefError("inter({}) is undefined");
  }
  Value acc = a.items[0];
  as_set(acc, ctx, "sets.internal", "inter");
  for (size_t i = 1; i < a.items.size(); ++i) {
    as_set(a.items[i], ctx, "sets.internal", "inter");
    acc = k_inter(acc, a.items[i], ctx);
  }
  ctx.hit("gen_inter.ok");
  return acc;
}

Value k_card(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "card");
  ctx.hit("card.ok");
  return Value::integer((long long)a.items.size());
}

Value k_min(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "min");
  if (a.items.empty()) {
    ctx.hit("min.empty");
    throw UndefError("min of empty set");
  }
  long long best = as_int(a.items[0], ctx, "sets.internal", "min");
  for (const Value& v : a.items)
    best = std::min(best, as_int(v, ctx, "sets.internal", "min"));
  ctx.hit("min.ok");
  return Value::integer(best);
}

Value k_max(const Value& a, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "sets.internal", "max");
  if (a.items.empty()) {
    ctx.hit("max.empty");
    throw UndefError("max of empty set");
  }
  long long best = as_int(a.items[0], ctx, "sets.internal", "max");
  for (const Value& v : a.items)
    best = std::max(best, as_int(v, ctx, "sets.internal", "max"));
  ctx.hit("max.ok");
  return Value::integer(best);
}

Value k_interval(const Value& lo, const Value& hi, EvalContext& ctx) {
  ctx.spend();
  long long a = as_int(lo, ctx, "sets.internal", "..");
  long long b = as_int(hi, ctx, "sets.internal", "..");
  if (a > b) {
    ctx.hit("interval.empty");
    return Value::empty_set();
  }
  std::vector<Value> members;
  for (long long i = a; i <= b; ++i) {
    ctx.spend();
    members.push_back(Value::integer(i));
  }
  ctx.hit("interval.ok");
  return Value::set(std::move(members));
}

// ---------------------------------------------------------------------------
// Membership / equality / inclusion
// ---------------------------------------------------------------------------

bool k_member_positive(const Value& x, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "membership.internal", ":");
  bool found = contains(s, x);
  if (ctx.mutation == Mutation::M5 && s.items.size() == 1) found = !found;
  ctx.hit(found ? "member.pos_found" : "member.pos_absent");
  return found;
}

bool k_member_negative(const Value& x, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "membership.internal", "/:");
  for (const Value& m : s.items) {
    ctx.spend();
    if (!struct_differs(x, m)) {
      ctx.hit("member.neg_equal");
      return false;
    }
  }
  ctx.hit("member.neg_all_differ");
  return true;
}

bool k_eq_positive(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  bool eq = value_eq(a, b);
  ctx.hit(eq ? "eq.pos_true" : "eq.pos_false");
  return eq;
}

bool k_neq_witness(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  bool w = struct_differs(a, b);
  ctx.hit(w ? "neq.witness" : "neq.none");
  return w;
}

bool k_subset_positive(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "membership.internal", "<:");
  as_set(b, ctx, "membership.internal", "<:");
  for (const Value& x : a.items) {
    ctx.spend();
    if (!contains(b, x)) {
      ctx.hit("subset.pos_fails");
      return false;
    }
  }
  ctx.hit("subset.pos_holds");
  return true;
}

bool k_subset_negative(const Value& a, const Value& b, EvalContext& ctx) {
  ctx.spend();
  as_set(a, ctx, "membership.internal", "/<:");
  as_set(b, ctx, "membership.internal", "/<:");
  // witness search: a member of a that structurally differs from all of b
  for (const Value& x : a.items) {
    bool differs_from_all = true;
    for (const Value& y : b.items) {
      ctx.spend();
      if (!struct_differs(x, y)) {
        differs_from_all = false;
        break;
      }
    }
    if (differs_from_all) {
      ctx.hit("subset.neg_witness");
      return true;
    }
  }
  ctx.hit("subset.neg_none");
  return false;
}

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

Value k_dom(const Value& r, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "dom");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    members.push_back(as_pair(p, ctx, "relations.internal", "dom").left());
  }
  ctx.hit("dom.ok");
  return Value::set(std::move(members));
}

Value k_ran(const Value& r, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "ran");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    members.push_back(as_pair(p, ctx, "relations.internal", "ran").right());
  }
  ctx.hit("ran.ok");
  return Value::set(std::move(members));
}

Value k_inverse(const Value& r, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "~");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    const Value& q = as_pair(p, ctx, "relations.internal", "~");
    members.push_back(Value::pair(q.right(), q.left()));
  }
  ctx.hit("inverse.ok");
  return Value::set(std::move(members));
}

Value k_compose(const Value& r, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", ";");
  as_set(s, ctx, "relations.internal", ";");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    const Value& rp = as_pair(p, ctx, "relations.internal", ";");
    for (const Value& q : s.items) {
      ctx.spend();
      const Value& sq = as_pair(q, ctx, "relations.internal", ";");
      if (value_eq(rp.right(), sq.left()))
        members.push_back(Value::pair(rp.left(), sq.right()));
    }
  }
  ctx.hit("compose.ok");
  return Value::set(std::move(members));
}

Value k_override(const Value& r, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "<+");
  as_set(s, ctx, "relations.internal", "<+");
  Value sdom = k_dom(s, ctx);
  std::vector<Value> members = s.items;
  for (const Value& p : r.items) {
    ctx.spend();
    const Value& rp = as_pair(p, ctx, "relations.internal", "<+");
    if (!contains(sdom, rp.left())) members.push_back(p);
  }
  ctx.hit("override.ok");
  return Value::set(std::move(members));
}

Value k_dom_restr(const Value& s, const Value& r, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "relations.internal", "<|");
  as_set(r, ctx, "relations.internal", "<|");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    if (contains(s, as_pair(p, ctx, "relations.internal", "<|").left()))
      members.push_back(p);
  }
  ctx.hit("dom_restr.ok");
  return Value::set(std::move(members));
}

Value k_ran_restr(const Value& r, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "|>");
  as_set(s, ctx, "relations.internal", "|>");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    if (contains(s, as_pair(p, ctx, "relations.internal", "|>").right()))
      members.push_back(p);
  }
  ctx.hit("ran_restr.ok");
  return Value::set(std::move(members));
}

Value k_dom_sub(const Value& s, const Value& r, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "relations.internal", "<<|");
  as_set(r, ctx, "relations.internal", "<<|");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    if (!contains(s, as_pair(p, ctx, "relations.internal", "<<|").left()))
      members.push_back(p);
  }
  ctx.hit("dom_sub.ok");
  return Value::set(std::move(members));
}

Value k_ran_sub(const Value& r, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "|>>");
  as_set(s, ctx, "relations.internal", "|>>");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    if (!contains(s, as_pair(p, ctx, "relations.internal", "|>>").right()))
      members.push_back(p);
  }
  ctx.hit("ran_sub.ok");
  return Value::set(std::move(members));
}

Value k_image(const Value& r, const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "relations.internal", "[]");
  as_set(s, ctx, "relations.internal", "[]");
  std::vector<Value> members;
  for (const Value& p : r.items) {
    ctx.spend();
    const Value& rp = as_pair(p, ctx, "relations.internal", "[]");
    if (contains(s, rp.left())) members.push_back(rp.right());
  }
  ctx.hit("image.ok");
  return Value::set(std::move(members));
}

Value k_identity(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "relations.internal", "id");
  std::vector<Value> members;
  for (const Value& x : s.items) {
    ctx.spend();
    members.push_back(Value::pair(x, x));
  }
  ctx.hit("identity.ok");
  return Value::set(std::move(members));
}

Value k_apply(const Value& f, const Value& x, EvalContext& ctx) {
  ctx.spend();
  as_set(f, ctx, "relations.internal", "apply");
  const Value* found = nullptr;
  for (const Value& p : f.items) {
    ctx.spend();
    const Value& fp = as_pair(p, ctx, "relations.internal", "apply");
    if (value_eq(fp.left(), x)) {
      if (found) {
        ctx.hit("apply.non_function");
        throw UndefError("function application at a non-functional point");
      }
      found = &fp;
    }
  }
  if (!found) {
    ctx.hit("apply.outside");
    throw UndefError("function applied outside its domain");
  }
  ctx.hit("apply.ok");
  return found->right();
}

// ---------------------------------------------------------------------------
// Function kinds
// ---------------------------------------------------------------------------

namespace {
bool needs_functional(FnKind k) { return k != FnKind::Relation; }
bool needs_total(FnKind k) {
  return k == FnKind::Total || k == FnKind::TotalInj ||
         k == FnKind::TotalSurj || k == FnKind::Bijection;
}
bool needs_injective(FnKind k) {
  return k == FnKind::PartialInj || k == FnKind::TotalInj ||
         k == FnKind::Bijection;
}
bool needs_surjective(FnKind k) {
  return k == FnKind::PartialSurj || k == FnKind::TotalSurj ||
         k == FnKind::Bijection;
}
}  // namespace

bool k_is_function_kind(const Value& r, const Value& d, const Value& c,
                        FnKind kind, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "functions.internal", "fnkind");
  as_set(d, ctx, "functions.internal", "fnkind");
  as_set(c, ctx, "functions.internal", "fnkind");
  // domain inclusion; M3 checks against the codomain argument instead
  const Value& dom_bound = ctx.mutation == Mutation::M3 ? c : d;
  for (const Value& p : r.items) {
    ctx.spend();
    const Value& rp = as_pair(p, ctx, "functions.internal", "fnkind");
    if (!contains(dom_bound, rp.left())) {
      ctx.hit("fnkind.dom_excess");
      return false;
    }
    if (!contains(c, rp.right())) {
      ctx.hit("fnkind.ran_excess");
      return false;
    }
  }
  if (needs_functional(kind)) {
    // canonical order puts equal left components adjacent
    for (size_t i = 1; i < r.items.size(); ++i) {
      ctx.spend();
      if (value_eq(r.items[i - 1].left(), r.items[i].left())) {
        ctx.hit("fnkind.not_functional");
        return false;
      }
    }
  }
  if (needs_total(kind)) {
    Value rdom = k_dom(r, ctx);
    for (const Value& x : d.items) {
      ctx.spend();
      if (!contains(rdom, x)) {
        ctx.hit("fnkind.not_total");
        return false;
      }
    }
  }
  if (needs_injective(kind)) {
    Value rran = k_ran(r, ctx);
    if (rran.items.size() != r.items.size()) {
      ctx.hit("fnkind.not_injective");
      return false;
    }
  }
  if (needs_surjective(kind)) {
    Value rran = k_ran(r, ctx);
    for (const Value& y : c.items) {
      ctx.spend();
      if (!contains(rran, y)) {
        ctx.hit("fnkind.not_surjective");
        return false;
      }
    }
  }
  ctx.hit("fnkind.ok");
  return true;
}

bool k_function_kind_violation(const Value& r, const Value& d, const Value& c,
                               FnKind kind, EvalContext& ctx) {
  ctx.spend();
  as_set(r, ctx, "functions.internal", "fnviol");
  as_set(d, ctx, "functions.internal", "fnviol");
  as_set(c, ctx, "functions.internal", "fnviol");
  auto found = [&] {
    ctx.hit("fnviol.found");
    return true;
  };
  // a pair escaping d x c
  for (const Value& p : r.items) {
    const Value& rp = as_pair(p, ctx, "functions.internal", "fnviol");
    bool left_in = false, right_in = false;
    for (const Value& x : d.items) {
      ctx.spend();
      if (!struct_differs(rp.left(), x)) { left_in = true; break; }
    }
    for (const Value& y : c.items) {
      ctx.spend();
      if (!struct_differs(rp.right(), y)) { right_in = true; break; }
    }
    if (!left_in || !right_in) return found();
  }
  if (needs_functional(kind)) {
    for (size_t i = 0; i < r.items.size(); ++i)
      for (size_t j = i + 1; j < r.items.size(); ++j) {
        ctx.spend();
        if (!struct_differs(r.items[i].left(), r.items[j].left()))
          return found();
      }
  }
  if (needs_total(kind)) {
    for (const Value& x : d.items) {
      bool covered = false;
      for (const Value& p : r.items) {
        ctx.spend();
        if (!struct_differs(p.left(), x)) { covered = true; break; }
      }
      if (!covered) return found();
    }
  }
  if (needs_injective(kind)) {
    for (size_t i = 0; i < r.items.size(); ++i)
      for (size_t j = i + 1; j < r.items.size(); ++j) {
        ctx.spend();
        if (!struct_differs(r.items[i].right(), r.items[j].right()))
          return found();
      }
  }
  if (needs_surjective(kind)) {
    for (const Value& y : c.items) {
      bool covered = false;
      for (const Value& p : r.items) {
        ctx.spend();
        if (!struct_differs(p.right(), y)) { covered = true; break; }
      }
      if (!covered) return found();
    }
  }
  ctx.hit("fnviol.none");
  return false;
}

Value k_function_space(const Value& d, const Value& c, FnKind kind,
                       EvalContext& ctx) {
  ctx.spend();
  as_set(d, ctx, "functions.internal", "fnspace");
  as_set(c, ctx, "functions.internal", "fnspace");
  Value product = k_cartesian(d, c, ctx);
  std::vector<Value> members;
  for (Value& candidate : all_subsets(product.items, ctx)) {
    if (kind == FnKind::Relation ||
        k_is_function_kind(candidate, d, c, kind, ctx))
      members.push_back(std::move(candidate));
  }
  ctx.hit("fnspace.ok");
  return Value::set(std::move(members));
}

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

namespace {
// Ordered elements of a valid sequence (callers verify first).
std::vector<Value> seq_elems(const Value& s) {
  std::vector<Value> out(s.items.size());
  for (const Value& p : s.items) out[(size_t)p.left().n - 1] = p.right();
  return out;
}

Value seq_of(const std::vector<Value>& elems, EvalContext& ctx) {
  std::vector<Value> pairs;
  for (size_t i = 0; i < elems.size(); ++i) {
    ctx.spend();
    pairs.push_back(Value::pair(Value::integer((long long)i + 1), elems[i]));
  }
  return Value::set(std::move(pairs));
}

const Value& as_seq(const Value& s, EvalContext& ctx, const char* undef_branch,
                    const char* op, bool nonempty = false) {
  if (!k_is_sequence(s, ctx) || (nonempty && s.items.empty())) {
    ctx.hit(undef_branch);
    throw UndefError(std::string(op) + ": not a " +
                     (nonempty ? "non-empty " : "") + "sequence");
  }
  return s;
}
}  // namespace

bool k_is_sequence(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "sequences.internal", "seq");
  // a sequence is a function with domain exactly 1..n
  std::set<long long> seen;
  for (const Value& p : s.items) {
    ctx.spend();
    if (p.kind != ValueKind::Pair || p.left().kind != ValueKind::Int ||
        !seen.insert(p.left().n).second) {
      ctx.hit("isseq.no");
      return false;
    }
  }
  for (long long i = 1; i <= (long long)s.items.size(); ++i)
    if (!seen.count(i)) {
      ctx.hit("isseq.no");
      return false;
    }
  ctx.hit("isseq.yes");
  return true;
}

Value k_size(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "size.undef", "size");
  ctx.hit("size.ok");
  return Value::integer((long long)s.items.size());
}

Value k_concat(const Value& s, const Value& t, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "concat.undef", "^");
  as_seq(t, ctx, "concat.undef", "^");
  std::vector<Value> elems = seq_elems(s);
  std::vector<Value> telems = seq_elems(t);
  elems.insert(elems.end(), telems.begin(), telems.end());
  ctx.hit("concat.ok");
  return seq_of(elems, ctx);
}

Value k_first(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "first.undef", "first", /*nonempty=*/true);
  ctx.hit("first.ok");
  return seq_elems(s).front();
}

Value k_last(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "last.undef", "last", /*nonempty=*/true);
  ctx.hit("last.ok");
  return seq_elems(s).back();
}

Value k_front(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "front.undef", "front", /*nonempty=*/true);
  std::vector<Value> elems = seq_elems(s);
  elems.pop_back();
  ctx.hit("front.ok");
  return seq_of(elems, ctx);
}

Value k_tail(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "tail.undef", "tail", /*nonempty=*/true);
  std::vector<Value> elems = seq_elems(s);
  elems.erase(elems.begin());
  ctx.hit("tail.ok");
  return seq_of(elems, ctx);
}

Value k_rev(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_seq(s, ctx, "rev.undef", "rev");
  std::vector<Value> elems = seq_elems(s);
  std::reverse(elems.begin(), elems.end());
  ctx.hit("rev.ok");
  return seq_of(elems, ctx);
}

Value k_seq_space(const Value& s, EvalContext& ctx) {
  ctx.spend();
  as_set(s, ctx, "sequences.internal", "seq");
  int max_len = ctx.scope ? ctx.scope->max_set_card : 4;
  std::vector<Value> members;
  std::vector<Value> current;
  // all tuples over s of each length, depth-first
  auto rec = [&](auto&& self, int remaining) -> void {
    ctx.spend();
    members.push_back(seq_of(current, ctx));
    if (remaining == 0) return;
    for (const Value& x : s.items) {
      current.push_back(x);
      self(self, remaining - 1);
      current.pop_back();
    }
  };
  rec(rec, max_len);
  ctx.hit("seq_space.ok");
  return Value::set(std::move(members));
}

// ---------------------------------------------------------------------------
// Search enumeration
// ---------------------------------------------------------------------------

std::vector<Value> enumerate_for_search(const BType& t, EvalContext& ctx) {
  std::vector<Value> values = enumerate_type(t, *ctx.scope);
  ctx.spend((long long)values.size());
  if (ctx.mutation == Mutation::M4) {
    std::vector<Value> kept;
    for (size_t i = 0; i < values.size(); ++i)
      if (i % 3 != 2) kept.push_back(std::move(values[i]));
    values = std::move(kept);
  }
  ctx.hit("search.ok");
  return values;
}

}  // namespace bcheck
