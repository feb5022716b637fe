#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcheck/value.hpp"

namespace bcheck {

// ---------------------------------------------------------------------------
// Mutations: deliberately injected kernel faults, gated at runtime.
// ---------------------------------------------------------------------------

enum class Mutation { None, M1, M2, M3, M4, M5 };

struct UnknownMutation : std::runtime_error {
  explicit UnknownMutation(const std::string& id)
      : std::runtime_error("unknown mutation '" + id + "'") {}
};

Mutation mutation_from_string(const std::string& id);
std::string to_string(Mutation m);
const std::vector<Mutation>& all_mutations();  // M1..M5

// ---------------------------------------------------------------------------
// Result conditions.  Operators signal via exceptions; KernelResult is the
// value-level wrapper used at API boundaries.
// ---------------------------------------------------------------------------

struct UndefError : std::runtime_error {
  explicit UndefError(const std::string& reason)
      : std::runtime_error(reason) {}
};

struct TimeoutError : std::runtime_error {
  TimeoutError() : std::runtime_error("fuel exhausted") {}
};

// Reachable only if the tool itself is broken (type-impossible arguments).
struct InternalKernelError : std::logic_error {
  explicit InternalKernelError(const std::string& what)
      : std::logic_error(what) {}
};

struct KernelResult {
  enum class Kind { Ok, Undef, Internal } kind = Kind::Ok;
  Value value;
  std::string detail;

  static KernelResult ok(Value v) { return {Kind::Ok, std::move(v), ""}; }
  static KernelResult undef(std::string d) {
    return {Kind::Undef, {}, std::move(d)};
  }
  static KernelResult internal(std::string d) {
    return {Kind::Internal, {}, std::move(d)};
  }
};

// ---------------------------------------------------------------------------
// Branch registry for coverage accounting.  Branch identity is
// (operator id "." static branch name); internal-error branches are flagged
// and excluded from coverage denominators.
// ---------------------------------------------------------------------------

struct BranchInfo {
  const char* id;       // e.g. "inter.ok"
  const char* group;    // sets | arith | relations | functions | sequences |
                        // membership | enum
  bool internal;
};

const std::vector<BranchInfo>& kernel_branches();
bool branch_registered(const std::string& id);

using CoverageMap = std::map<std::string, long long>;

// ---------------------------------------------------------------------------
// Evaluation context: scope, mutation flag, fuel, coverage sink.  One context
// per evaluation chain; concurrent evaluations use separate contexts.
// ---------------------------------------------------------------------------

struct EvalContext {
  const Scope* scope = nullptr;
  Mutation mutation = Mutation::None;
  long long fuel_left = 0;
  CoverageMap* coverage = nullptr;
  bool force_timeout = false;  // test hook: next spend() times out

  EvalContext() = default;
  explicit EvalContext(const Scope& s) : scope(&s), fuel_left(s.fuel) {}

  void spend(long long n = 1) {
    fuel_left -= n;
    if (force_timeout || fuel_left < 0) throw TimeoutError();
  }
  void hit(const char* branch) {
    if (coverage) ++(*coverage)[branch];
  }
};

// ---------------------------------------------------------------------------
// Arithmetic (checked 64-bit; overflow is an internal error at desk scale).
// ---------------------------------------------------------------------------

Value k_add(const Value& a, const Value& b, EvalContext& ctx);
Value k_sub(const Value& a, const Value& b, EvalContext& ctx);
Value k_mul(const Value& a, const Value& b, EvalContext& ctx);  // M2 hook
Value k_neg(const Value& a, EvalContext& ctx);
Value k_div(const Value& a, const Value& b, EvalContext& ctx);  // truncating
Value k_mod(const Value& a, const Value& b, EvalContext& ctx);
Value k_pow(const Value& a, const Value& b, EvalContext& ctx);

// ---------------------------------------------------------------------------
// Sets
// ---------------------------------------------------------------------------

Value k_union(const Value& a, const Value& b, EvalContext& ctx);
Value k_inter(const Value& a, const Value& b, EvalContext& ctx);  // M1 hook
Value k_diff(const Value& a, const Value& b, EvalContext& ctx);
Value k_cartesian(const Value& a, const Value& b, EvalContext& ctx);
Value k_pow_set(const Value& a, EvalContext& ctx);
Value k_pow1_set(const Value& a, EvalContext& ctx);
Value k_fin_set(const Value& a, EvalContext& ctx);
Value k_fin1_set(const Value& a, EvalContext& ctx);
Value k_gen_union(const Value& a, EvalContext& ctx);
Value k_gen_inter(const Value& a, EvalContext& ctx);  // Undef on {}
Value k_card(const Value& a, EvalContext& ctx);
Value k_min(const Value& a, EvalContext& ctx);  // Undef on {}
Value k_max(const Value& a, EvalContext& ctx);
Value k_interval(const Value& lo, const Value& hi, EvalContext& ctx);

// ---------------------------------------------------------------------------
// Membership / equality / inclusion.  The *_negative algorithms are written
// independently of the positive ones (no shared comparison core): membership
// negation iterates all members testing for a structural difference,
// equality negation searches for a distinguishing position.
// ---------------------------------------------------------------------------

bool k_member_positive(const Value& x, const Value& s, EvalContext& ctx);  // M5
bool k_member_negative(const Value& x, const Value& s, EvalContext& ctx);
bool k_eq_positive(const Value& a, const Value& b, EvalContext& ctx);
bool k_neq_witness(const Value& a, const Value& b, EvalContext& ctx);
bool k_subset_positive(const Value& a, const Value& b, EvalContext& ctx);
bool k_subset_negative(const Value& a, const Value& b, EvalContext& ctx);

// ---------------------------------------------------------------------------
// Relations (sets of pairs)
// ---------------------------------------------------------------------------

Value k_dom(const Value& r, EvalContext& ctx);
Value k_ran(const Value& r, EvalContext& ctx);
Value k_inverse(const Value& r, EvalContext& ctx);
Value k_compose(const Value& r, const Value& s, EvalContext& ctx);  // forward
Value k_override(const Value& r, const Value& s, EvalContext& ctx);
Value k_dom_restr(const Value& s, const Value& r, EvalContext& ctx);
Value k_ran_restr(const Value& r, const Value& s, EvalContext& ctx);
Value k_dom_sub(const Value& s, const Value& r, EvalContext& ctx);
Value k_ran_sub(const Value& r, const Value& s, EvalContext& ctx);
Value k_image(const Value& r, const Value& s, EvalContext& ctx);
Value k_identity(const Value& s, EvalContext& ctx);
Value k_apply(const Value& f, const Value& x, EvalContext& ctx);

// ---------------------------------------------------------------------------
// Function kinds
// ---------------------------------------------------------------------------

enum class FnKind {
  Relation,
  Partial,
  Total,
  PartialInj,
  TotalInj,
  PartialSurj,
  TotalSurj,
  Bijection,
};

// Definitional positive check (functionality, domain/range inclusion,
// totality, injectivity, surjectivity).  M3 hook: domain inclusion checked
// against the wrong argument.
bool k_is_function_kind(const Value& r, const Value& d, const Value& c,
                        FnKind kind, EvalContext& ctx);
// Independent negative check: searches for an explicit violation witness.
bool k_function_kind_violation(const Value& r, const Value& d, const Value& c,
                               FnKind kind, EvalContext& ctx);
// The arrow space as an explicit set (filtered subsets of d x c).
Value k_function_space(const Value& d, const Value& c, FnKind kind,
                       EvalContext& ctx);

// ---------------------------------------------------------------------------
// Sequences: sets of pairs with domain exactly 1..n.
// ---------------------------------------------------------------------------

bool k_is_sequence(const Value& s, EvalContext& ctx);
Value k_size(const Value& s, EvalContext& ctx);
Value k_concat(const Value& s, const Value& t, EvalContext& ctx);
Value k_first(const Value& s, EvalContext& ctx);
Value k_last(const Value& s, EvalContext& ctx);
Value k_front(const Value& s, EvalContext& ctx);
Value k_tail(const Value& s, EvalContext& ctx);
Value k_rev(const Value& s, EvalContext& ctx);
// seq(S): all sequences over S with length <= max_set_card (scope-capped,
// like every other infinite set in this artifact).
Value k_seq_space(const Value& s, EvalContext& ctx);

// ---------------------------------------------------------------------------
// Search enumeration.  M4 hook: skips every third value.  Used only for
// solver/law variable enumeration, never for quantifier expansion or set
// construction, mirroring a fault in the search itself.
// ---------------------------------------------------------------------------

std::vector<Value> enumerate_for_search(const BType& t, EvalContext& ctx);

}  // namespace bcheck
