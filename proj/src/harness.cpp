#include "bcheck/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bcheck/parser.hpp"
#include "bcheck/printer.hpp"

namespace fs = std::filesystem;

namespace bcheck {

namespace {

// ---------------------------------------------------------------------------
// Value rendering
// ---------------------------------------------------------------------------

std::string value_expr(const Value& v) {
  switch (v.kind) {
    case ValueKind::Bool: return v.b ? "TRUE" : "FALSE";
    case ValueKind::Int:
      return v.n < 0 ? "(" + std::to_string(v.n) + ")" : std::to_string(v.n);
    case ValueKind::Elem: return v.name;
    case ValueKind::Pair:
      return "(" + value_expr(v.left()) + " |-> " + value_expr(v.right()) + ")";
    case ValueKind::Set: {
      std::string s = "{";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) s += ", ";
        s += value_expr(v.items[i]);
      }
      return s + "}";
    }
  }
  return "?";
}

BType value_btype(const Value& v) {
  switch (v.kind) {
    case ValueKind::Bool: return BType::boolean();
    case ValueKind::Int: return BType::integer();
    case ValueKind::Elem: return BType::enumerated(v.carrier);
    case ValueKind::Pair:
      return BType::prod(value_btype(v.left()), value_btype(v.right()));
    case ValueKind::Set:
      // convention: an untyped empty set reads as a set of integers
      return BType::pow(v.items.empty() ? BType::integer()
                                        : value_btype(v.items[0]));
  }
  return BType::integer();
}

// The type-set expression an element rendering can quantify over, when the
// whole value fits inside the enumeration scope.
bool elem_type_text(const Value& s, const Scope& scope, std::string& out) {
  if (s.items.empty()) return false;
  const Value& e = s.items[0];
  switch (e.kind) {
    case ValueKind::Int:
      for (const Value& x : s.items)
        if (x.n < scope.int_lo || x.n > scope.int_hi) return false;
      out = "INTEGER";
      return true;
    case ValueKind::Bool: out = "BOOL"; return true;
    case ValueKind::Elem:
      if (!scope.has_carrier(e.carrier)) return false;
      out = e.carrier;
      return true;
    default: return false;
  }
}

std::string literal_of(const std::vector<Value>& elems) {
  std::string s = "{";
  for (size_t i = 0; i < elems.size(); ++i) {
    if (i) s += ", ";
    s += value_expr(elems[i]);
  }
  return s + "}";
}

// Representation variants of one set value: literal orderings, interval,
// comprehension.
std::vector<std::string> set_renderings(const Value& s, const Scope& scope,
                                        bool unary_context) {
  std::vector<std::string> out;
  if (s.items.empty()) {
    // "{}" alone cannot be typed without a sibling; unary operators get an
    // explicitly integer-typed empty set
    out.push_back(unary_context ? "({1} - {1})" : "{}");
    return out;
  }
  out.push_back(literal_of(s.items));
  if (s.items.size() >= 2) {
    std::vector<Value> rev(s.items.rbegin(), s.items.rend());
    out.push_back(literal_of(rev));
  }
  if (s.items.size() >= 3) {
    std::vector<Value> rot(s.items.begin() + 1, s.items.end());
    rot.push_back(s.items.front());
    out.push_back(literal_of(rot));
  }
  bool contiguous = s.items.size() >= 2;
  for (size_t i = 0; contiguous && i < s.items.size(); ++i)
    contiguous = s.items[i].kind == ValueKind::Int &&
                 s.items[i].n == s.items[0].n + (long long)i;
  if (contiguous)
    out.push_back("(" + std::to_string(s.items[0].n) + ".." +
                  std::to_string(s.items.back().n) + ")");
  std::string ty;
  if (elem_type_text(s, scope, ty)) {
    std::string body;
    for (size_t i = 0; i < s.items.size(); ++i) {
      if (i) body += " or ";
      body += "qq = " + value_expr(s.items[i]);
    }
    if (s.items.size() > 1) body = "(" + body + ")";
    out.push_back("{qq | qq : " + ty + " & " + body + "}");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator registry for the generator
// ---------------------------------------------------------------------------

struct OpSpec {
  const char* id;
  int arity;
  bool commutative;
  bool prefix;  // prefix keyword operator vs infix symbol
  const char* symbol;
};

const OpSpec* op_spec(const std::string& id) {
  static const std::vector<OpSpec> ops = {
      {"union", 2, true, false, "\\/"}, {"inter", 2, true, false, "/\\"},
      {"diff", 2, false, false, "-"},   {"add", 2, true, false, "+"},
      {"mul", 2, true, false, "*"},     {"override", 2, false, false, "<+"},
      {"card", 1, false, true, "card"}, {"dom", 1, false, true, "dom"},
      {"ran", 1, false, true, "ran"},
  };
  for (const auto& o : ops)
    if (id == o.id) return &o;
  return nullptr;
}

std::string combine(const OpSpec& op, const std::vector<std::string>& args) {
  if (op.prefix) return std::string(op.symbol) + "(" + args[0] + ")";
  return args[0] + " " + op.symbol + " " + args[1];
}

}  // namespace

std::vector<GenTest> gen_unit_tests(const SeedFact& seed, const Scope& scope) {
  const OpSpec* op = op_spec(seed.op);
  if (!op) throw UnsupportedOperator(seed.op);
  if ((int)seed.args.size() != op->arity)
    throw UnsupportedOperator(seed.op + "/" +
                              std::to_string(seed.args.size()));

  std::vector<std::vector<std::string>> arg_reps;
  for (const Value& a : seed.args) {
    if (a.is_set())
      arg_reps.push_back(set_renderings(a, scope, op->arity == 1));
    else
      arg_reps.push_back({value_expr(a)});
  }
  std::vector<std::string> result_reps =
      seed.expected.is_set() ? set_renderings(seed.expected, scope, false)
                             : std::vector<std::string>{value_expr(seed.expected)};

  std::vector<GenTest> tests;
  auto add_forward = [&](const std::vector<std::string>& args,
                         const std::string& r) {
    GenTest t;
    t.name = seed.op + "_fwd_" + std::to_string(tests.size());
    t.pred = combine(*op, args) + " = " + r;
    tests.push_back(std::move(t));
  };

  // forward axis: every argument representation x result representation,
  // plus the commutative swap
  std::vector<size_t> idx(arg_reps.size(), 0);
  bool more = true;
  while (more) {
    std::vector<std::string> args;
    for (size_t i = 0; i < idx.size(); ++i) args.push_back(arg_reps[i][idx[i]]);
    for (const std::string& r : result_reps) {
      add_forward(args, r);
      if (op->commutative && op->arity == 2)
        add_forward({args[1], args[0]}, r);
    }
    more = false;
    for (size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < arg_reps[i].size()) {
        more = true;
        break;
      }
      idx[i] = 0;
    }
  }

  // solve axis: each argument position becomes the unknown
  std::string canon_result = result_reps[0];
  for (size_t pos = 0; pos < seed.args.size(); ++pos) {
    size_t other = 0;
    std::vector<std::string> other_reps = {std::string()};
    if (seed.args.size() == 2) {
      other = 1 - pos;
      other_reps = arg_reps[other];
    }
    for (const std::string& rep : other_reps) {
      GenTest t;
      t.name = seed.op + "_solve_" + std::to_string(pos) + "_" +
               std::to_string(tests.size());
      std::vector<std::string> args(seed.args.size());
      args[pos] = "vv";
      if (seed.args.size() == 2) args[other] = rep;
      t.pred = combine(*op, args) + " = " + canon_result;
      t.is_solve = true;
      t.var = "vv";
      t.var_type = value_btype(seed.args[pos]);
      t.expected_value = seed.args[pos];
      tests.push_back(std::move(t));
    }
  }
  return tests;
}

const std::vector<SeedFact>& builtin_seeds() {
  static const std::vector<SeedFact> seeds = [] {
    auto iv = [](long long n) { return Value::integer(n); };
    auto sv = [](std::vector<Value> xs) { return Value::set(std::move(xs)); };
    std::vector<SeedFact> s;
    s.push_back({"union", {sv({iv(1)}), sv({iv(2)})}, sv({iv(1), iv(2)})});
    s.push_back({"union", {sv({}), sv({iv(1)})}, sv({iv(1)})});
    s.push_back({"inter",
                 {sv({iv(1), iv(2)}), sv({iv(2), iv(3)})},
                 sv({iv(2)})});
    s.push_back({"diff", {sv({iv(1), iv(2)}), sv({iv(1)})}, sv({iv(2)})});
    s.push_back({"add", {iv(1), iv(2)}, iv(3)});
    s.push_back({"mul", {iv(3), iv(3)}, iv(9)});
    s.push_back({"mul", {iv(2), iv(2)}, iv(4)});
    s.push_back({"card", {sv({iv(1), iv(2), iv(3)})}, iv(3)});
    s.push_back({"card", {sv({})}, iv(0)});
    // relation seeds use the carrier so the solve direction enumerates
    // POW(ID*ID) (16 values) instead of an integer relation space
    Value e1 = Value::elem("ID", 0, "ID1");
    Value e2 = Value::elem("ID", 1, "ID2");
    s.push_back({"dom", {sv({Value::pair(e1, e2)})}, sv({e1})});
    s.push_back({"ran", {sv({Value::pair(e1, e2)})}, sv({e2})});
    s.push_back({"override",
                 {sv({Value::pair(e1, e1)}), sv({Value::pair(e1, e2)})},
                 sv({Value::pair(e1, e2)})});
    return s;
  }();
  return seeds;
}

SeedFact parse_seed(const std::string& text, const Scope& scope) {
  size_t open = text.find('(');
  if (open == std::string::npos)
    throw std::runtime_error("seed must look like op(args)=result");
  SeedFact seed;
  seed.op = text.substr(0, open);
  int depth = 0;
  size_t close = std::string::npos;
  for (size_t i = open; i < text.size(); ++i) {
    if (text[i] == '(' || text[i] == '{' || text[i] == '[') ++depth;
    if (text[i] == ')' || text[i] == '}' || text[i] == ']') {
      if (--depth == 0) {
        close = i;
        break;
      }
    }
  }
  if (close == std::string::npos)
    throw std::runtime_error("unbalanced seed arguments");
  size_t eq = text.find('=', close);
  if (eq == std::string::npos)
    throw std::runtime_error("seed must end in =result");
  auto eval_text = [&](const std::string& src) {
    Ast a = parse_expr(src);
    // a bare "{}" has no type on its own; as a seed value it is just empty
    if (a.kind == Nk::ESetLit && a.kids.empty()) return Value::empty_set();
    TypedAst t = infer(a, {}, scope);
    EvalContext ctx(scope);
    return eval_expr(a, {}, t, ctx);
  };
  std::string args = text.substr(open + 1, close - open - 1);
  depth = 0;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) seed.args.push_back(eval_text(cur));
    cur.clear();
  };
  for (char c : args) {
    if (c == '(' || c == '{' || c == '[') ++depth;
    if (c == ')' || c == '}' || c == ']') --depth;
    if (c == ',' && depth == 0)
      flush();
    else
      cur += c;
  }
  flush();
  seed.expected = eval_text(text.substr(eq + 1));
  return seed;
}

// ---------------------------------------------------------------------------
// Built-in unit suite
// ---------------------------------------------------------------------------

namespace {

struct UnitItem {
  const char* name;
  const char* pred;
  Classification expected;
};

const std::vector<UnitItem>& unit_items() {
  using C = Classification;
  static const std::vector<UnitItem> items = {
      {"gen_union_textbook",
       "union({{0,5,2,4}, {2,4,5}, {2,1,7,5}}) = {0,1,2,4,5,7}", C::TrueP},
      {"mul_3_3", "3 * 3 = 9", C::TrueP},
      {"div_trunc_pos", "7 / 2 = 3", C::TrueP},
      {"div_trunc_neg", "(-7) / 2 = -3", C::TrueP},
      {"div_by_zero", "1 / 0 = 1", C::NotWellDefined},
      {"mod_ok", "7 mod 2 = 1", C::TrueP},
      {"mod_negative", "(-1) mod 2 = 1", C::NotWellDefined},
      {"mod_zero", "1 mod 0 = 1", C::NotWellDefined},
      {"pow_zero_zero", "0 ** 0 = 1", C::TrueP},
      {"pow_negative_exp", "2 ** (-1) = 0", C::NotWellDefined},
      {"neg_involution", "-(-2) = 2", C::TrueP},
      {"interval_empty", "3..1 = {}", C::TrueP},
      {"min_empty", "min({1} - {1}) = 1", C::NotWellDefined},
      {"max_empty", "max({1} - {1}) = 1", C::NotWellDefined},
      {"gen_inter_empty", "inter({{1}} - {{1}}) = {1}", C::NotWellDefined},
      {"fin_is_pow_here", "FIN({1,2}) = POW({1,2})", C::TrueP},
      {"fin1_is_pow1_here", "FIN1({1,2}) = POW1({1,2})", C::TrueP},
      {"apply_ok", "{1 |-> 2}(1) = 2", C::TrueP},
      {"apply_outside_dom", "{1 |-> 2}(3) = 2", C::NotWellDefined},
      {"apply_non_function", "{1 |-> 2, 1 |-> 3}(1) = 2", C::NotWellDefined},
      {"compose_ok", "({1 |-> 2} ; {2 |-> 5}) = {1 |-> 5}", C::TrueP},
      {"size_non_sequence", "size({3 |-> 1}) = 1", C::NotWellDefined},
      {"concat_non_sequence", "({3 |-> 1} ^ {}) = {}", C::NotWellDefined},
      {"first_non_sequence", "first({3 |-> 1}) = 1", C::NotWellDefined},
      {"last_non_sequence", "last({3 |-> 1}) = 1", C::NotWellDefined},
      {"front_non_sequence", "front({3 |-> 1}) = {}", C::NotWellDefined},
      {"tail_non_sequence", "tail({3 |-> 1}) = {}", C::NotWellDefined},
      {"rev_non_sequence", "rev({3 |-> 1}) = {}", C::NotWellDefined},
      {"seq_space_card", "card(seq({1})) = 5", C::TrueP},
      {"fnspace_card", "card({1} --> {2}) = 1", C::TrueP},
      {"bool_distinct", "TRUE /= FALSE", C::TrueP},
  };
  return items;
}

struct SolveItem {
  const char* name;
  const char* pred;
  const char* var;
  BType type;
  Value expected;       // must appear among the solutions
  long long count;      // exact solution count, -1 to skip
};

const std::vector<SolveItem>& solve_items() {
  static const std::vector<SolveItem> items = [] {
    std::vector<SolveItem> v;
    v.push_back({"solve_square", "x : 1..3 & x * x = 4", "x", BType::integer(),
                 Value::integer(2), 1});
    v.push_back({"solve_carrier", "x : ID & x /= ID2", "x",
                 BType::enumerated("ID"), Value::elem("ID", 0), 1});
    // exact enumeration count: a pruned search loses cases
    v.push_back({"solve_count_int", "x : INTEGER", "x", BType::integer(),
                 Value::integer(0), 7});
    return v;
  }();
  return items;
}

std::string clip(const std::string& s, size_t n = 120) {
  return s.size() <= n ? s : s.substr(0, n) + "...";
}

void record(SuiteResult& r, bool ok, const std::string& what) {
  if (ok) {
    ++r.passed;
  } else {
    ++r.failed;
    if (r.failures.size() < 5) r.failures.push_back(clip(what));
  }
}

void run_gen_test(const GenTest& t, Mutation m, const Scope& scope,
                  CoverageMap* cov, SuiteResult& r) {
  DualOptions opt;
  opt.mutation = m;
  opt.coverage = cov;
  try {
    Ast p = parse_pred(t.pred);
    if (t.is_solve) {
      TypedAst ty = infer(p, {{t.var, t.var_type}}, scope);
      SolveResult sr = solve(p, ty, {{t.var, t.var_type}}, scope, opt);
      bool found = false;
      for (const ValueEnv& env : sr.solutions)
        if (value_eq(env.at(t.var), t.expected_value)) found = true;
      record(r, found, t.name + ": expected solution not found in " + t.pred);
    } else {
      TypedAst ty = infer(p, {}, scope);
      DualResult d = dual_eval(p, ty, {}, scope, opt);
      record(r, d.cls == Classification::TrueP,
             t.name + ": " + t.pred + " classified " + to_string(d.cls));
    }
  } catch (const std::exception& e) {
    record(r, false, t.name + ": " + e.what());
  }
}

std::vector<fs::path> machine_files() {
  std::vector<fs::path> out;
  fs::path dir = default_machines_dir();
  if (fs::exists(dir))
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".mch") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "unit", "generated", "laws", "roundtrip", "crosscheck", "machines"};
  return names;
}

std::string default_machines_dir() {
  return std::string(BCHECK_DATA_DIR) + "/machines";
}

Ast random_pred(std::mt19937& rng, int max_depth) {
  auto pick = [&](int n) { return (int)(rng() % (unsigned)n); };
  static const std::vector<std::string> idents = {"xx", "yy", "zz",
                                                  "SS", "TT", "ff"};

  std::function<Ast(int)> expr = [&](int d) -> Ast {
    if (d <= 0) {
      switch (pick(3)) {
        case 0: return mk_int(pick(4));
        case 1: return mk_bool(pick(2) == 0);
        default: return mk_ident(idents[pick((int)idents.size())]);
      }
    }
    switch (pick(14)) {
      case 0: return mk_node(Nk::EPlus, {expr(d - 1), expr(d - 1)});
      case 1: return mk_node(Nk::EMinus, {expr(d - 1), expr(d - 1)});
      case 2: return mk_node(Nk::EMul, {expr(d - 1), expr(d - 1)});
      case 3: return mk_node(Nk::EUnion, {expr(d - 1), expr(d - 1)});
      case 4: return mk_node(Nk::EInter, {expr(d - 1), expr(d - 1)});
      case 5: return mk_node(Nk::EMaplet, {expr(d - 1), expr(d - 1)});
      case 6: return mk_node(Nk::EInterval, {expr(d - 1), expr(d - 1)});
      case 7: return mk_node(Nk::ECard, {expr(d - 1)});
      case 8: return mk_node(Nk::EDom, {expr(d - 1)});
      case 9: return mk_node(Nk::EInverse, {expr(d - 1)});
      case 10: return mk_node(Nk::EApply, {expr(d - 1), expr(d - 1)});
      case 11: return mk_node(Nk::ECompose, {expr(d - 1), expr(d - 1)});
      case 12: {
        std::vector<Ast> elems;
        int n = pick(3);
        for (int i = 0; i < n; ++i) elems.push_back(expr(d - 1));
        return mk_node(Nk::ESetLit, std::move(elems));
      }
      default: return mk_node(Nk::EUMinus, {expr(d - 1)});
    }
  };

  std::function<Ast(int)> pred = [&](int d) -> Ast {
    if (d <= 0 || pick(3) == 0) {
      static const Nk cmps[] = {Nk::PEq, Nk::PNeq, Nk::PMember, Nk::PNotMember,
                                Nk::PSubset, Nk::PLt, Nk::PLe, Nk::PGt,
                                Nk::PGe};
      return mk_node(cmps[pick(9)], {expr(d), expr(d)});
    }
    switch (pick(7)) {
      case 0: return mk_node(Nk::PAnd, {pred(d - 1), pred(d - 1)});
      case 1: return mk_node(Nk::POr, {pred(d - 1), pred(d - 1)});
      case 2: return mk_node(Nk::PImplies, {pred(d - 1), pred(d - 1)});
      case 3: return mk_node(Nk::PEquiv, {pred(d - 1), pred(d - 1)});
      case 4: return mk_node(Nk::PNot, {pred(d - 1)});
      case 5:
        return mk_binder(Nk::PForall, {idents[pick(3)]}, {pred(d - 1)});
      default:
        return mk_binder(Nk::PExists, {idents[pick(3)], idents[3 + pick(3)]},
                         {pred(d - 1)});
    }
  };
  return pred(max_depth);
}

SuiteResult run_suite(const std::string& suite, Mutation m, const Scope& scope,
                      CoverageMap* coverage, int jobs) {
  SuiteResult r;
  r.suite = suite;

  if (suite == "unit") {
    for (const UnitItem& it : unit_items()) {
      DualOptions opt;
      opt.mutation = m;
      opt.coverage = coverage;
      try {
        Ast p = parse_pred(it.pred);
        TypedAst t = infer(p, {}, scope);
        DualResult d = dual_eval(p, t, {}, scope, opt);
        record(r, d.cls == it.expected,
               std::string(it.name) + ": " + it.pred + " classified " +
                   to_string(d.cls) + ", expected " + to_string(it.expected));
      } catch (const std::exception& e) {
        record(r, false, std::string(it.name) + ": " + e.what());
      }
    }
    for (const SolveItem& it : solve_items()) {
      DualOptions opt;
      opt.mutation = m;
      opt.coverage = coverage;
      try {
        Ast p = parse_pred(it.pred);
        TypedAst t = infer(p, {{it.var, it.type}}, scope);
        SolveResult sr = solve(p, t, {{it.var, it.type}}, scope, opt);
        bool found = false;
        for (const ValueEnv& env : sr.solutions)
          if (value_eq(env.at(it.var), it.expected)) found = true;
        bool count_ok =
            it.count < 0 || (long long)sr.solutions.size() == it.count;
        record(r, found && count_ok,
               std::string(it.name) + ": solve(" + it.pred + ") gave " +
                   std::to_string(sr.solutions.size()) + " solutions");
      } catch (const std::exception& e) {
        record(r, false, std::string(it.name) + ": " + e.what());
      }
    }
    return r;
  }

  if (suite == "generated") {
    for (const SeedFact& seed : builtin_seeds())
      for (const GenTest& t : gen_unit_tests(seed, scope))
        run_gen_test(t, m, scope, coverage, r);
    return r;
  }

  if (suite == "laws") {
    DualOptions opt;
    opt.mutation = m;
    opt.coverage = coverage;
    auto corpus = load_corpus(default_corpus_path(), scope);
    CorpusReport rep = check_corpus(corpus, scope, opt, jobs);
    for (size_t i = 0; i < rep.laws.size(); ++i)
      record(r, rep.laws[i].verdict.ok(),
             rep.laws[i].category + "/" + rep.laws[i].name + ": " +
                 describe(rep.laws[i].verdict, corpus[i].vars));
    return r;
  }

  if (suite == "roundtrip") {
    auto corpus = load_corpus(default_corpus_path(), scope);
    for (const Law& l : corpus) {
      RoundtripReport rep = roundtrip_check(l.text);
      record(r, rep.pass, "law " + l.name + ": " + rep.divergence);
    }
    for (const fs::path& p : machine_files()) {
      RoundtripReport rep = roundtrip_check_machine(slurp(p));
      record(r, rep.pass, p.filename().string() + ": " + rep.divergence);
    }
    std::mt19937 rng(20260823);
    for (int i = 0; i < 1000; ++i) {
      Ast a = random_pred(rng, 6);
      std::string p1 = pretty_print(a);
      try {
        Ast b = parse_pred(p1);
        std::string p2 = pretty_print(b);
        record(r, ast_eq(a, b) && p1 == p2, "random #" + std::to_string(i) +
                                                ": " + clip(p1));
      } catch (const std::exception& e) {
        record(r, false,
               "random #" + std::to_string(i) + ": " + e.what() + " in " +
                   clip(p1));
      }
    }
    return r;
  }

  if (suite == "crosscheck") {
    auto corpus = load_corpus(default_corpus_path(), scope);
    for (const Law& l : corpus) {
      TypeEnv env;
      for (const auto& [v, t] : l.vars) env[v] = t;
      CrossReport rep = crosscheck_typing(l.text, env, scope);
      record(r, rep.status == CrossReport::Status::Pass,
             "law " + l.name + ": " + rep.stage + " " + rep.detail);
    }
    for (const fs::path& p : machine_files()) {
      CrossReport rep = crosscheck_machine(slurp(p), scope);
      record(r, rep.status == CrossReport::Status::Pass,
             p.filename().string() + ": " + rep.stage + " " + rep.detail);
    }
    return r;
  }

  if (suite == "machines") {
    for (const fs::path& p : machine_files()) {
      DualOptions opt;
      opt.mutation = m;
      opt.coverage = coverage;
      try {
        Machine mach = parse_machine(slurp(p));
        MachineReport rep = check_machine(mach, scope, opt);
        std::string why = rep.unsat ? "properties unsatisfiable" : "";
        for (const auto& a : rep.assertions)
          if (a.verdict != "true") why += a.text + " == " + a.verdict + "; ";
        record(r, !rep.unsat && rep.all_true(),
               p.filename().string() + ": " + why);
      } catch (const std::exception& e) {
        record(r, false, p.filename().string() + ": " + e.what());
      }
    }
    return r;
  }

  throw std::runtime_error("unknown suite '" + suite + "'");
}

// ---------------------------------------------------------------------------
// Mutation matrix
// ---------------------------------------------------------------------------

bool MutationMatrix::passed(Mutation m, const std::string& suite) const {
  for (const auto& [mut, flags] : rows)
    if (mut == m)
      for (size_t i = 0; i < suites.size(); ++i)
        if (suites[i] == suite) return flags[i];
  throw std::out_of_range("no such matrix cell");
}

std::string MutationMatrix::to_text() const {
  std::ostringstream out;
  out << "mutation";
  for (const auto& s : suites) out << "  " << s;
  out << "\n";
  for (const auto& [m, flags] : rows) {
    out << to_string(m) << "      ";
    for (size_t i = 0; i < suites.size(); ++i) {
      std::string cell = flags[i] ? "pass" : "FAIL";
      out << "  " << cell << std::string(suites[i].size() > 4
                                             ? suites[i].size() - 4
                                             : 0,
                                         ' ');
    }
    out << "\n";
  }
  return out.str();
}

std::string MutationMatrix::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& [m, flags] : rows) {
    nlohmann::json cells = nlohmann::json::object();
    for (size_t i = 0; i < suites.size(); ++i)
      cells[suites[i]] = flags[i] ? "pass" : "fail";
    rows_json.push_back({{"mutation", to_string(m)}, {"suites", cells}});
  }
  return nlohmann::json{{"matrix", rows_json}}.dump(2);
}

MutationMatrix mutation_matrix(const Scope& scope) {
  MutationMatrix mm;
  mm.suites = {"unit", "generated", "laws"};
  for (Mutation m : all_mutations()) {
    std::vector<bool> flags;
    bool any_fail = false;
    for (const std::string& s : mm.suites) {
      SuiteResult r = run_suite(s, m, scope, nullptr, 4);
      flags.push_back(r.ok());
      if (!r.ok()) any_fail = true;
    }
    if (!any_fail) throw UndetectedMutation(m);
    mm.rows.emplace_back(m, std::move(flags));
  }
  return mm;
}

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

CoverageReport coverage_from(const CoverageMap& cov) {
  CoverageReport rep;
  for (const BranchInfo& b : kernel_branches()) {
    BranchCoverage bc;
    bc.id = b.id;
    bc.group = b.group;
    bc.internal = b.internal;
    if (auto it = cov.find(b.id); it != cov.end()) bc.hits = it->second;
    if (b.internal) {
      rep.internal_hits += bc.hits;
    } else {
      ++rep.total;
      if (bc.hits > 0) ++rep.covered;
    }
    rep.branches.push_back(std::move(bc));
  }
  return rep;
}

CoverageReport coverage_report(const std::vector<std::string>& suites,
                               const Scope& scope) {
  CoverageMap cov;
  for (const std::string& s : suites)
    run_suite(s, Mutation::None, scope, &cov, 4);
  return coverage_from(cov);
}

namespace {

struct GroupStat {
  int covered = 0;
  int total = 0;
};

std::map<std::string, GroupStat> group_stats(const CoverageReport& rep) {
  std::map<std::string, GroupStat> g;
  for (const auto& b : rep.branches) {
    if (b.internal) continue;
    ++g[b.group].total;
    if (b.hits > 0) ++g[b.group].covered;
  }
  return g;
}

}  // namespace

std::string CoverageReport::to_text() const {
  std::ostringstream out;
  out.precision(1);
  out << std::fixed;
  for (const auto& [group, st] : group_stats(*this))
    out << group << ": " << st.covered << "/" << st.total << "\n";
  out << "overall: " << covered << "/" << total << " (" << percent()
      << "%), internal-error hits: " << internal_hits << "\n";
  for (const auto& b : branches)
    if (!b.internal && b.hits == 0) out << "uncovered: " << b.id << "\n";
  return out.str();
}

std::string CoverageReport::to_json() const {
  nlohmann::json branches_json = nlohmann::json::array();
  for (const auto& b : branches)
    branches_json.push_back({{"id", b.id},
                             {"group", b.group},
                             {"hits", b.hits},
                             {"internal", b.internal}});
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [group, st] : group_stats(*this))
    groups[group] = {{"covered", st.covered}, {"total", st.total}};
  return nlohmann::json{{"branches", branches_json},
                        {"groups", groups},
                        {"covered", covered},
                        {"total", total},
                        {"percent", percent()},
                        {"internal_hits", internal_hits}}
      .dump(2);
}

std::string CoverageReport::to_html() const {
  std::ostringstream out;
  out.precision(1);
  out << std::fixed;
  out << "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
      << "<title>kernel coverage</title><style>"
      << "body{font-family:sans-serif} table{border-collapse:collapse}"
      << "td,th{border:1px solid #999;padding:2px 8px}"
      << ".hit{background:#cfc}.miss{background:#fcc}.internal{background:#eee}"
      << "</style></head><body><h1>Kernel branch coverage</h1><p>"
      << covered << "/" << total << " (" << percent()
      << "%), internal-error hits: " << internal_hits << "</p>";
  for (const auto& [group, st] : group_stats(*this)) {
    out << "<h2>" << group << " (" << st.covered << "/" << st.total
        << ")</h2><table><tr><th>branch</th><th>hits</th></tr>";
    for (const auto& b : branches) {
      if (b.group != group) continue;
      const char* cls =
          b.internal ? "internal" : (b.hits > 0 ? "hit" : "miss");
      out << "<tr class=\"" << cls << "\"><td>" << b.id << "</td><td>"
          << b.hits << "</td></tr>";
    }
    out << "</table>";
  }
  out << "</body></html>\n";
  return out.str();
}

}  // namespace bcheck
