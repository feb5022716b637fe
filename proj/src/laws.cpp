#include "bcheck/laws.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bcheck/parser.hpp"

namespace bcheck {

const std::vector<std::string>& law_categories() {
  static const std::vector<std::string> cats = {
      "booleans",  "arithmetic", "sets",           "relations",
      "functions", "sequences",  "integer-ranges", "basic-integer-sets"};
  return cats;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Split on commas outside parentheses.
std::vector<std::string> split_decls(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// The type of an element of the set denoted by a type expression.
BType btype_of_set_expr(const Ast& e, const Scope& scope, int line) {
  switch (e.kind) {
    case Nk::EIdent:
      if (scope.has_carrier(e.name)) return BType::enumerated(e.name);
      throw CorpusError(line, "unknown carrier '" + e.name + "'");
    case Nk::EIntegerSet: case Nk::EIntSet:
    case Nk::ENaturalSet: case Nk::ENatSet:
    case Nk::ENatural1Set: case Nk::ENat1Set:
    case Nk::EInterval:
      return BType::integer();
    case Nk::EBoolSet: return BType::boolean();
    case Nk::EMul:
      return BType::prod(btype_of_set_expr(e.kids[0], scope, line),
                         btype_of_set_expr(e.kids[1], scope, line));
    case Nk::EPow: case Nk::EPow1: case Nk::EFin: case Nk::EFin1:
      return BType::pow(btype_of_set_expr(e.kids[0], scope, line));
    case Nk::ESeqSpace:
      return BType::pow(BType::prod(
          BType::integer(), btype_of_set_expr(e.kids[0], scope, line)));
    case Nk::ERelSpace:
      return BType::pow(
          BType::prod(btype_of_set_expr(e.kids[0], scope, line),
                      btype_of_set_expr(e.kids[1], scope, line)));
    default:
      throw CorpusError(line, "unsupported variable type expression");
  }
}

}  // namespace

TypedVars parse_typed_vars(const std::string& decls, const Scope& scope) {
  TypedVars vars;
  for (const std::string& decl : split_decls(trim(decls))) {
    size_t colon = decl.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("expected 'name:typeset' in '" + decl + "'");
    std::string name = trim(decl.substr(0, colon));
    Ast tyexpr = parse_expr(trim(decl.substr(colon + 1)));
    vars.emplace_back(name, btype_of_set_expr(tyexpr, scope, 0));
  }
  return vars;
}

std::vector<Law> load_corpus_text(const std::string& text,
                                  const Scope& scope) {
  std::vector<Law> laws;
  std::set<std::string> names;
  std::string category;
  TypedVars vars;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.rfind("SECTION", 0) == 0) {
      std::string rest = trim(s.substr(7));
      size_t sp = rest.find_first_of(" \t");
      category = sp == std::string::npos ? rest : rest.substr(0, sp);
      const auto& cats = law_categories();
      if (std::find(cats.begin(), cats.end(), category) == cats.end())
        throw CorpusError(line, "unknown category '" + category + "'");
      vars.clear();
      std::string tail = sp == std::string::npos ? "" : trim(rest.substr(sp));
      if (!tail.empty()) {
        if (tail.rfind("VARS", 0) != 0)
          throw CorpusError(line, "expected VARS after the category");
        for (const std::string& decl : split_decls(trim(tail.substr(4)))) {
          size_t colon = decl.find(':');
          if (colon == std::string::npos)
            throw CorpusError(line, "expected 'name:typeset' in VARS");
          std::string name = trim(decl.substr(0, colon));
          std::string tytext = trim(decl.substr(colon + 1));
          Ast tyexpr;
          try {
            tyexpr = parse_expr(tytext);
          } catch (const std::exception& e) {
            throw CorpusError(line, std::string("in VARS type: ") + e.what());
          }
          vars.emplace_back(name, btype_of_set_expr(tyexpr, scope, line));
        }
      }
      continue;
    }
    size_t eq = s.find("==");
    if (eq == std::string::npos)
      throw CorpusError(line, "expected 'name == predicate'");
    if (category.empty())
      throw CorpusError(line, "law before the first SECTION header");
    Law l;
    l.name = trim(s.substr(0, eq));
    l.category = category;
    l.vars = vars;
    l.text = trim(s.substr(eq + 2));
    l.line = line;
    if (l.name.empty()) throw CorpusError(line, "empty law name");
    if (!names.insert(l.name).second) throw DuplicateLaw(line, l.name);
    TypeEnv env;
    for (const auto& [v, t] : vars) env[v] = t;
    try {
      l.body = std::make_shared<Ast>(parse_pred(l.text));
      l.typed = infer(*l.body, env, scope);
    } catch (const std::exception& e) {
      throw CorpusError(line, "law '" + l.name + "': " + e.what());
    }
    laws.push_back(std::move(l));
  }
  return laws;
}

std::vector<Law> load_corpus(const std::string& path, const Scope& scope) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_corpus_text(ss.str(), scope);
}

std::string default_corpus_path() {
  return std::string(BCHECK_DATA_DIR) + "/laws.bcorpus";
}

std::string to_string(LawVerdict::Kind k) {
  switch (k) {
    case LawVerdict::Kind::NoCounterexample: return "no_counterexample";
    case LawVerdict::Kind::Counterexample: return "counterexample";
    case LawVerdict::Kind::UndefinedAt: return "undefined_at";
    case LawVerdict::Kind::BugAt: return "bug_at";
    case LawVerdict::Kind::TimeoutAt: return "timeout_at";
  }
  return "?";
}

std::string describe(const LawVerdict& v, const TypedVars& vars) {
  if (v.ok())
    return "no_counterexample (" + std::to_string(v.cases) + " cases)";
  std::string s = to_string(v.kind) + " ";
  bool first = true;
  for (const auto& [name, t] : vars) {
    if (!first) s += ", ";
    first = false;
    s += name + "=" + to_string(v.env.at(name));
  }
  return s;
}

LawVerdict check_law(const Law& l, const Scope& scope, const DualOptions& opt,
                     std::vector<LawVerdict>* all) {
  EvalContext search_ctx(scope);
  search_ctx.mutation = opt.mutation;
  search_ctx.coverage = opt.coverage;
  std::vector<std::vector<Value>> domains;
  for (const auto& [name, type] : l.vars)
    domains.push_back(enumerate_for_search(type, search_ctx));

  LawVerdict first_finding;
  bool found = false;
  long long cases = 0;
  std::vector<size_t> idx(l.vars.size(), 0);
  bool start = true;
  auto next = [&] {
    if (start) {
      start = false;
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
    ValueEnv env;
    for (size_t i = 0; i < l.vars.size(); ++i)
      env[l.vars[i].first] = domains[i][idx[i]];
    ++cases;
    DualResult r = dual_eval(*l.body, l.typed, env, scope, opt);
    if (r.cls == Classification::TrueP) continue;
    LawVerdict v;
    v.cases = cases;
    v.env = std::move(env);
    v.cls = r.cls;
    switch (r.cls) {
      case Classification::FalseP:
        v.kind = LawVerdict::Kind::Counterexample;
        break;
      case Classification::NotWellDefined:
        v.kind = LawVerdict::Kind::UndefinedAt;
        break;
      case Classification::BugBothTrueFalse:
        v.kind = LawVerdict::Kind::BugAt;
        break;
      default:
        v.kind = LawVerdict::Kind::TimeoutAt;
        break;
    }
    if (!found) {
      first_finding = v;
      found = true;
    }
    if (!all) return v;
    all->push_back(std::move(v));
  }
  if (found) return first_finding;
  LawVerdict ok;
  ok.cases = cases;
  return ok;
}

CorpusReport check_corpus(const std::vector<Law>& corpus, const Scope& scope,
                          const DualOptions& opt, int jobs) {
  CorpusReport rep;
  rep.laws.resize(corpus.size());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, std::max<size_t>(corpus.size(), 1));

  std::vector<CoverageMap> covs(jobs);
  auto worker = [&](int w) {
    for (size_t i = w; i < corpus.size(); i += (size_t)jobs) {
      DualOptions o = opt;
      if (opt.coverage) o.coverage = &covs[w];
      rep.laws[i] = {corpus[i].name, corpus[i].category,
                     check_law(corpus[i], scope, o)};
    }
  };
  if (jobs == 1) {
    DualOptions o = opt;
    for (size_t i = 0; i < corpus.size(); ++i)
      rep.laws[i] = {corpus[i].name, corpus[i].category,
                     check_law(corpus[i], scope, o)};
  } else {
    std::vector<std::thread> ts;
    for (int w = 0; w < jobs; ++w) ts.emplace_back(worker, w);
    for (auto& t : ts) t.join();
    if (opt.coverage)
      for (const auto& c : covs)
        for (const auto& [id, n] : c) (*opt.coverage)[id] += n;
  }
  for (const auto& lo : rep.laws) {
    ++rep.total;
    switch (lo.verdict.kind) {
      case LawVerdict::Kind::NoCounterexample: ++rep.passed; break;
      case LawVerdict::Kind::Counterexample: ++rep.counterexamples; break;
      case LawVerdict::Kind::UndefinedAt: ++rep.undefined; break;
      case LawVerdict::Kind::BugAt: ++rep.bugs; break;
      case LawVerdict::Kind::TimeoutAt: ++rep.timeouts; break;
    }
  }
  return rep;
}

std::string CorpusReport::to_text(const std::vector<Law>& corpus) const {
  std::string s;
  for (size_t i = 0; i < laws.size(); ++i) {
    s += laws[i].category + "/" + laws[i].name + ": " +
         describe(laws[i].verdict, corpus[i].vars) + "\n";
  }
  s += "total " + std::to_string(total) + ", passed " + std::to_string(passed) +
       ", counterexamples " + std::to_string(counterexamples) + ", undefined " +
       std::to_string(undefined) + ", bugs " + std::to_string(bugs) +
       ", timeouts " + std::to_string(timeouts) + "\n";
  return s;
}

std::string CorpusReport::to_json(const std::vector<Law>& corpus) const {
  nlohmann::json arr = nlohmann::json::array();
  for (size_t i = 0; i < laws.size(); ++i) {
    nlohmann::json j{{"name", laws[i].name},
                     {"category", laws[i].category},
                     {"verdict", to_string(laws[i].verdict.kind)},
                     {"cases", laws[i].verdict.cases}};
    if (!laws[i].verdict.ok()) {
      nlohmann::json env = nlohmann::json::object();
      for (const auto& [name, t] : corpus[i].vars)
        env[name] = to_string(laws[i].verdict.env.at(name));
      j["env"] = env;
    }
    arr.push_back(std::move(j));
  }
  nlohmann::json j{{"laws", arr},
                   {"total", total},
                   {"passed", passed},
                   {"counterexamples", counterexamples},
                   {"undefined", undefined},
                   {"bugs", bugs},
                   {"timeouts", timeouts}};
  return j.dump(2);
}

}  // namespace bcheck
