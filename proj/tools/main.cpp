// bcheck: command-line front end for the evaluator, law checker and harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcheck/harness.hpp"
#include "bcheck/parser.hpp"
#include "bcheck/printer.hpp"

namespace fs = std::filesystem;
using namespace bcheck;

namespace {

struct Config {
  Scope scope = Scope::defaults();
  bool json = false;
  int jobs = 1;
  Mutation mutation = Mutation::None;
  std::string out;
  std::string external_typecheck;
};

Mutation parse_mutation(const std::string& id) {
  if (id.empty() || id == "none") return Mutation::None;
  for (Mutation m : all_mutations())
    if (to_string(m) == id) return m;
  throw CLI::ValidationError("--mutation", "unknown mutation id '" + id + "'");
}

void apply_scope_flags(Config& cfg, const std::vector<std::string>& carriers,
                       const std::string& ints, long long fuel,
                       long long max_card) {
  for (const std::string& s : carriers) {
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--scope", "expected CARRIER=N, got " + s);
    cfg.scope.carriers[s.substr(0, eq)] = std::stoi(s.substr(eq + 1));
  }
  if (!ints.empty()) {
    long long lo, hi;
    if (std::sscanf(ints.c_str(), "%lld:%lld", &lo, &hi) != 2 || lo > hi)
      throw CLI::ValidationError("--int", "expected LO:HI, got " + ints);
    cfg.scope.int_lo = lo;
    cfg.scope.int_hi = hi;
  }
  if (fuel > 0) cfg.scope.fuel = fuel;
  if (max_card > 0) cfg.scope.max_set_card = (int)max_card;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_machine_input(const std::string& arg) {
  return fs::exists(arg) && fs::path(arg).extension() == ".mch";
}

std::string env_line(const ValueEnv& env) {
  std::string s;
  for (const auto& [k, v] : env) {
    if (!s.empty()) s += ", ";
    s += k + "=" + to_string(v);
  }
  return s;
}

nlohmann::json env_json(const ValueEnv& env) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : env) j[k] = to_string(v);
  return j;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.  Return value is the process exit status: 0 clean,
// 1 findings.  Usage and I/O problems escape as exceptions and become 2.
// ---------------------------------------------------------------------------

int do_parse(const Config& cfg, const std::string& input, bool print) {
  std::string divergence;
  std::string printed;
  try {
    if (is_machine_input(input))
      printed = pretty_print(parse_machine(slurp(input)));
    else
      printed = pretty_print(parse_pred(input));
  } catch (const ParseError& e) {
    divergence = e.what();
  }
  bool ok = divergence.empty();
  if (cfg.json)
    std::cout << nlohmann::json{{"ok", ok},
                                {"error", divergence},
                                {"printed", print ? printed : ""}}
                     .dump(2)
              << "\n";
  else if (!ok)
    std::cout << divergence << "\n";
  else {
    std::cout << (print ? printed : "ok");
    if (printed.empty() || printed.back() != '\n') std::cout << "\n";
  }
  return ok ? 0 : 1;
}

int do_typecheck(const Config& cfg, const std::string& input,
                 const std::string& vars) {
  CrossReport rep;
  if (is_machine_input(input)) {
    rep = crosscheck_machine(slurp(input), cfg.scope);
  } else {
    TypeEnv env;
    for (const auto& [name, t] : parse_typed_vars(vars, cfg.scope))
      env[name] = t;
    rep = crosscheck_typing(input, env, cfg.scope);
  }
  bool ok = rep.status == CrossReport::Status::Pass;
  if (ok && !cfg.external_typecheck.empty()) {
    FILE* pipe = popen(cfg.external_typecheck.c_str(), "w");
    if (!pipe)
      throw std::runtime_error("cannot run '" + cfg.external_typecheck + "'");
    fwrite(rep.typed_text.data(), 1, rep.typed_text.size(), pipe);
    if (pclose(pipe) != 0) {
      ok = false;
      rep.stage = "external";
      rep.detail = "external type checker rejected the typed print";
    }
  }
  if (cfg.json)
    std::cout << nlohmann::json{{"ok", ok},
                                {"stage", rep.stage},
                                {"detail", rep.detail},
                                {"typed", rep.typed_text}}
                     .dump(2)
              << "\n";
  else if (ok)
    std::cout << rep.typed_text << "\n";
  else
    std::cout << "cross-check failed at " << rep.stage << ": " << rep.detail
              << "\n";
  return ok ? 0 : 1;
}

int do_eval(const Config& cfg, const std::string& pred,
            const std::string& vars) {
  DualOptions opt;
  opt.mutation = cfg.mutation;
  Ast p = parse_pred(pred);
  TypedVars tv;
  TypedAst t;
  if (!vars.empty()) {
    tv = parse_typed_vars(vars, cfg.scope);
    TypeEnv env;
    for (const auto& [name, ty] : tv) env[name] = ty;
    t = infer(p, env, cfg.scope);
  } else {
    t = infer(p, {}, cfg.scope, true);  // free identifiers become solver vars
    for (const auto& [name, ty] : t.free_types) tv.emplace_back(name, ty);
  }

  Classification cls;
  ValueEnv binding;
  if (tv.empty()) {
    cls = dual_eval(p, t, {}, cfg.scope, opt).cls;
  } else {
    SolveResult r = solve(p, t, tv, cfg.scope, opt);
    if (r.bug) {
      cls = Classification::BugBothTrueFalse;
    } else if (!r.solutions.empty()) {
      binding = r.solutions.front();
      cls = Classification::TrueP;
    } else if (!r.undefined.empty()) {
      binding = r.undefined.front();
      cls = Classification::NotWellDefined;
    } else if (r.timeout) {
      cls = Classification::Unknown;
    } else {
      cls = Classification::FalseP;  // no assignment satisfies it
    }
  }
  if (cfg.json)
    std::cout << nlohmann::json{{"pred", pred},
                                {"classification", to_string(cls)},
                                {"verdict", verdict_string(cls)},
                                {"binding", env_json(binding)}}
                     .dump(2)
              << "\n";
  else {
    std::cout << pred << "\n== " << verdict_string(cls) << " ("
              << to_string(cls) << ")";
    if (!binding.empty()) std::cout << " at " << env_line(binding);
    std::cout << "\n";
  }
  return cls == Classification::BugBothTrueFalse ? 1 : 0;
}

int do_solve(const Config& cfg, const std::string& pred,
             const std::string& vars) {
  DualOptions opt;
  opt.mutation = cfg.mutation;
  TypedVars tv = parse_typed_vars(vars, cfg.scope);
  TypeEnv env;
  for (const auto& [name, ty] : tv) env[name] = ty;
  Ast p = parse_pred(pred);
  TypedAst t = infer(p, env, cfg.scope);
  SolveResult r = solve(p, t, tv, cfg.scope, opt);
  if (cfg.json) {
    nlohmann::json sols = nlohmann::json::array();
    for (const ValueEnv& e : r.solutions) sols.push_back(env_json(e));
    nlohmann::json undef = nlohmann::json::array();
    for (const ValueEnv& e : r.undefined) undef.push_back(env_json(e));
    std::cout << nlohmann::json{{"solutions", sols},
                                {"undefined", undef},
                                {"bug", r.bug},
                                {"timeout", r.timeout},
                                {"cases", r.cases}}
                     .dump(2)
              << "\n";
  } else {
    for (const ValueEnv& e : r.solutions) std::cout << env_line(e) << "\n";
    std::cout << r.solutions.size() << " solutions, " << r.undefined.size()
              << " undefined, " << r.cases << " cases";
    if (r.bug) std::cout << ", BUG detected";
    if (r.timeout) std::cout << ", timeouts";
    std::cout << "\n";
  }
  return r.bug ? 1 : 0;
}

int do_check_machine(const Config& cfg, const std::string& file) {
  DualOptions opt;
  opt.mutation = cfg.mutation;
  Machine m = parse_machine(slurp(file));
  MachineReport rep = check_machine(m, cfg.scope, opt);
  std::cout << (cfg.json ? rep.to_json() : rep.to_text());
  return (!rep.unsat && rep.all_true()) ? 0 : 1;
}

int do_check_laws(const Config& cfg, const std::string& corpus_path) {
  DualOptions opt;
  opt.mutation = cfg.mutation;
  auto corpus = load_corpus(
      corpus_path.empty() ? default_corpus_path() : corpus_path, cfg.scope);
  CorpusReport rep = check_corpus(corpus, cfg.scope, opt, cfg.jobs);
  std::cout << (cfg.json ? rep.to_json(corpus) : rep.to_text(corpus));
  return rep.clean() ? 0 : 1;
}

int do_roundtrip(const Config& cfg, const std::string& arg) {
  long long checked = 0, failed = 0;
  std::vector<std::string> failures;
  auto note = [&](bool pass, const std::string& what,
                  const std::string& why) {
    ++checked;
    if (pass) return;
    ++failed;
    if (failures.size() < 10) failures.push_back(what + ": " + why);
  };
  auto one_file = [&](const fs::path& p) {
    if (p.extension() == ".mch") {
      RoundtripReport r = roundtrip_check_machine(slurp(p.string()));
      note(r.pass, p.filename().string(), r.divergence);
    } else if (p.extension() == ".bcorpus") {
      for (const Law& l : load_corpus(p.string(), cfg.scope)) {
        RoundtripReport r = roundtrip_check(l.text);
        note(r.pass, l.name, r.divergence);
      }
    }
  };
  if (fs::is_directory(arg)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(arg))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) one_file(p);
  } else if (fs::exists(arg)) {
    one_file(arg);
  } else {
    RoundtripReport r = roundtrip_check(arg);
    note(r.pass, "input", r.divergence);
  }
  if (cfg.json)
    std::cout << nlohmann::json{{"checked", checked},
                                {"failed", failed},
                                {"failures", failures}}
                     .dump(2)
              << "\n";
  else {
    for (const std::string& f : failures) std::cout << f << "\n";
    std::cout << checked << " checked, " << failed << " failed\n";
  }
  return failed == 0 ? 0 : 1;
}

int do_gen_tests(const Config& cfg, const std::string& seed_text) {
  DualOptions opt;
  opt.mutation = cfg.mutation;
  SeedFact seed = parse_seed(seed_text, cfg.scope);
  auto tests = gen_unit_tests(seed, cfg.scope);
  long long failed = 0;
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream listing;
  for (const GenTest& t : tests) {
    bool pass = false;
    Ast p = parse_pred(t.pred);
    if (t.is_solve) {
      TypedAst ty = infer(p, {{t.var, t.var_type}}, cfg.scope);
      SolveResult r = solve(p, ty, {{t.var, t.var_type}}, cfg.scope, opt);
      for (const ValueEnv& e : r.solutions)
        if (value_eq(e.at(t.var), t.expected_value)) pass = true;
    } else {
      TypedAst ty = infer(p, {}, cfg.scope);
      pass = dual_eval(p, ty, {}, cfg.scope, opt).cls ==
             Classification::TrueP;
    }
    if (!pass) ++failed;
    listing << (pass ? "pass" : "FAIL") << "  " << t.name << "  " << t.pred
            << "\n";
    arr.push_back({{"name", t.name},
                   {"pred", t.pred},
                   {"solve", t.is_solve},
                   {"pass", pass}});
  }
  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out);
    std::ofstream f(fs::path(cfg.out) / (seed.op + "_tests.txt"));
    for (const GenTest& t : tests) f << t.pred << "\n";
  }
  if (cfg.json)
    std::cout << nlohmann::json{{"tests", arr}, {"failed", failed}}.dump(2)
              << "\n";
  else
    std::cout << listing.str() << tests.size() << " tests, " << failed
              << " failed\n";
  return failed == 0 ? 0 : 1;
}

int do_mutate(const Config& cfg, const std::string& suite) {
  SuiteResult r = run_suite(suite, cfg.mutation, cfg.scope, nullptr, cfg.jobs);
  if (cfg.json)
    std::cout << nlohmann::json{{"suite", r.suite},
                                {"mutation", to_string(cfg.mutation)},
                                {"passed", r.passed},
                                {"failed", r.failed},
                                {"failures", r.failures}}
                     .dump(2)
              << "\n";
  else {
    for (const std::string& f : r.failures) std::cout << f << "\n";
    std::cout << r.suite << " under " << to_string(cfg.mutation) << ": "
              << r.passed << " passed, " << r.failed << " failed\n";
  }
  return r.ok() ? 0 : 1;
}

int do_matrix(const Config& cfg) {
  try {
    MutationMatrix mm = mutation_matrix(cfg.scope);
    std::cout << (cfg.json ? mm.to_json() + "\n" : mm.to_text());
    return 0;
  } catch (const UndetectedMutation& e) {
    std::cout << e.what() << "\n";
    return 1;
  }
}

int do_coverage(const Config& cfg) {
  CoverageReport rep =
      coverage_report({"unit", "generated", "laws"}, cfg.scope);
  std::cout << (cfg.json ? rep.to_json() + "\n" : rep.to_text());
  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out);
    std::ofstream(fs::path(cfg.out) / "coverage.html") << rep.to_html();
    std::ofstream(fs::path(cfg.out) / "coverage.json") << rep.to_json();
  }
  return (rep.percent() >= 90.0 && rep.internal_hits == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bcheck: finite-scope checker for B-style set-theory formulas"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  Config cfg;
  std::vector<std::string> scope_flags;
  std::string int_range, mutation_id;
  long long fuel = 0, max_card = 0;
  app.add_option("--scope", scope_flags, "carrier size override, CARRIER=N");
  app.add_option("--int", int_range, "integer interval, LO:HI");
  app.add_option("--fuel", fuel, "evaluation fuel budget");
  app.add_option("--max-card", max_card, "maximum enumerated set cardinality");
  app.add_flag("--json", cfg.json, "JSON output");
  app.add_option("--jobs", cfg.jobs, "worker threads for check-laws");
  app.add_option("--mutation", mutation_id, "inject mutation M1..M5");
  app.add_option("--out", cfg.out, "output directory for reports");
  app.add_option("--external-typecheck", cfg.external_typecheck,
                 "external command fed the typed print on stdin");

  std::string input, vars, corpus_path, suite;
  bool had_corpus = false;

  auto* c_parse = app.add_subcommand("parse", "parse a predicate or machine");
  c_parse->add_option("input", input, "predicate text or .mch file")
      ->required();
  auto* c_pp = app.add_subcommand("pp", "parse and pretty-print");
  c_pp->add_option("input", input, "predicate text or .mch file")->required();
  auto* c_tc = app.add_subcommand("typecheck",
                                  "infer types and run the typed cross-check");
  c_tc->add_option("input", input, "predicate text or .mch file")->required();
  c_tc->add_option("vars", vars, "free variables, name:typeset,...");
  auto* c_eval = app.add_subcommand("eval", "classify a predicate");
  c_eval->add_option("pred", input, "predicate text")->required();
  c_eval->add_option("vars", vars, "solver variables, name:typeset,...");
  auto* c_solve = app.add_subcommand("solve", "enumerate solutions");
  c_solve->add_option("pred", input, "predicate text")->required();
  c_solve->add_option("vars", vars, "variables, name:typeset,...")->required();
  auto* c_mach = app.add_subcommand("check-machine",
                                    "solve PROPERTIES, check ASSERTIONS");
  c_mach->add_option("file", input, "machine file")->required();
  auto* c_laws = app.add_subcommand("check-laws", "check a law corpus");
  c_laws->add_option("corpus", corpus_path, "corpus file (default: bundled)");
  auto* c_rt = app.add_subcommand("roundtrip", "print/parse round-trip check");
  c_rt->add_option("input", input, "predicate text, file, or directory")
      ->required();
  auto* c_gen = app.add_subcommand("gen-tests",
                                   "expand a seed fact into unit tests");
  c_gen->add_option("seed", input, "seed, e.g. \"union({1},{2})={1,2}\"")
      ->required();
  auto* c_mut = app.add_subcommand("mutate", "run one suite under a mutation");
  c_mut->add_option("suite", suite, "unit|generated|laws|roundtrip|"
                                    "crosscheck|machines")
      ->required();
  auto* c_matrix = app.add_subcommand("matrix", "mutation detection matrix");
  auto* c_cov = app.add_subcommand("coverage", "kernel branch coverage");
  (void)had_corpus;
  // global flags may appear after the subcommand
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
    apply_scope_flags(cfg, scope_flags, int_range, fuel, max_card);
    cfg.mutation = parse_mutation(mutation_id);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_parse->parsed()) return do_parse(cfg, input, false);
    if (c_pp->parsed()) return do_parse(cfg, input, true);
    if (c_tc->parsed()) return do_typecheck(cfg, input, vars);
    if (c_eval->parsed()) return do_eval(cfg, input, vars);
    if (c_solve->parsed()) return do_solve(cfg, input, vars);
    if (c_mach->parsed()) return do_check_machine(cfg, input);
    if (c_laws->parsed()) return do_check_laws(cfg, corpus_path);
    if (c_rt->parsed()) return do_roundtrip(cfg, input);
    if (c_gen->parsed()) return do_gen_tests(cfg, input);
    if (c_mut->parsed()) return do_mutate(cfg, suite);
    if (c_matrix->parsed()) return do_matrix(cfg);
    if (c_cov->parsed()) return do_coverage(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
