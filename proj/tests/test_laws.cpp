#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bcheck/laws.hpp"

using namespace bcheck;

namespace {

const Law& find_law(const std::vector<Law>& laws, const std::string& name) {
  for (const Law& l : laws)
    if (l.name == name) return l;
  REQUIRE(false);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("bundled corpus loads with all categories") {
  Scope s = Scope::defaults();
  auto laws = load_corpus(default_corpus_path(), s);
  CHECK(laws.size() >= 60);
  std::set<std::string> cats;
  for (const Law& l : laws) cats.insert(l.category);
  CHECK(cats.size() == law_categories().size());
}

TEST_CASE("corpus format errors") {
  Scope s = Scope::defaults();
  CHECK(load_corpus_text("", s).empty());
  CHECK(load_corpus_text("# only a comment\n", s).empty());
  CHECK_THROWS_AS(load_corpus_text("SECTION sets VARS SS:POW(ID)\n"
                                   "a == SS = SS\n"
                                   "a == SS <: SS\n",
                                   s),
                  DuplicateLaw);
  CHECK_THROWS_AS(load_corpus_text("x == 1 = 1\n", s), CorpusError);  // no SECTION
  CHECK_THROWS_AS(load_corpus_text("SECTION nonsense VARS SS:POW(ID)\n", s),
                  CorpusError);
  CHECK_THROWS_AS(load_corpus_text("SECTION sets VARS SS:POW(ID)\n"
                                   "bad == SS = \n",
                                   s),
                  CorpusError);
  CHECK_THROWS_AS(load_corpus_text("SECTION sets VARS SS:POW(ID)\n"
                                   "bad == SS = 1\n",
                                   s),
                  CorpusError);  // type error, reported with the law name
  CHECK_THROWS_AS(load_corpus_text("SECTION sets VARS SS:POW(Mystery)\n", s),
                  CorpusError);
}

TEST_CASE("POW1 law case count scales with the carrier") {
  Scope s = Scope::defaults();
  s.carriers["ID"] = 3;
  auto laws = load_corpus(default_corpus_path(), s);
  const Law& l = find_law(laws, "pow1_is_pow_minus_empty");
  LawVerdict v = check_law(l, s);
  CHECK(v.ok());
  CHECK(v.cases == 8);  // one variable SS over POW(ID), |ID| = 3
}

TEST_CASE("case counts equal the product of enumeration sizes") {
  Scope s = Scope::defaults();
  auto laws = load_corpus(default_corpus_path(), s);
  for (const Law& l : laws) {
    if (l.name != "compr_union" && l.name != "gen_union_def" &&
        l.name != "seq_rev_involution" && l.name != "range_member" &&
        l.name != "mul_distrib" && l.name != "apply_in_ran")
      continue;  // spot-check one law per flavor; the full corpus runs below
    long long product = 1;
    for (const auto& [name, t] : l.vars) product *= enumeration_size(t, s);
    LawVerdict v = check_law(l, s);
    CHECK(v.ok());
    CHECK(v.cases == product);
  }
}

TEST_CASE("deliberately false law: first counterexample in canonical order") {
  Scope s = Scope::defaults();
  auto laws = load_corpus_text(
      "SECTION sets VARS SS:POW(ID), TT:POW(ID)\n"
      "wrong == SS \\/ TT = SS /\\ TT\n",
      s);
  LawVerdict v = check_law(laws[0], s);
  REQUIRE(v.kind == LawVerdict::Kind::Counterexample);
  // last declared variable varies fastest: SS={},TT={} passes, then TT={ID1}
  CHECK(value_eq(v.env.at("SS"), Value::empty_set()));
  CHECK(value_eq(v.env.at("TT"), Value::set({s.elem_value("ID", 0)})));
  CHECK(v.cls == Classification::FalseP);
}

TEST_CASE("comprehension-union law: clean baseline, M5 counterexample") {
  Scope s = Scope::defaults();
  auto laws = load_corpus(default_corpus_path(), s);
  const Law& l = find_law(laws, "compr_union");
  CHECK(check_law(l, s).ok());

  DualOptions opt;
  opt.mutation = Mutation::M5;
  LawVerdict v = check_law(l, s, opt);
  REQUIRE(v.kind == LawVerdict::Kind::Counterexample);
  CHECK(value_eq(v.env.at("SS"), Value::set({s.elem_value("ID", 0)})));
  CHECK(value_eq(v.env.at("TT"), Value::empty_set()));
  // the counterexample re-classifies FalseP
  DualResult r = dual_eval(*l.body, l.typed, v.env, s, opt);
  CHECK(r.cls == Classification::FalseP);
}

TEST_CASE("all-findings mode collects more than the first") {
  Scope s = Scope::defaults();
  auto laws = load_corpus_text(
      "SECTION sets VARS SS:POW(ID)\n"
      "wrong == SS = {}\n",
      s);
  std::vector<LawVerdict> all;
  LawVerdict first = check_law(laws[0], s, {}, &all);
  CHECK(first.kind == LawVerdict::Kind::Counterexample);
  CHECK(all.size() == 3);  // every non-empty SS
}

TEST_CASE("full corpus: baseline clean, deterministic under parallelism") {
  Scope s = Scope::defaults();
  auto laws = load_corpus(default_corpus_path(), s);
  CoverageMap cov;
  DualOptions opt;
  opt.coverage = &cov;
  CorpusReport rep = check_corpus(laws, s, opt, 1);
  CHECK(rep.total == (long long)laws.size());
  CHECK(rep.clean());
  CHECK(rep.passed == rep.total);
  for (const auto& b : kernel_branches())
    if (b.internal) CHECK(cov.count(b.id) == 0);

  CorpusReport par = check_corpus(laws, s, {}, 4);
  REQUIRE(par.laws.size() == rep.laws.size());
  for (size_t i = 0; i < rep.laws.size(); ++i) {
    CHECK(par.laws[i].name == rep.laws[i].name);
    CHECK(par.laws[i].verdict.kind == rep.laws[i].verdict.kind);
    CHECK(par.laws[i].verdict.cases == rep.laws[i].verdict.cases);
  }
}

TEST_CASE("corpus under mutations") {
  Scope s = Scope::defaults();
  auto laws = load_corpus(default_corpus_path(), s);
  auto run = [&](Mutation m) {
    DualOptions opt;
    opt.mutation = m;
    return check_corpus(laws, s, opt, 4);
  };
  CorpusReport m1 = run(Mutation::M1);
  CHECK_FALSE(m1.clean());
  bool in_set_categories = false;
  for (const auto& lo : m1.laws)
    if (!lo.verdict.ok() &&
        (lo.category == "sets" || lo.category == "relations"))
      in_set_categories = true;
  CHECK(in_set_categories);

  CorpusReport m2 = run(Mutation::M2);
  CHECK_FALSE(m2.clean());
  CHECK_FALSE(find_law(laws, "mul_distrib").name.empty());
  for (const auto& lo : m2.laws)
    if (lo.name == "mul_distrib")
      CHECK(lo.verdict.kind == LawVerdict::Kind::Counterexample);

  CorpusReport m3 = run(Mutation::M3);
  CHECK_FALSE(m3.clean());

  // pruned search cannot find what it never visits
  CorpusReport m4 = run(Mutation::M4);
  CHECK(m4.clean());
}

TEST_CASE("report rendering") {
  Scope s = Scope::defaults();
  auto laws = load_corpus_text(
      "SECTION booleans VARS bb:BOOL\n"
      "fine == bb : BOOL\n"
      "wrong == bb = TRUE\n",
      s);
  CorpusReport rep = check_corpus(laws, s);
  std::string text = rep.to_text(laws);
  CHECK(text.find("booleans/fine: no_counterexample (2 cases)") !=
        std::string::npos);
  CHECK(text.find("booleans/wrong: counterexample bb=FALSE") !=
        std::string::npos);
  std::string json = rep.to_json(laws);
  CHECK(json.find("\"counterexamples\": 1") != std::string::npos);
  CHECK(json.find("\"verdict\": \"counterexample\"") != std::string::npos);
}
