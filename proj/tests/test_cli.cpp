#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "bcheck/laws.hpp"

using namespace bcheck;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(BCHECK_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Run r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string machine(const std::string& name) {
  return std::string(BCHECK_DATA_DIR) + "/machines/" + name;
}

}  // namespace

TEST_CASE("eval: solver binding for an undefined conjunction") {
  Run r = run("eval \"x = 2/y & y = x-x\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("== unknown") != std::string::npos);
  CHECK(r.out.find("y=0") != std::string::npos);
}

TEST_CASE("eval: closed predicates classify directly") {
  CHECK(run("eval \"1 + 1 = 2\"").out.find("== true") != std::string::npos);
  CHECK(run("eval \"1 = 2\"").out.find("== false") != std::string::npos);
  CHECK(run("eval \"1/0 = 1\"").out.find("== unknown") != std::string::npos);
}

TEST_CASE("check-machine: mutated and clean verdicts with exit codes") {
  Run clean = run("check-machine " + machine("doubleeval.mch"));
  CHECK(clean.code == 0);
  CHECK(clean.out.find("== true") != std::string::npos);
  CHECK(clean.out.find("both_true_false") == std::string::npos);

  Run m5 = run("check-machine " + machine("doubleeval.mch") + " --mutation M5");
  CHECK(m5.code == 1);
  CHECK(m5.out.find("iv /: {bb}\n== both_true_false") != std::string::npos);
  CHECK(m5.out.find("iv : {aa}\n== unknown") != std::string::npos);
}

TEST_CASE("check-laws: bundled corpus is clean, JSON carries the same counts") {
  Run text = run("check-laws --jobs 4");
  CHECK(text.code == 0);
  CHECK(text.out.find("counterexamples 0") != std::string::npos);
  Run json = run("check-laws --jobs 4 --json");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"counterexamples\": 0") != std::string::npos);
  CHECK(json.out.find("\"bugs\": 0") != std::string::npos);

  Run m1 = run("check-laws --jobs 4 --mutation M1");
  CHECK(m1.code == 1);
  CHECK(m1.out.find("counterexample") != std::string::npos);
}

TEST_CASE("solve prints assignments") {
  Run r = run("solve \"x * x = 4\" \"x:INTEGER\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("x=2") != std::string::npos);
  CHECK(r.out.find("x=-2") != std::string::npos);
  CHECK(r.out.find("2 solutions") != std::string::npos);
}

TEST_CASE("scope flags change the enumeration") {
  CHECK(run("eval \"card(ID) = 3\" --scope ID=3").out.find("== true") !=
        std::string::npos);
  Run r = run("solve \"x > 3\" \"x:INTEGER\" --int 0:5");
  CHECK(r.out.find("2 solutions") != std::string::npos);
  CHECK(r.out.find("6 cases") != std::string::npos);
}

TEST_CASE("roundtrip and typecheck over the bundled data") {
  Run rt = run("roundtrip " + std::string(BCHECK_DATA_DIR));
  CHECK(rt.code == 0);
  CHECK(rt.out.find(" 0 failed") != std::string::npos);
  Run tc = run("typecheck \"SS \\/ {xx}\" \"SS:POW(INT),xx:INT\"");
  CHECK(tc.code == 0);
  Run bad = run("typecheck \"1 + {}\"");
  CHECK(bad.code == 1);
}

TEST_CASE("gen-tests and mutate") {
  Run gen = run("gen-tests \"union({1},{2})={1,2}\"");
  CHECK(gen.code == 0);
  CHECK(gen.out.find("36 tests, 0 failed") != std::string::npos);
  Run mut = run("mutate unit --mutation M2");
  CHECK(mut.code == 1);
  Run ok = run("mutate unit");
  CHECK(ok.code == 0);
}

TEST_CASE("usage and IO errors exit 2") {
  CHECK(run("").code == 2);
  CHECK(run("--bogus-flag eval \"1=1\"").code == 2);
  CHECK(run("check-machine /nonexistent.mch").code == 2);
  CHECK(run("eval \"1=1\" --mutation M9").code == 2);
  CHECK(run("parse \"x :\"").code == 1);  // malformed input is a finding
}
