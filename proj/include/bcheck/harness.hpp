#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcheck/eval.hpp"
#include "bcheck/laws.hpp"

namespace bcheck {

// ---------------------------------------------------------------------------
// Seeded unit-test generation: one known kernel fact expands into a
// deterministic family of equivalent checks (representation variants,
// commutativity, solve-direction).
// ---------------------------------------------------------------------------

struct SeedFact {
  std::string op;           // registered operator id, e.g. "union"
  std::vector<Value> args;  // argument values
  Value expected;           // kernel result on the unmutated build
};

struct UnsupportedOperator : std::runtime_error {
  explicit UnsupportedOperator(const std::string& op)
      : std::runtime_error("no test generator for operator '" + op + "'") {}
};

struct GenTest {
  std::string name;
  std::string pred;  // source text, expected to classify TrueP
  bool is_solve = false;
  // solve direction: pred has one free variable that must take expected_value
  std::string var;
  BType var_type;
  Value expected_value;
};

std::vector<GenTest> gen_unit_tests(const SeedFact& seed, const Scope& scope);
const std::vector<SeedFact>& builtin_seeds();
// "op(arg,...)=result" with closed expression arguments.
SeedFact parse_seed(const std::string& text, const Scope& scope);

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::string suite;
  long long passed = 0;
  long long failed = 0;
  std::vector<std::string> failures;  // first few, with detail

  bool ok() const { return failed == 0; }
};

const std::vector<std::string>& suite_names();  // unit generated laws
                                                // roundtrip crosscheck machines
SuiteResult run_suite(const std::string& suite, Mutation m, const Scope& scope,
                      CoverageMap* coverage = nullptr, int jobs = 1);

std::string default_machines_dir();

// Random predicate ASTs for round-trip fuzzing; deterministic in the seed.
Ast random_pred(std::mt19937& rng, int max_depth);

// ---------------------------------------------------------------------------
// Mutation matrix
// ---------------------------------------------------------------------------

struct UndetectedMutation : std::runtime_error {
  explicit UndetectedMutation(Mutation m)
      : std::runtime_error("mutation " + to_string(m) +
                           " passes every suite") {}
};

struct MutationMatrix {
  std::vector<std::string> suites;  // columns
  std::vector<std::pair<Mutation, std::vector<bool>>> rows;  // pass flags

  bool passed(Mutation m, const std::string& suite) const;
  std::string to_text() const;
  std::string to_json() const;
};

// Runs every mutation against the unit, generated and laws suites; throws
// UndetectedMutation if some mutation passes all of them.
MutationMatrix mutation_matrix(const Scope& scope);

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

struct BranchCoverage {
  std::string id;
  std::string group;
  long long hits = 0;
  bool internal = false;
};

struct CoverageReport {
  std::vector<BranchCoverage> branches;  // registry order
  int covered = 0;
  int total = 0;  // internal branches excluded
  long long internal_hits = 0;

  double percent() const { return total ? 100.0 * covered / total : 0.0; }
  std::string to_text() const;
  std::string to_json() const;
  std::string to_html() const;
};

CoverageReport coverage_from(const CoverageMap& cov);
// Runs the named suites unmutated with shared instrumentation.
CoverageReport coverage_report(const std::vector<std::string>& suites,
                               const Scope& scope);

}  // namespace bcheck
