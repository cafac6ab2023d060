#pragma once

#include <string>

#include "change_model.hpp"
#include "mutator.hpp"
#include "program.hpp"
#include "test_config.hpp"

namespace chtest {

struct EvaluateOptions {
  ResolutionMode modeA{Mode::Static, false};
  ResolutionMode modeB{Mode::Polymorphic, false};
  TestConfig tests;
  RunOptions run;
};

struct EvaluateResult {
  ComparisonReport report;
  CoverageStats fullCoverage;
  int testMethods = 0;
  int testClasses = 0;
  int mutants = 0;

  // Deterministic human-readable summary.
  std::string summaryText() const;
};

// Full pipeline over one snapshot: distill under both modes (relinking
// when B is A's flipped resolution), select a reduced suite per mutated
// class under each, generate mutants over non-test classes, build the
// kill matrix, compare. Throws Error(BaselineFailure) when the full suite
// does not pass unmutated.
EvaluateResult evaluateSnapshot(const Program &p,
                                const EvaluateOptions &opts = {});

} // namespace chtest
