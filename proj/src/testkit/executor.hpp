// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

#include "environment.hpp"
#include "testkit/case_model.hpp"

namespace itb::testkit {

// Builds the resolved configuration for a case: defaults, then the case
// prereq, then each extra layer in order (lowest precedence first).
ScenarioConfig resolve_config(const TestCase& tc,
                              const std::vector<ScenarioOverrides>& layers);

// Runs a case in a fresh environment. Never throws for in-case trouble:
// an environment that cannot come up or an action that fails in an
// undeclared way yields a Blocked verdict; failed checks yield Fail.
CaseResult run_case(const TestCase& tc, const std::vector<ScenarioOverrides>& layers);

struct SmokeResult {
    bool pass = false;
    std::string failed_boundary;  // first edge that broke, empty when pass
    std::string detail;
};

// End-to-end build check: one clean order driven availability, payment,
// placement, screening batch, audit. Seeds its own item and card; fails
// with the first boundary that misbehaved.
SmokeResult run_smoke(Environment& env);
SmokeResult run_smoke(const ScenarioConfig& config);

std::string render_text(const CaseResult& result);
// JSON lines: one "case" line, one line per step, one "verdict" line.
std::string render_structured(const CaseResult& result);

}  // namespace itb::testkit
