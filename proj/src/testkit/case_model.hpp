// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "environment.hpp"
#include "util/text.hpp"

namespace itb::testkit {

// Boundary checks a step can declare. Each targets one observable edge of
// the pipeline rather than simulator internals, so a case keeps meaning
// the same thing if internals are rearranged.
enum class AssertKind {
    TraceRequestField,
    TraceResponseField,
    OrderStatus,
    RtlogContains,
    InventoryEquals,
    SessionError,
    NoEnvelope,
};

std::string assert_kind_name(AssertKind k);
// Case-file tag, e.g. "trace_request". Throws Error(Usage) on unknown tags.
AssertKind parse_assert_tag(const std::string& tag);
std::string assert_kind_tag(AssertKind k);

struct Assertion {
    AssertKind kind = AssertKind::SessionError;
    text::KvPairs params;
    int line = 0;
    std::string raw;
};

// Dotted step number: "5" or "5.1". Compares lexicographically by part.
struct StepNo {
    std::vector<int> parts;

    static StepNo parse(const std::string& s);  // throws Error(Usage)
    std::string to_string() const;

    std::strong_ordering operator<=>(const StepNo& other) const;
    bool operator==(const StepNo& other) const { return parts == other.parts; }
};

struct TestStep {
    StepNo no;
    std::string desc;
    std::string action;  // empty or "none" means checks only
    std::string apps;
    std::vector<Assertion> asserts;
    int line = 0;
};

enum class Severity { S1, S2, S3, S4 };
enum class Priority { P1, P2, P3 };

std::string severity_name(Severity s);
std::string priority_name(Priority p);
Severity parse_severity(const std::string& s);  // throws Error(Usage)
Priority parse_priority(const std::string& s);  // throws Error(Usage)

struct TestCase {
    std::string id;
    std::string objective;
    Severity severity = Severity::S3;
    Priority priority = Priority::P2;
    ScenarioOverrides prereq;
    std::vector<TestStep> steps;
    std::string origin;  // file path or label, for diagnostics
};

TestCase parse_case(const std::string& content, const std::string& origin);
TestCase load_case(const std::string& path);

enum class StepStatus { Pass, Fail, Blocked, NotRun };
enum class Verdict { Pass, Fail, Blocked };

std::string step_status_name(StepStatus s);
std::string verdict_name(Verdict v);

struct AssertionResult {
    Assertion assertion;
    bool pass = false;
    std::string expected;
    std::string observed;
};

struct StepResult {
    StepNo no;
    std::string desc;
    std::string apps;
    StepStatus status = StepStatus::NotRun;
    std::string action_note;  // outcome text or blocking error
    std::vector<AssertionResult> checks;
};

struct CaseResult {
    std::string case_id;
    Verdict verdict = Verdict::Pass;
    std::string blocked_reason;
    std::vector<StepResult> steps;
    std::string trace_export;
    std::int64_t elapsed_ms = 0;  // never rendered; reports stay byte-stable
};

}  // namespace itb::testkit
