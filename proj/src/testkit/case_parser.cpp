// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <sstream>

#include "testkit/case_model.hpp"

namespace itb::testkit {

std::string assert_kind_name(AssertKind k) {
    switch (k) {
    case AssertKind::TraceRequestField:
        return "TraceRequestField";
    case AssertKind::TraceResponseField:
        return "TraceResponseField";
    case AssertKind::OrderStatus:
        return "OrderStatus";
    case AssertKind::RtlogContains:
        return "RtlogContains";
    case AssertKind::InventoryEquals:
        return "InventoryEquals";
    case AssertKind::SessionError:
        return "SessionError";
    case AssertKind::NoEnvelope:
        return "NoEnvelope";
    }
    return "SessionError";
}

std::string assert_kind_tag(AssertKind k) {
    switch (k) {
    case AssertKind::TraceRequestField:
        return "trace_request";
    case AssertKind::TraceResponseField:
        return "trace_response";
    case AssertKind::OrderStatus:
        return "order_status";
    case AssertKind::RtlogContains:
        return "rtlog";
    case AssertKind::InventoryEquals:
        return "inventory";
    case AssertKind::SessionError:
        return "session";
    case AssertKind::NoEnvelope:
        return "no_envelope";
    }
    return "session";
}

AssertKind parse_assert_tag(const std::string& tag) {
    for (AssertKind k : {AssertKind::TraceRequestField, AssertKind::TraceResponseField,
                         AssertKind::OrderStatus, AssertKind::RtlogContains,
                         AssertKind::InventoryEquals, AssertKind::SessionError,
                         AssertKind::NoEnvelope}) {
        if (assert_kind_tag(k) == tag) {
            return k;
        }
    }
    throw Error(Status::Usage, "unknown check tag '" + tag + "'");
}

StepNo StepNo::parse(const std::string& s) {
    StepNo no;
    for (const auto& part : text::split(s, '.')) {
        if (part.empty() || !text::all_digits(part)) {
            throw Error(Status::Usage, "bad step number '" + s + "'");
        }
        no.parts.push_back(std::stoi(part));
    }
    if (no.parts.empty()) {
        throw Error(Status::Usage, "bad step number '" + s + "'");
    }
    return no;
}

std::string StepNo::to_string() const {
    std::ostringstream out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out << ".";
        }
        out << parts[i];
    }
    return out.str();
}

std::strong_ordering StepNo::operator<=>(const StepNo& other) const {
    size_t n = std::min(parts.size(), other.parts.size());
    for (size_t i = 0; i < n; ++i) {
        if (auto c = parts[i] <=> other.parts[i]; c != 0) {
            return c;
        }
    }
    return parts.size() <=> other.parts.size();
}

std::string severity_name(Severity s) {
    switch (s) {
    case Severity::S1:
        return "S1";
    case Severity::S2:
        return "S2";
    case Severity::S3:
        return "S3";
    case Severity::S4:
        return "S4";
    }
    return "S3";
}

std::string priority_name(Priority p) {
    switch (p) {
    case Priority::P1:
        return "P1";
    case Priority::P2:
        return "P2";
    case Priority::P3:
        return "P3";
    }
    return "P2";
}

Severity parse_severity(const std::string& s) {
    if (s == "S1") return Severity::S1;
    if (s == "S2") return Severity::S2;
    if (s == "S3") return Severity::S3;
    if (s == "S4") return Severity::S4;
    throw Error(Status::Usage, "bad severity '" + s + "' (want S1..S4)");
}

Priority parse_priority(const std::string& s) {
    if (s == "P1") return Priority::P1;
    if (s == "P2") return Priority::P2;
    if (s == "P3") return Priority::P3;
    throw Error(Status::Usage, "bad priority '" + s + "' (want P1..P3)");
}

std::string step_status_name(StepStatus s) {
    switch (s) {
    case StepStatus::Pass:
        return "Pass";
    case StepStatus::Fail:
        return "Fail";
    case StepStatus::Blocked:
        return "Blocked";
    case StepStatus::NotRun:
        return "NotRun";
    }
    return "NotRun";
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Pass:
        return "Pass";
    case Verdict::Fail:
        return "Fail";
    case Verdict::Blocked:
        return "Blocked";
    }
    return "Blocked";
}

namespace {

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& why) {
    std::ostringstream out;
    out << origin << ":" << line << ": " << why;
    throw Error(Status::Usage, out.str());
}

void parse_meta(const text::Section& section, const std::string& origin, TestCase& tc) {
    for (const auto& e : section.entries) {
        if (e.key == "id") {
            tc.id = e.value;
        } else if (e.key == "objective") {
            tc.objective = e.value;
        } else if (e.key == "severity") {
            try {
                tc.severity = parse_severity(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else if (e.key == "priority") {
            try {
                tc.priority = parse_priority(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else {
            fail_at(origin, e.line, "unknown meta key '" + e.key + "'");
        }
    }
    if (tc.id.empty()) {
        fail_at(origin, section.line, "meta is missing 'id'");
    }
    if (tc.objective.empty()) {
        fail_at(origin, section.line, "meta is missing 'objective'");
    }
}

TestStep parse_step(const text::Section& section, const std::string& origin,
                    const std::string& no_text) {
    TestStep step;
    step.line = section.line;
    try {
        step.no = StepNo::parse(no_text);
    } catch (const Error& e) {
        fail_at(origin, section.line, e.what());
    }
    for (const auto& e : section.entries) {
        if (e.key == "desc") {
            step.desc = e.value;
        } else if (e.key == "action") {
            step.action = e.value;
        } else if (e.key == "apps") {
            step.apps = e.value;
        } else if (e.key.rfind("expect.", 0) == 0) {
            Assertion a;
            try {
                a.kind = parse_assert_tag(e.key.substr(7));
                a.params = text::token_parse(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
            a.line = e.line;
            a.raw = e.value;
            step.asserts.push_back(std::move(a));
        } else {
            fail_at(origin, e.line, "unknown step key '" + e.key + "'");
        }
    }
    if (step.desc.empty()) {
        fail_at(origin, section.line, "step " + no_text + " is missing 'desc'");
    }
    bool has_action = !step.action.empty() && step.action != "none";
    if (!has_action && step.asserts.empty()) {
        fail_at(origin, section.line,
                "step " + no_text + " has neither an action nor checks");
    }
    return step;
}

}  // namespace

TestCase parse_case(const std::string& content, const std::string& origin) {
    TestCase tc;
    tc.origin = origin;
    auto sections = text::parse_sections(content, origin);
    bool saw_meta = false;
    for (const auto& section : sections) {
        if (section.name == "meta") {
            if (saw_meta) {
                fail_at(origin, section.line, "duplicate [meta] section");
            }
            saw_meta = true;
            parse_meta(section, origin, tc);
        } else if (section.name == "prereq") {
            for (const auto& e : section.entries) {
                tc.prereq.add_entry(e, origin);
            }
        } else if (section.name.rfind("step ", 0) == 0) {
            TestStep step = parse_step(section, origin, section.name.substr(5));
            if (!tc.steps.empty() && !(tc.steps.back().no < step.no)) {
                fail_at(origin, section.line,
                        "step " + step.no.to_string() + " does not follow " +
                            tc.steps.back().no.to_string());
            }
            tc.steps.push_back(std::move(step));
        } else {
            fail_at(origin, section.line, "unknown section [" + section.name + "]");
        }
    }
    if (!saw_meta) {
        fail_at(origin, 1, "case has no [meta] section");
    }
    if (tc.steps.empty()) {
        fail_at(origin, 1, "case has no steps");
    }
    return tc;
}

TestCase load_case(const std::string& path) {
    return parse_case(text::read_file(path), path);
}

}  // namespace itb::testkit
