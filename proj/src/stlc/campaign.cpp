// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "stlc/campaign.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "util/text.hpp"

namespace itb::stlc {

using nlohmann::ordered_json;

std::string req_source_name(ReqSource s) {
    switch (s) {
    case ReqSource::MRD:
        return "MRD";
    case ReqSource::BRD:
        return "BRD";
    case ReqSource::FRD:
        return "FRD";
    case ReqSource::DESIGN:
        return "DESIGN";
    }
    return "FRD";
}

ReqSource parse_req_source(const std::string& s) {
    if (s == "MRD") return ReqSource::MRD;
    if (s == "BRD") return ReqSource::BRD;
    if (s == "FRD") return ReqSource::FRD;
    if (s == "DESIGN") return ReqSource::DESIGN;
    throw Error(Status::Usage, "bad requirement source '" + s + "'");
}

std::string cycle_state_name(CycleState s) {
    switch (s) {
    case CycleState::Planned:
        return "Planned";
    case CycleState::Open:
        return "Open";
    case CycleState::Closed:
        return "Closed";
    }
    return "Planned";
}

CycleState parse_cycle_state(const std::string& s) {
    if (s == "Planned") return CycleState::Planned;
    if (s == "Open") return CycleState::Open;
    if (s == "Closed") return CycleState::Closed;
    throw Error(Status::Usage, "bad cycle state '" + s + "'");
}

std::string defect_state_name(DefectState s) {
    switch (s) {
    case DefectState::New:
        return "New";
    case DefectState::Assigned:
        return "Assigned";
    case DefectState::Open:
        return "Open";
    case DefectState::Fixed:
        return "Fixed";
    case DefectState::Retest:
        return "Retest";
    case DefectState::Closed:
        return "Closed";
    case DefectState::Reopened:
        return "Reopened";
    case DefectState::Rejected:
        return "Rejected";
    case DefectState::Deferred:
        return "Deferred";
    }
    return "New";
}

DefectState parse_defect_state(const std::string& s) {
    for (DefectState st :
         {DefectState::New, DefectState::Assigned, DefectState::Open, DefectState::Fixed,
          DefectState::Retest, DefectState::Closed, DefectState::Reopened,
          DefectState::Rejected, DefectState::Deferred}) {
        if (defect_state_name(st) == s) {
            return st;
        }
    }
    throw Error(Status::Usage, "bad defect state '" + s + "'");
}

LifecycleGraph LifecycleGraph::defaults() {
    LifecycleGraph g;
    g.edges = {
        {DefectState::New, DefectState::Assigned, "lead"},
        {DefectState::New, DefectState::Rejected, "lead"},
        {DefectState::New, DefectState::Deferred, "lead"},
        {DefectState::Assigned, DefectState::Open, "developer"},
        {DefectState::Open, DefectState::Fixed, "developer"},
        {DefectState::Fixed, DefectState::Retest, "tester"},
        {DefectState::Retest, DefectState::Closed, "tester"},
        {DefectState::Retest, DefectState::Reopened, "tester"},
        {DefectState::Reopened, DefectState::Assigned, "lead"},
    };
    return g;
}

bool LifecycleGraph::edge_exists(DefectState from, DefectState to) const {
    for (const auto& e : edges) {
        if (e.from == from && e.to == to) {
            return true;
        }
    }
    return false;
}

bool LifecycleGraph::allowed(DefectState from, DefectState to,
                             const std::string& role) const {
    for (const auto& e : edges) {
        if (e.from == from && e.to == to && e.role == role) {
            return true;
        }
    }
    return false;
}

// ---- traceability -----------------------------------------------------------

namespace {

std::vector<std::string> sorted_unique(std::set<std::string> s) {
    return {s.begin(), s.end()};
}

bool id_known(const Campaign& c, const std::string& id) {
    for (const auto& r : c.requirements) {
        if (r.id == id) return true;
    }
    for (const auto& ch : c.chains) {
        if (ch.req == id || ch.scenario == id || ch.condition == id || ch.case_id == id) {
            return true;
        }
    }
    return false;
}

bool chain_mentions(const RtmChain& ch, const std::string& id) {
    return ch.req == id || ch.scenario == id || ch.condition == id || ch.case_id == id;
}

std::string format_rate(double rate) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << rate;
    return out.str();
}

}  // namespace

std::vector<std::string> rtm_forward(const Campaign& campaign, const std::string& id) {
    if (!id_known(campaign, id)) {
        throw Error(Status::Absent, "id '" + id + "' is not in the traceability matrix");
    }
    std::set<std::string> cases;
    for (const auto& ch : campaign.chains) {
        if (chain_mentions(ch, id)) {
            cases.insert(ch.case_id);
        }
    }
    return sorted_unique(std::move(cases));
}

std::vector<std::string> rtm_back(const Campaign& campaign, const std::string& id) {
    if (!id_known(campaign, id)) {
        throw Error(Status::Absent, "id '" + id + "' is not in the traceability matrix");
    }
    std::set<std::string> reqs;
    for (const auto& ch : campaign.chains) {
        if (chain_mentions(ch, id)) {
            reqs.insert(ch.req);
        }
    }
    return sorted_unique(std::move(reqs));
}

Coverage rtm_coverage(const Campaign& campaign) {
    Coverage cov;
    int64_t in_scope = 0;
    for (const auto& r : campaign.requirements) {
        if (!r.in_scope) {
            cov.out_scope.push_back(r.id);
            continue;
        }
        ++in_scope;
        bool linked = false;
        for (const auto& ch : campaign.chains) {
            if (ch.req == r.id) {
                linked = true;
                break;
            }
        }
        (linked ? cov.covered : cov.uncovered).push_back(r.id);
    }
    cov.rate = in_scope == 0
                   ? 1.0
                   : static_cast<double>(cov.covered.size()) / static_cast<double>(in_scope);
    return cov;
}

// ---- cycles -----------------------------------------------------------------

namespace {

Cycle* find_cycle(Campaign& campaign, int no) {
    for (auto& c : campaign.cycles) {
        if (c.no == no) {
            return &c;
        }
    }
    return nullptr;
}

}  // namespace

OpenResult cycle_open(Campaign& campaign, std::optional<int> cycle_no) {
    Cycle* cycle = nullptr;
    if (cycle_no) {
        cycle = find_cycle(campaign, *cycle_no);
        if (!cycle) {
            throw Error(Status::Absent, "no cycle " + std::to_string(*cycle_no));
        }
    } else {
        for (auto& c : campaign.cycles) {
            if (c.state == CycleState::Planned) {
                cycle = &c;
                break;
            }
        }
        if (!cycle) {
            throw Error(Status::Absent, "no planned cycle to open");
        }
    }
    if (cycle->state != CycleState::Planned) {
        throw Error(Status::Sequence, "cycle " + std::to_string(cycle->no) + " is " +
                                          cycle_state_name(cycle->state) +
                                          ", only a Planned cycle can open");
    }
    for (const auto& c : campaign.cycles) {
        if (c.no < cycle->no && c.state != CycleState::Closed) {
            throw Error(Status::Sequence,
                        "cycle " + std::to_string(c.no) + " is still " +
                            cycle_state_name(c.state) + "; close it first");
        }
    }
    OpenResult result;
    result.cycle_no = cycle->no;
    if (cycle->entry.system_pass < campaign.entry_floor) {
        std::ostringstream why;
        why << "system test pass rate " << format_rate(cycle->entry.system_pass)
            << " is below the " << format_rate(campaign.entry_floor) << " floor";
        result.refusals.push_back(why.str());
    }
    if (!cycle->entry.smoke) {
        result.refusals.push_back("smoke test has not passed on the build");
    }
    if (!cycle->entry.integrated) {
        result.refusals.push_back("applications are not integrated in the environment");
    }
    if (result.refusals.empty()) {
        cycle->state = CycleState::Open;
        result.opened = true;
    }
    return result;
}

void cycle_record(Campaign& campaign, int cycle_no, const std::string& case_id,
                  Verdict verdict) {
    Cycle* cycle = find_cycle(campaign, cycle_no);
    if (!cycle) {
        throw Error(Status::Absent, "no cycle " + std::to_string(cycle_no));
    }
    if (cycle->state != CycleState::Open) {
        throw Error(Status::Sequence, "cycle " + std::to_string(cycle_no) + " is " +
                                          cycle_state_name(cycle->state) +
                                          ", results need an Open cycle");
    }
    if (std::find(cycle->cases.begin(), cycle->cases.end(), case_id) ==
        cycle->cases.end()) {
        throw Error(Status::Absent, "case " + case_id + " is not in cycle " +
                                        std::to_string(cycle_no));
    }
    cycle->results[case_id] = verdict;
}

void cycle_close(Campaign& campaign, int cycle_no, std::optional<bool> regression_done) {
    Cycle* cycle = find_cycle(campaign, cycle_no);
    if (!cycle) {
        throw Error(Status::Absent, "no cycle " + std::to_string(cycle_no));
    }
    if (cycle->state != CycleState::Open) {
        throw Error(Status::Sequence, "cycle " + std::to_string(cycle_no) + " is " +
                                          cycle_state_name(cycle->state) +
                                          ", only an Open cycle can close");
    }
    for (const auto& case_id : cycle->cases) {
        if (!cycle->results.count(case_id)) {
            throw Error(Status::Sequence, "case " + case_id + " has no result in cycle " +
                                              std::to_string(cycle_no));
        }
    }
    cycle->state = CycleState::Closed;
    if (regression_done) {
        campaign.regression_done = *regression_done;
    }
}

double cycle_pass_rate(const Cycle& cycle) {
    if (cycle.cases.empty()) {
        return 0.0;
    }
    int64_t passed = 0;
    for (const auto& case_id : cycle.cases) {
        auto it = cycle.results.find(case_id);
        if (it != cycle.results.end() && it->second == Verdict::Pass) {
            ++passed;
        }
    }
    return static_cast<double>(passed) / static_cast<double>(cycle.cases.size());
}

ExitReport exit_check(const Campaign& campaign) {
    ExitReport report;
    int closed = 0;
    const Cycle* final_closed = nullptr;
    for (const auto& c : campaign.cycles) {
        if (c.state == CycleState::Closed) {
            ++closed;
            if (!final_closed || c.no > final_closed->no) {
                final_closed = &c;
            }
        }
    }
    {
        ExitCriterion c;
        c.name = "closed-cycles";
        c.pass = closed >= 3;
        c.detail = std::to_string(closed) + " closed, 3 needed";
        report.criteria.push_back(c);
    }
    {
        ExitCriterion c;
        c.name = "final-pass-rate";
        if (final_closed) {
            double rate = cycle_pass_rate(*final_closed);
            c.pass = rate >= campaign.exit_rate;
            c.detail = "cycle " + std::to_string(final_closed->no) + " passed " +
                       format_rate(rate) + ", " + format_rate(campaign.exit_rate) +
                       " needed";
        } else {
            c.pass = false;
            c.detail = "no closed cycle";
        }
        report.criteria.push_back(c);
    }
    {
        ExitCriterion c;
        c.name = "regression";
        c.pass = campaign.regression_done;
        c.detail = campaign.regression_done ? "regression suite has run"
                                            : "regression suite has not run";
        report.criteria.push_back(c);
    }
    {
        // Local tightening of the exit gate: a severity-1 defect sitting
        // Open or Reopened vetoes completion regardless of pass rates.
        ExitCriterion c;
        c.name = "open-s1";
        std::vector<std::string> blocking;
        for (const auto& d : campaign.defects) {
            if (d.severity == Severity::S1 &&
                (d.state == DefectState::Open || d.state == DefectState::Reopened)) {
                blocking.push_back(d.id);
            }
        }
        c.pass = blocking.empty();
        c.detail = blocking.empty() ? "no S1 defect is open"
                                    : "S1 still open: " + text::join(blocking, ", ");
        report.criteria.push_back(c);
    }
    report.done = true;
    for (const auto& c : report.criteria) {
        report.done = report.done && c.pass;
    }
    return report;
}

// ---- defects ----------------------------------------------------------------

Severity suggest_severity(std::int64_t blocked) {
    return blocked > 15 ? Severity::S1 : Severity::S2;
}

std::string normalize_title(const std::string& env, const std::string& application,
                            const std::string& description) {
    // en dash between the tags and the description
    return "[" + env + "][" + application + "] \xE2\x80\x93 " + description;
}

const Defect* find_defect(const Campaign& campaign, const std::string& defect_id) {
    for (const auto& d : campaign.defects) {
        if (d.id == defect_id) {
            return &d;
        }
    }
    return nullptr;
}

namespace {

std::string next_defect_id(const Campaign& campaign) {
    int64_t max_n = 0;
    for (const auto& d : campaign.defects) {
        if (d.id.rfind("D-", 0) == 0 && text::all_digits(d.id.substr(2))) {
            max_n = std::max(max_n, static_cast<int64_t>(std::stoll(d.id.substr(2))));
        }
    }
    return "D-" + text::pad_int(max_n + 1, 3);
}

}  // namespace

std::string defect_file(Campaign& campaign, const DefectDraft& draft) {
    auto need = [](const std::string& value, const std::string& name) {
        if (value.empty()) {
            throw Error(Status::Usage, "defect is missing mandatory field '" + name + "'");
        }
    };
    need(draft.env, "env");
    need(draft.application, "application");
    need(draft.description, "description");
    need(draft.steps, "steps");
    need(draft.data, "data");
    if (draft.blocked < 0) {
        throw Error(Status::Usage, "blocked count cannot be negative");
    }
    Defect d;
    d.id = draft.id.empty() ? next_defect_id(campaign) : draft.id;
    if (find_defect(campaign, d.id)) {
        throw Error(Status::Usage, "defect " + d.id + " already exists");
    }
    Severity suggested = suggest_severity(draft.blocked);
    if (draft.severity && *draft.severity != suggested) {
        if (draft.severity_justification.empty()) {
            throw Error(Status::Usage,
                        "severity override to " + testkit::severity_name(*draft.severity) +
                            " (suggested " + testkit::severity_name(suggested) +
                            ") needs a justification");
        }
        d.severity = *draft.severity;
        d.severity_justification = draft.severity_justification;
    } else {
        d.severity = suggested;
    }
    d.state = DefectState::New;
    d.blocked = draft.blocked;
    d.env = draft.env;
    d.application = draft.application;
    d.description = draft.description;
    d.steps = draft.steps;
    d.data = draft.data;
    d.trace = draft.trace;
    d.title = normalize_title(d.env, d.application, d.description);
    d.history.push_back("filed as " + testkit::severity_name(d.severity));
    campaign.defects.push_back(std::move(d));
    return campaign.defects.back().id;
}

void defect_transition(Campaign& campaign, const std::string& defect_id, DefectState to,
                       const std::string& role, const std::string& note) {
    Defect* defect = nullptr;
    for (auto& d : campaign.defects) {
        if (d.id == defect_id) {
            defect = &d;
            break;
        }
    }
    if (!defect) {
        throw Error(Status::Absent, "no defect " + defect_id);
    }
    if (!campaign.lifecycle.edge_exists(defect->state, to)) {
        throw Error(Status::Sequence, "no transition " + defect_state_name(defect->state) +
                                          " -> " + defect_state_name(to));
    }
    if (!campaign.lifecycle.allowed(defect->state, to, role)) {
        throw Error(Status::Sequence, "role '" + role + "' may not move " +
                                          defect_state_name(defect->state) + " -> " +
                                          defect_state_name(to));
    }
    std::string entry = defect_state_name(defect->state) + "->" + defect_state_name(to) +
                        " by " + role;
    if (!note.empty()) {
        entry += ": " + note;
    }
    defect->state = to;
    defect->history.push_back(entry);
}

// ---- reporting --------------------------------------------------------------

std::string report_text(const Campaign& campaign) {
    std::ostringstream out;
    Coverage cov = rtm_coverage(campaign);
    out << "coverage\n";
    out << "  in-scope " << cov.covered.size() + cov.uncovered.size() << ", covered "
        << cov.covered.size() << ", rate " << format_rate(cov.rate) << "\n";
    if (!cov.uncovered.empty()) {
        out << "  uncovered: " << text::join(cov.uncovered, ", ") << "\n";
    }
    if (!cov.out_scope.empty()) {
        out << "  out of scope: " << text::join(cov.out_scope, ", ") << "\n";
    }
    out << "cycles\n";
    for (const auto& c : campaign.cycles) {
        out << "  cycle " << c.no << " " << cycle_state_name(c.state) << " cases "
            << c.cases.size();
        if (!c.results.empty()) {
            int64_t pass = 0, fail = 0, blocked = 0;
            for (const auto& [id, v] : c.results) {
                if (v == Verdict::Pass) ++pass;
                if (v == Verdict::Fail) ++fail;
                if (v == Verdict::Blocked) ++blocked;
            }
            out << " pass " << pass << " fail " << fail << " blocked " << blocked
                << " rate " << format_rate(cycle_pass_rate(c));
        }
        out << "\n";
    }
    out << "defects\n";
    for (const auto& d : campaign.defects) {
        out << "  " << d.id << " " << testkit::severity_name(d.severity) << " "
            << defect_state_name(d.state) << " " << d.title << "\n";
    }
    ExitReport exit = exit_check(campaign);
    out << "exit " << (exit.done ? "ready" : "not ready") << "\n";
    for (const auto& c : exit.criteria) {
        out << "  [" << (c.pass ? "ok" : "no") << "] " << c.name << ": " << c.detail
            << "\n";
    }
    return out.str();
}

std::string report_structured(const Campaign& campaign) {
    ordered_json j;
    Coverage cov = rtm_coverage(campaign);
    j["coverage"]["in_scope"] = cov.covered.size() + cov.uncovered.size();
    j["coverage"]["covered"] = cov.covered;
    j["coverage"]["uncovered"] = cov.uncovered;
    j["coverage"]["out_scope"] = cov.out_scope;
    j["coverage"]["rate"] = format_rate(cov.rate);
    j["cycles"] = ordered_json::array();
    for (const auto& c : campaign.cycles) {
        ordered_json cj;
        cj["no"] = c.no;
        cj["state"] = cycle_state_name(c.state);
        cj["cases"] = c.cases;
        ordered_json results = ordered_json::object();
        for (const auto& [id, v] : c.results) {
            results[id] = testkit::verdict_name(v);
        }
        cj["results"] = results;
        if (!c.results.empty()) {
            cj["pass_rate"] = format_rate(cycle_pass_rate(c));
        }
        j["cycles"].push_back(cj);
    }
    j["defects"] = ordered_json::array();
    for (const auto& d : campaign.defects) {
        ordered_json dj;
        dj["id"] = d.id;
        dj["severity"] = testkit::severity_name(d.severity);
        dj["state"] = defect_state_name(d.state);
        dj["title"] = d.title;
        dj["blocked"] = d.blocked;
        j["defects"].push_back(dj);
    }
    ExitReport exit = exit_check(campaign);
    j["exit"]["done"] = exit.done;
    j["exit"]["criteria"] = ordered_json::array();
    for (const auto& c : exit.criteria) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["detail"] = c.detail;
        j["exit"]["criteria"].push_back(cj);
    }
    return j.dump(2) + "\n";
}

}  // namespace itb::stlc
