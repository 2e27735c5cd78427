// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testkit/case_model.hpp"

namespace itb::stlc {

using testkit::Severity;
using testkit::Verdict;

enum class ReqSource { MRD, BRD, FRD, DESIGN };

std::string req_source_name(ReqSource s);
ReqSource parse_req_source(const std::string& s);  // throws Error(Usage)

struct Requirement {
    std::string id;
    ReqSource source = ReqSource::FRD;
    std::string text;
    bool in_scope = true;
};

// One traceability chain: requirement, scenario, condition, case. The
// matrix is the set of all chains; every hop is queryable in both
// directions.
struct RtmChain {
    std::string req;
    std::string scenario;
    std::string condition;
    std::string case_id;
};

enum class CycleState { Planned, Open, Closed };

std::string cycle_state_name(CycleState s);
CycleState parse_cycle_state(const std::string& s);  // throws Error(Usage)

struct CycleEntry {
    double system_pass = 0.0;  // measured system-test pass rate
    bool smoke = false;
    bool integrated = false;
};

struct Cycle {
    int no = 0;
    CycleState state = CycleState::Planned;
    std::vector<std::string> cases;
    CycleEntry entry;
    std::map<std::string, Verdict> results;
};

enum class DefectState {
    New,
    Assigned,
    Open,
    Fixed,
    Retest,
    Closed,
    Reopened,
    Rejected,
    Deferred,
};

std::string defect_state_name(DefectState s);
DefectState parse_defect_state(const std::string& s);  // throws Error(Usage)

struct Defect {
    std::string id;
    std::string title;  // normalized "[Env][Application] – description"
    Severity severity = Severity::S2;
    DefectState state = DefectState::New;
    std::int64_t blocked = 0;  // count of test cases this defect blocks
    std::string env;
    std::string application;
    std::string description;
    std::string steps;
    std::string data;
    std::string trace;
    std::string severity_justification;
    std::vector<std::string> history;
};

struct LifecycleEdge {
    DefectState from;
    DefectState to;
    std::string role;
};

// The allowed defect moves, each bound to the role that may make it. The
// default graph can be replaced wholesale from the campaign file.
struct LifecycleGraph {
    std::vector<LifecycleEdge> edges;

    static LifecycleGraph defaults();
    bool edge_exists(DefectState from, DefectState to) const;
    bool allowed(DefectState from, DefectState to, const std::string& role) const;
};

struct Campaign {
    bool regression_done = false;
    double entry_floor = 0.80;
    double exit_rate = 0.90;
    std::vector<Requirement> requirements;
    std::vector<RtmChain> chains;
    std::vector<Cycle> cycles;
    std::vector<Defect> defects;
    LifecycleGraph lifecycle = LifecycleGraph::defaults();
    bool lifecycle_overridden = false;
    std::string origin;
};

// ---- file io ----------------------------------------------------------------

Campaign parse_campaign(const std::string& content, const std::string& origin);
Campaign load_campaign(const std::string& path);
std::string save_campaign_text(const Campaign& campaign);
void save_campaign(const Campaign& campaign, const std::string& path);

// ---- traceability -----------------------------------------------------------

// Case ids reachable from any id in the matrix (requirement, scenario,
// condition or case). Throws Error(Absent) for ids the matrix never mentions.
std::vector<std::string> rtm_forward(const Campaign& campaign, const std::string& id);
// Requirement ids reachable backwards from any id.
std::vector<std::string> rtm_back(const Campaign& campaign, const std::string& id);

struct Coverage {
    std::vector<std::string> covered;    // in-scope, linked to >=1 case
    std::vector<std::string> uncovered;  // in-scope, no chain
    std::vector<std::string> out_scope;
    double rate = 0.0;  // covered / in-scope
};

Coverage rtm_coverage(const Campaign& campaign);

// ---- cycles -----------------------------------------------------------------

struct OpenResult {
    bool opened = false;
    int cycle_no = 0;
    std::vector<std::string> refusals;  // each unmet entry criterion
};

// Opens the given cycle (or the next Planned one when cycle_no is empty).
// Sequencing trouble (no such cycle, not Planned, an earlier cycle still
// open) throws; unmet entry criteria come back as refusals.
OpenResult cycle_open(Campaign& campaign, std::optional<int> cycle_no);

void cycle_record(Campaign& campaign, int cycle_no, const std::string& case_id,
                  Verdict verdict);

// Requires every case in the cycle to have a recorded result.
void cycle_close(Campaign& campaign, int cycle_no, std::optional<bool> regression_done);

double cycle_pass_rate(const Cycle& cycle);

struct ExitCriterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExitReport {
    bool done = false;
    std::vector<ExitCriterion> criteria;
};

ExitReport exit_check(const Campaign& campaign);

// ---- defects ----------------------------------------------------------------

struct DefectDraft {
    std::string id;  // empty: assign the next free D-NNN
    std::string env;
    std::string application;
    std::string description;
    std::string steps;
    std::string data;
    std::string trace;
    std::int64_t blocked = 0;
    std::optional<Severity> severity;  // override; needs justification
    std::string severity_justification;
};

Severity suggest_severity(std::int64_t blocked);
std::string normalize_title(const std::string& env, const std::string& application,
                            const std::string& description);

// Validates mandatory fields, derives severity and title, appends the
// defect in state New. Returns its id.
std::string defect_file(Campaign& campaign, const DefectDraft& draft);

void defect_transition(Campaign& campaign, const std::string& defect_id,
                       DefectState to, const std::string& role,
                       const std::string& note);

const Defect* find_defect(const Campaign& campaign, const std::string& defect_id);

// ---- reporting --------------------------------------------------------------

std::string report_text(const Campaign& campaign);
std::string report_structured(const Campaign& campaign);

}  // namespace itb::stlc
