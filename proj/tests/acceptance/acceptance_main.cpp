// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Acceptance harness. Each criterion prints exactly one PASS/FAIL line;
// the process exits nonzero if any criterion failed. Randomized criteria
// use fixed seeds so a run is reproducible bit for bit.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "environment.hpp"
#include "stlc/campaign.hpp"
#include "testkit/executor.hpp"

using namespace itb;

namespace {

std::string cases_dir() {
    return ITB_CASES_DIR;
}

std::string offline_cancel_path() {
    return cases_dir() + "/offline_screen_cancel.case";
}

testkit::CaseResult run_file(const std::string& path) {
    return testkit::run_case(testkit::load_case(path), {});
}

bool all_steps_pass(const testkit::CaseResult& result) {
    for (const auto& step : result.steps) {
        if (step.status != testkit::StepStatus::Pass) {
            return false;
        }
    }
    return result.verdict == testkit::Verdict::Pass;
}

// Runs a command, captures stdout, returns the exit code (-1 on failure
// to launch).
int run_command(const std::string& command, std::string& out) {
    out.clear();
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        return -1;
    }
    char buffer[4096];
    size_t n = 0;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        out.append(buffer, n);
    }
    int status = pclose(pipe);
    if (status == -1) {
        return -1;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- criterion 1: the end-to-end offline screening case ----------------------

bool criterion_offline_cancel(std::string& detail) {
    auto started = std::chrono::steady_clock::now();
    testkit::CaseResult result = run_file(offline_cancel_path());
    auto elapsed = std::chrono::steady_clock::now() - started;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

    if (!all_steps_pass(result)) {
        detail = "case verdict " + testkit::verdict_name(result.verdict) + "\n" +
                 testkit::render_text(result);
        return false;
    }
    std::set<int> majors;
    for (const auto& step : result.steps) {
        majors.insert(step.no.parts.at(0));
    }
    for (int major = 1; major <= 12; ++major) {
        if (!majors.count(major)) {
            detail = "step " + std::to_string(major) + " missing from the case";
            return false;
        }
    }
    if (ms >= 1000) {
        detail = "run took " + std::to_string(ms) + "ms";
        return false;
    }

    // The command line is a thin shell over the same library; the same
    // case must pass with the same report.
    auto work_dir = std::filesystem::temp_directory_path() / "itb_acceptance_cli";
    std::filesystem::create_directories(work_dir);
    auto trace_out = work_dir / "trace.txt";
    std::string cli_out;
    std::string command = "cd '" + work_dir.string() + "' && env -u ITB_CLOCK '" +
                          ITB_CLI_PATH + "' run '" + offline_cancel_path() + "' --trace-out '" +
                          trace_out.string() + "' 2>/dev/null";
    int code = run_command(command, cli_out);
    if (code != 0) {
        detail = "cli exit code " + std::to_string(code);
        return false;
    }
    if (cli_out != testkit::render_text(result)) {
        detail = "cli report differs from the direct run";
        return false;
    }
    return true;
}

// ---- criterion 2: error-guessing cases ---------------------------------------

bool criterion_error_guessing(std::string& detail) {
    const std::vector<std::string> files = {
        "error_guessing/tax_down.case",
        "error_guessing/gateway_down.case",
        "error_guessing/expired_card.case",
        "error_guessing/payment_resubmit.case",
    };
    for (const auto& file : files) {
        testkit::CaseResult result = run_file(cases_dir() + "/" + file);
        if (!all_steps_pass(result)) {
            detail = file + " verdict " + testkit::verdict_name(result.verdict) + "\n" +
                     testkit::render_text(result);
            return false;
        }
    }
    return true;
}

// ---- criterion 3: account numbers never cross the storefront boundary --------

std::vector<std::string> digit_runs(const std::string& text) {
    std::vector<std::string> runs;
    std::string current;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            current.push_back(c);
        } else if (!current.empty()) {
            runs.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) {
        runs.push_back(current);
    }
    return runs;
}

// True when any five consecutive digits of the account number appear in
// the text. Five digits always reach outside the last-four tail, so any
// hit is a leak.
bool leaks_pan(const std::string& text, const std::string& pan) {
    for (const auto& run : digit_runs(text)) {
        if (run.size() < 5) {
            continue;
        }
        for (size_t i = 0; i + 5 <= pan.size(); ++i) {
            if (run.find(pan.substr(i, 5)) != std::string::npos) {
                return true;
            }
        }
    }
    return false;
}

bool criterion_pan_containment(std::string& detail) {
    std::mt19937 rng(20120101);
    auto digit = [&] { return static_cast<char>('0' + rng() % 10); };

    // The scan matches five-digit fragments, so the generator avoids
    // account numbers that echo numbers the environment legitimately
    // sends: the two address zips and the zero runs in order numbers.
    auto make_pan = [&]() -> std::string {
        while (true) {
            std::string pan;
            size_t length = 12 + rng() % 8;
            if (rng() % 2 == 0) {
                pan = "4213";
            }
            while (pan.size() < length) {
                pan.push_back(digit());
            }
            if (pan.find("0000") == std::string::npos &&
                pan.find("10001") == std::string::npos &&
                pan.find("90210") == std::string::npos) {
                return pan;
            }
        }
    };

    using netsim::Availability;
    using netsim::ServiceId;
    const std::vector<std::pair<ServiceId, Availability>> fault_pool = {
        {ServiceId::WEBSVC, Availability::Down}, {ServiceId::MERCHANT, Availability::Down},
        {ServiceId::TAX, Availability::Down},    {ServiceId::OMS, Availability::Down},
        {ServiceId::FRAUD, Availability::Down},  {ServiceId::FRAUD, Availability::Offline},
    };

    for (int session_no = 0; session_no < 200; ++session_no) {
        ScenarioConfig config;
        config.stock["ITEM-1"] = 9;
        config.prices["ITEM-1"] = domain::make_money(4999, "USD");
        size_t fault_count = rng() % 3;
        for (size_t i = 0; i < fault_count; ++i) {
            config.faults.push_back(fault_pool[rng() % fault_pool.size()]);
        }
        if (rng() % 4 == 0) {
            config.fraud_ips.push_back("198.51.100.7");
        }

        std::string pan = make_pan();
        std::string expiry = rng() % 4 == 0 ? "01/2010" : "12/2099";

        Environment env(config);
        auto& session = env.ols().new_session("198.51.100.7");
        try {
            env.ols().check_availability(session, "ITEM-1");
            env.ols().cart_checkout(session, "ITEM-1", 1);
            env.ols().set_addresses(session, std::nullopt, std::nullopt);
            domain::CardDetails card{domain::CardNetwork::Visa, domain::Pan::parse(pan),
                                     domain::parse_expiry(expiry)};
            auto outcome = env.ols().submit_payment(session, card);
            if (rng() % 3 == 0) {
                env.ols().resubmit_payment(session);
            }
            if (outcome == storefront::PaymentOutcome::Accepted) {
                env.ols().place_order(session);
                if (rng() % 2 == 0) {
                    env.oms().run_fraud_batch();
                    auto file = env.oms().rtlog_emit();
                    env.resa().ingest(file.content);
                }
            }
        } catch (const Error&) {
            // A faulted pipeline may refuse mid-walk; the trace up to
            // that point still has to be clean.
        }

        for (const auto& envelope : env.bus().trace()) {
            if (leaks_pan(envelope.payload, pan) || leaks_pan(envelope.reply, pan)) {
                detail = "session " + std::to_string(session_no) + " leaked digits of " +
                         pan + " in envelope " + std::to_string(envelope.seq) + " (" +
                         envelope.kind + ")";
                return false;
            }
        }
    }
    return true;
}

// ---- criterion 4: the shipped suite is deterministic --------------------------

bool criterion_determinism(std::string& detail) {
    std::vector<std::string> files = {
        "offline_screen_cancel.case",
        "error_guessing/tax_down.case",
        "error_guessing/gateway_down.case",
        "error_guessing/expired_card.case",
        "error_guessing/payment_resubmit.case",
    };
    auto run_suite = [&](std::string& reports, std::string& traces) {
        for (const auto& file : files) {
            testkit::CaseResult result = run_file(cases_dir() + "/" + file);
            reports += testkit::render_text(result);
            reports += testkit::render_structured(result);
            traces += result.trace_export;
        }
    };
    std::string reports_a, traces_a, reports_b, traces_b;
    run_suite(reports_a, traces_a);
    run_suite(reports_b, traces_b);
    if (reports_a != reports_b) {
        detail = "reports differ between two identical runs";
        return false;
    }
    if (traces_a != traces_b) {
        detail = "trace exports differ between two identical runs";
        return false;
    }
    if (traces_a.empty()) {
        detail = "suite produced no trace at all";
        return false;
    }
    return true;
}

// ---- criterion 5: deferred screening against a brute-force stock oracle ------

bool criterion_batch_oracle(std::string& detail) {
    std::mt19937 rng(5050);
    for (int round = 0; round < 10; ++round) {
        ScenarioConfig config;
        const int64_t seed_stock = 500;
        config.stock["ITEM-1"] = seed_stock;
        config.prices["ITEM-1"] = domain::make_money(4999, "USD");
        config.faults.emplace_back(netsim::ServiceId::FRAUD,
                                   netsim::Availability::Offline);

        std::vector<std::string> pool;
        for (int i = 1; i <= 10; ++i) {
            pool.push_back("203.0.113." + std::to_string(i));
        }
        std::set<std::string> listed;
        for (const auto& ip : pool) {
            if (rng() % 3 == 0) {
                listed.insert(ip);
            }
        }
        config.fraud_ips.assign(listed.begin(), listed.end());

        Environment env(config);
        size_t order_count = 1 + rng() % 50;
        int64_t expected_released_qty = 0;
        for (size_t i = 0; i < order_count; ++i) {
            const std::string& ip = pool[rng() % pool.size()];
            int64_t qty = 1 + static_cast<int64_t>(rng() % 3);
            auto& session = env.ols().new_session(ip);
            env.ols().cart_checkout(session, "ITEM-1", qty);
            env.ols().set_addresses(session, std::nullopt, std::nullopt);
            domain::CardDetails card{domain::CardNetwork::Visa,
                                     domain::Pan::parse("4213000111222333"),
                                     domain::parse_expiry("12/2099")};
            if (env.ols().submit_payment(session, card) !=
                storefront::PaymentOutcome::Accepted) {
                detail = "payment unexpectedly refused while staging orders";
                return false;
            }
            auto placed = env.ols().place_order(session);
            if (!placed.placed) {
                detail = "order placement failed while staging: " + placed.error;
                return false;
            }
            // The oracle replays the screening rule by hand: an order
            // clears exactly when its address is not on the list.
            if (!listed.count(ip)) {
                expected_released_qty += qty;
            }
        }

        env.oms().run_fraud_batch();
        auto file = env.oms().rtlog_emit();
        auto audit = env.resa().ingest(file.content);
        if (audit.file_rejected || audit.records_rejected != 0) {
            detail = "audit rejected its own emitted file";
            return false;
        }

        int64_t expected = seed_stock - expected_released_qty;
        int64_t actual = env.oms().check_inventory("ITEM-1").value_or(-1);
        if (actual != expected) {
            detail = "round " + std::to_string(round) + ": stock " +
                     std::to_string(actual) + ", oracle wants " + std::to_string(expected);
            return false;
        }
    }
    return true;
}

// ---- criterion 6: process boundaries -----------------------------------------

bool criterion_process_boundaries(std::string& detail) {
    auto planned_campaign = [](double system_pass) {
        stlc::Campaign c;
        c.entry_floor = 0.80;
        c.requirements.push_back({"REQ-1", stlc::ReqSource::BRD, "", true});
        c.chains.push_back({"REQ-1", "SCN-1", "COND-1", "CASE-A"});
        stlc::Cycle cy;
        cy.no = 1;
        cy.cases = {"CASE-A"};
        cy.entry = {system_pass, true, true};
        c.cycles.push_back(cy);
        return c;
    };
    auto below = planned_campaign(0.79);
    if (stlc::cycle_open(below, 1).opened) {
        detail = "cycle opened at a 0.79 pass rate under a 0.80 floor";
        return false;
    }
    auto at_floor = planned_campaign(0.80);
    if (!stlc::cycle_open(at_floor, 1).opened) {
        detail = "cycle refused at exactly the 0.80 floor";
        return false;
    }

    auto closed_campaign = [](int cycles, int passed_of_100) {
        stlc::Campaign c;
        c.regression_done = true;
        c.exit_rate = 0.90;
        c.requirements.push_back({"REQ-1", stlc::ReqSource::BRD, "", true});
        for (int i = 0; i < 100; ++i) {
            c.chains.push_back({"REQ-1", "SCN-1", "COND-1", "CASE-" + std::to_string(i)});
        }
        for (int no = 1; no <= cycles; ++no) {
            stlc::Cycle cy;
            cy.no = no;
            cy.state = stlc::CycleState::Closed;
            for (int i = 0; i < 100; ++i) {
                std::string id = "CASE-" + std::to_string(i);
                cy.cases.push_back(id);
                bool pass = no != cycles || i < passed_of_100;
                cy.results[id] = pass ? testkit::Verdict::Pass : testkit::Verdict::Fail;
            }
            c.cycles.push_back(cy);
        }
        return c;
    };
    auto two_cycles = closed_campaign(2, 100);
    if (stlc::exit_check(two_cycles).done) {
        detail = "exit granted with only two closed cycles";
        return false;
    }
    auto three_cycles = closed_campaign(3, 100);
    if (!stlc::exit_check(three_cycles).done) {
        detail = "exit refused with three closed cycles at full pass rate";
        return false;
    }
    auto low_rate = closed_campaign(3, 89);
    if (stlc::exit_check(low_rate).done) {
        detail = "exit granted at a 0.89 final pass rate under a 0.90 bar";
        return false;
    }
    auto at_rate = closed_campaign(3, 90);
    if (!stlc::exit_check(at_rate).done) {
        detail = "exit refused at exactly the 0.90 final pass rate";
        return false;
    }

    if (stlc::suggest_severity(15) != testkit::Severity::S2) {
        detail = "15 blocked cases should suggest S2";
        return false;
    }
    if (stlc::suggest_severity(16) != testkit::Severity::S1) {
        detail = "16 blocked cases should suggest S1";
        return false;
    }
    return true;
}

// ---- criterion 7: defect lifecycle vs an adjacency oracle ---------------------

bool criterion_lifecycle_oracle(std::string& detail) {
    using stlc::DefectState;
    // The oracle is written out by hand rather than read from the
    // implementation, so a graph bug cannot vouch for itself.
    const std::vector<std::tuple<DefectState, DefectState, std::string>> oracle_edges = {
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
    auto oracle_allows = [&](DefectState from, DefectState to, const std::string& role) {
        for (const auto& [f, t, r] : oracle_edges) {
            if (f == from && t == to && r == role) {
                return true;
            }
        }
        return false;
    };
    auto oracle_has_exit = [&](DefectState from) {
        for (const auto& [f, t, r] : oracle_edges) {
            (void)t;
            (void)r;
            if (f == from) {
                return true;
            }
        }
        return false;
    };

    const std::vector<DefectState> states = {
        DefectState::New,    DefectState::Assigned, DefectState::Open,
        DefectState::Fixed,  DefectState::Retest,   DefectState::Closed,
        DefectState::Reopened, DefectState::Rejected, DefectState::Deferred,
    };
    const std::vector<std::string> roles = {"lead", "developer", "tester", "auditor"};

    stlc::Campaign campaign;
    stlc::DefectDraft draft;
    draft.env = "INT2";
    draft.application = "OMS";
    draft.description = "probe";
    draft.steps = "probe";
    draft.data = "probe";
    std::string id = stlc::defect_file(campaign, draft);
    DefectState oracle_state = DefectState::New;

    std::mt19937 rng(7777);
    for (int trial = 0; trial < 1000; ++trial) {
        if (!oracle_has_exit(oracle_state)) {
            id = stlc::defect_file(campaign, draft);
            oracle_state = DefectState::New;
        }
        DefectState to = states[rng() % states.size()];
        const std::string& role = roles[rng() % roles.size()];
        bool expected = oracle_allows(oracle_state, to, role);
        bool moved = true;
        try {
            stlc::defect_transition(campaign, id, to, role, "");
        } catch (const Error& e) {
            moved = false;
            if (e.status() != Status::Sequence) {
                detail = "trial " + std::to_string(trial) + ": refusal carried status " +
                         std::to_string(static_cast<int>(e.status()));
                return false;
            }
        }
        if (moved != expected) {
            detail = "trial " + std::to_string(trial) + ": " +
                     stlc::defect_state_name(oracle_state) + " -> " +
                     stlc::defect_state_name(to) + " by " + role + " " +
                     (moved ? "moved" : "refused") + " against the oracle";
            return false;
        }
        if (moved) {
            oracle_state = to;
        }
        const stlc::Defect* d = stlc::find_defect(campaign, id);
        if (!d || d->state != oracle_state) {
            detail = "trial " + std::to_string(trial) + ": stored state diverged";
            return false;
        }
    }
    return true;
}

// ---- criterion 8: traceability closure on random matrices ---------------------

bool criterion_rtm_oracle(std::string& detail) {
    std::mt19937 rng(8888);
    for (int round = 0; round < 50; ++round) {
        stlc::Campaign c;
        size_t req_count = 1 + rng() % 100;
        std::map<std::string, std::set<std::string>> forward_oracle;
        std::map<std::string, std::set<std::string>> back_oracle;
        std::set<std::string> covered_oracle;

        for (size_t r = 0; r < req_count; ++r) {
            stlc::Requirement req;
            req.id = "REQ-" + std::to_string(r);
            req.source = stlc::ReqSource::FRD;
            req.in_scope = rng() % 5 != 0;
            c.requirements.push_back(req);

            size_t chain_count = rng() % 4;
            for (size_t k = 0; k < chain_count; ++k) {
                // Case ids are drawn from a small pool so several
                // requirements share one case now and then.
                std::string case_id = "CASE-" + std::to_string(rng() % (req_count * 2));
                std::string scenario = "SCN-" + std::to_string(r) + "-" + std::to_string(k);
                std::string condition = "COND-" + std::to_string(rng() % 7);
                c.chains.push_back({req.id, scenario, condition, case_id});
                forward_oracle[req.id].insert(case_id);
                back_oracle[case_id].insert(req.id);
                covered_oracle.insert(req.id);
            }
        }

        for (const auto& req : c.requirements) {
            std::set<std::string> want = forward_oracle.count(req.id)
                                             ? forward_oracle[req.id]
                                             : std::set<std::string>{};
            auto got = stlc::rtm_forward(c, req.id);
            if (std::set<std::string>(got.begin(), got.end()) != want ||
                got.size() != want.size()) {
                detail = "round " + std::to_string(round) + ": forward closure of " +
                         req.id + " diverged";
                return false;
            }
        }
        for (const auto& [case_id, want] : back_oracle) {
            auto got = stlc::rtm_back(c, case_id);
            if (std::set<std::string>(got.begin(), got.end()) != want ||
                got.size() != want.size()) {
                detail = "round " + std::to_string(round) + ": backward closure of " +
                         case_id + " diverged";
                return false;
            }
        }

        stlc::Coverage cov = stlc::rtm_coverage(c);
        std::set<std::string> seen;
        size_t in_scope = 0;
        size_t covered = 0;
        for (const auto& req : c.requirements) {
            bool is_covered = covered_oracle.count(req.id) > 0;
            const std::vector<std::string>* bucket = nullptr;
            if (!req.in_scope) {
                bucket = &cov.out_scope;
            } else if (is_covered) {
                bucket = &cov.covered;
                ++in_scope;
                ++covered;
            } else {
                bucket = &cov.uncovered;
                ++in_scope;
            }
            if (std::find(bucket->begin(), bucket->end(), req.id) == bucket->end()) {
                detail = "round " + std::to_string(round) + ": " + req.id +
                         " landed in the wrong coverage bucket";
                return false;
            }
            if (!seen.insert(req.id).second) {
                detail = "round " + std::to_string(round) + ": duplicate id generated";
                return false;
            }
        }
        if (cov.covered.size() + cov.uncovered.size() + cov.out_scope.size() !=
            req_count) {
            detail = "round " + std::to_string(round) +
                     ": coverage buckets do not partition the requirements";
            return false;
        }
        double want_rate =
            in_scope == 0 ? 0.0
                          : static_cast<double>(covered) / static_cast<double>(in_scope);
        if (std::abs(cov.rate - want_rate) > 1e-12) {
            detail = "round " + std::to_string(round) + ": coverage rate diverged";
            return false;
        }
    }
    return true;
}

struct Criterion {
    int no;
    std::string what;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "offline screening cancel case passes end to end in under a second",
         criterion_offline_cancel},
        {2, "error-guessing cases cover tax, gateway, expiry and resubmission",
         criterion_error_guessing},
        {3, "no account number crosses the storefront boundary in 200 random sessions",
         criterion_pan_containment},
        {4, "two full suite runs are byte-identical in reports and traces",
         criterion_determinism},
        {5, "deferred screening matches a brute-force stock oracle",
         criterion_batch_oracle},
        {6, "entry, exit and severity boundaries hold at their exact thresholds",
         criterion_process_boundaries},
        {7, "a thousand random defect transitions agree with the lifecycle oracle",
         criterion_lifecycle_oracle},
        {8, "traceability closure and coverage partition hold on random matrices",
         criterion_rtm_oracle},
    };

    bool all_pass = true;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool pass = false;
        try {
            pass = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("unhandled: ") + e.what();
        }
        std::cout << "criterion " << criterion.no << ": " << (pass ? "PASS" : "FAIL")
                  << " - " << criterion.what << "\n";
        if (!pass) {
            all_pass = false;
            std::cout << "  " << detail << "\n";
        }
    }
    return all_pass ? 0 : 1;
}
