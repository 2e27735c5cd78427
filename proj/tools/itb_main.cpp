// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "itb.h"

namespace {

constexpr const char* kDefaultScenarioFile = "itb-scenario.txt";
constexpr const char* kDefaultTraceFile = "itb-trace.txt";

int fail(itb_status status) {
    std::cerr << "error: " << itb_last_error() << "\n";
    return static_cast<int>(status);
}

int fail_text(itb_status status, const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return static_cast<int>(status);
}

void print_owned(char* text, std::ostream& out) {
    if (text) {
        out << text;
        itb_text_free(text);
    }
}

struct ConfigHandle {
    itb_config* ptr = itb_config_new();
    ~ConfigHandle() { itb_config_free(ptr); }
    ConfigHandle(const ConfigHandle&) = delete;
    ConfigHandle& operator=(const ConfigHandle&) = delete;
    ConfigHandle() = default;
};

struct CampaignHandle {
    itb_campaign* ptr = nullptr;
    ~CampaignHandle() { itb_campaign_free(ptr); }
    CampaignHandle() = default;
    CampaignHandle(const CampaignHandle&) = delete;
    CampaignHandle& operator=(const CampaignHandle&) = delete;
};

struct ScenarioFlags {
    std::string scenario_file;
    std::string clock;
    std::vector<std::string> faults;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
    cmd->add_option("--scenario", flags.scenario_file,
                    "Scenario file; without this flag " +
                        std::string(kDefaultScenarioFile) + " is used when present");
    cmd->add_option("--clock", flags.clock, "Simulated start time, ISO-8601");
    cmd->add_option("--fault", flags.faults, "Service fault as SERVICE=STATE, repeatable");
}

// Precedence, lowest first: scenario file, ITB_CLOCK, command-line flags.
int apply_scenario_flags(const ScenarioFlags& flags, itb_config* config) {
    std::string path = flags.scenario_file;
    if (path.empty()) {
        if (std::filesystem::exists(kDefaultScenarioFile)) {
            path = kDefaultScenarioFile;
        }
    } else if (!std::filesystem::exists(path)) {
        return fail_text(ITB_ABSENT, "no scenario file at '" + path + "'");
    }
    if (!path.empty()) {
        if (itb_status s = itb_config_load_file(config, path.c_str())) return fail(s);
    }
    if (const char* env_clock = std::getenv("ITB_CLOCK")) {
        if (itb_status s = itb_config_set_clock(config, env_clock)) return fail(s);
    }
    if (!flags.clock.empty()) {
        if (itb_status s = itb_config_set_clock(config, flags.clock.c_str())) {
            return fail(s);
        }
    }
    for (const auto& pair : flags.faults) {
        auto eq = pair.find('=');
        if (eq == std::string::npos) {
            return fail_text(ITB_USAGE, "--fault wants SERVICE=STATE, got '" + pair + "'");
        }
        std::string service = pair.substr(0, eq);
        std::string state = pair.substr(eq + 1);
        if (itb_status s = itb_config_set_fault(config, service.c_str(), state.c_str())) {
            return fail(s);
        }
    }
    return 0;
}

struct CaseOutput {
    int code = 0;
    std::string report;
    std::string error;
    std::string trace;
};

int cmd_run(const std::vector<std::string>& cases, const ScenarioFlags& flags,
            const std::string& format, int jobs, const std::string& trace_out) {
    ConfigHandle config;
    if (int rc = apply_scenario_flags(flags, config.ptr)) return rc;

    std::vector<CaseOutput> outputs(cases.size());
    bool structured = format == "structured";
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cases.size(); i = next.fetch_add(1)) {
            itb_run* run = nullptr;
            itb_status s = itb_run_case_file(cases[i].c_str(), config.ptr, &run);
            CaseOutput& out = outputs[i];
            out.code = static_cast<int>(s);
            if (!run) {
                out.error = itb_last_error();
                continue;
            }
            char* report = structured ? itb_run_render_structured(run)
                                      : itb_run_render_text(run);
            if (report) {
                out.report = report;
                itb_text_free(report);
            }
            if (char* trace = itb_run_trace_export(run)) {
                out.trace = trace;
                itb_text_free(trace);
            }
            itb_run_free(run);
        }
    };

    int thread_count = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int i = 0; i < thread_count; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    int exit_code = 0;
    std::string merged_trace;
    for (size_t i = 0; i < cases.size(); ++i) {
        const CaseOutput& out = outputs[i];
        if (!out.error.empty()) {
            std::cerr << "error: " << cases[i] << ": " << out.error << "\n";
        } else {
            std::cout << out.report;
        }
        merged_trace += out.trace;
        exit_code = std::max(exit_code, out.code);
    }
    std::ofstream trace_file(trace_out, std::ios::trunc);
    if (!trace_file) {
        return fail_text(ITB_USAGE, "cannot write trace export to '" + trace_out + "'");
    }
    trace_file << merged_trace;
    return exit_code;
}

int cmd_smoke(const ScenarioFlags& flags) {
    ConfigHandle config;
    if (int rc = apply_scenario_flags(flags, config.ptr)) return rc;
    itb_run* run = nullptr;
    itb_status s = itb_run_smoke(config.ptr, &run);
    if (!run) {
        return fail(s);
    }
    print_owned(itb_run_render_text(run), std::cout);
    itb_run_free(run);
    return static_cast<int>(s);
}

int cmd_fault(const std::string& service, const std::string& state,
              const std::string& scenario_file) {
    if (itb_status s = itb_fault_check(service.c_str(), state.c_str())) {
        return fail(s);
    }
    std::ofstream out(scenario_file, std::ios::app);
    if (!out) {
        return fail_text(ITB_USAGE, "cannot write '" + scenario_file + "'");
    }
    out << "fault = " << service << " " << state << "\n";
    std::cout << "recorded fault " << service << " " << state << " in " << scenario_file
              << "\n";
    return 0;
}

int cmd_trace(const std::string& file, const std::string& from, const std::string& to,
              const std::string& kind, bool decode) {
    std::ifstream in(file);
    if (!in) {
        return fail_text(ITB_ABSENT, "no trace export at '" + file +
                                         "'; run some cases first");
    }
    std::ostringstream content;
    content << in.rdbuf();
    char* out = nullptr;
    std::string text = content.str();
    if (itb_status s = itb_trace_filter(text.c_str(), from.c_str(), to.c_str(),
                                        kind.c_str(), decode ? 1 : 0, &out)) {
        return fail(s);
    }
    print_owned(out, std::cout);
    return 0;
}

int open_campaign(const std::string& path, CampaignHandle& handle) {
    if (itb_status s = itb_campaign_open(path.c_str(), &handle.ptr)) {
        return fail(s);
    }
    return 0;
}

int save_campaign(const CampaignHandle& handle, const std::string& path) {
    if (itb_status s = itb_campaign_save(handle.ptr, path.c_str())) {
        return fail(s);
    }
    return 0;
}

int cmd_rtm_coverage(const std::string& campaign_path) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    char* out = nullptr;
    if (itb_status s = itb_campaign_rtm_coverage(campaign.ptr, &out)) {
        return fail(s);
    }
    print_owned(out, std::cout);
    return 0;
}

int cmd_rtm_trace(const std::string& campaign_path, const std::string& id,
                  bool backward) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    char* out = nullptr;
    if (itb_status s = itb_campaign_rtm_trace(campaign.ptr, id.c_str(),
                                              backward ? 1 : 0, &out)) {
        return fail(s);
    }
    print_owned(out, std::cout);
    return 0;
}

int cmd_cycle_open(const std::string& campaign_path, int cycle_no, double system_pass,
                   int smoke, int integrated) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    if (system_pass >= 0.0 || smoke >= 0 || integrated >= 0) {
        if (itb_status s = itb_campaign_cycle_entry(campaign.ptr, cycle_no, system_pass,
                                                    smoke, integrated)) {
            return fail(s);
        }
    }
    char* report = nullptr;
    itb_status s = itb_campaign_cycle_open(campaign.ptr, cycle_no, &report);
    print_owned(report, std::cout);
    if (s != ITB_OK && s != ITB_FAIL) {
        return fail(s);
    }
    if (s == ITB_OK) {
        if (int rc = save_campaign(campaign, campaign_path)) return rc;
    }
    return static_cast<int>(s);
}

int cmd_cycle_record(const std::string& campaign_path, int cycle_no,
                     const std::string& case_id, const std::string& verdict) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    if (itb_status s = itb_campaign_cycle_record(campaign.ptr, cycle_no, case_id.c_str(),
                                                 verdict.c_str())) {
        return fail(s);
    }
    if (int rc = save_campaign(campaign, campaign_path)) return rc;
    std::cout << "recorded " << case_id << " = " << verdict << " in cycle " << cycle_no
              << "\n";
    return 0;
}

int cmd_cycle_close(const std::string& campaign_path, int cycle_no, int regression_done) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    if (itb_status s = itb_campaign_cycle_close(campaign.ptr, cycle_no, regression_done)) {
        return fail(s);
    }
    if (int rc = save_campaign(campaign, campaign_path)) return rc;
    std::cout << "closed cycle " << cycle_no << "\n";
    return 0;
}

int cmd_exit_check(const std::string& campaign_path) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    char* report = nullptr;
    int done = 0;
    itb_status s = itb_campaign_exit_check(campaign.ptr, &report, &done);
    print_owned(report, std::cout);
    if (s != ITB_OK && s != ITB_FAIL) {
        return fail(s);
    }
    return static_cast<int>(s);
}

struct DefectFlags {
    std::string id;
    std::string env;
    std::string application;
    std::string description;
    std::string steps;
    std::string data;
    std::string trace;
    int blocked = 0;
    std::string severity;
    std::string justification;
};

int cmd_defect_file(const std::string& campaign_path, const DefectFlags& flags) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    std::ostringstream fields;
    auto put = [&fields](const char* key, const std::string& value) {
        if (!value.empty()) {
            fields << key << " = " << value << "\n";
        }
    };
    put("id", flags.id);
    put("env", flags.env);
    put("application", flags.application);
    put("description", flags.description);
    put("steps", flags.steps);
    put("data", flags.data);
    put("trace", flags.trace);
    fields << "blocked = " << flags.blocked << "\n";
    put("severity", flags.severity);
    put("severity_justification", flags.justification);
    char* defect_id = nullptr;
    std::string text = fields.str();
    if (itb_status s = itb_campaign_defect_file(campaign.ptr, text.c_str(), &defect_id)) {
        return fail(s);
    }
    if (int rc = save_campaign(campaign, campaign_path)) return rc;
    std::cout << "filed ";
    print_owned(defect_id, std::cout);
    std::cout << "\n";
    return 0;
}

int cmd_defect_transition(const std::string& campaign_path, const std::string& defect_id,
                          const std::string& to_state, const std::string& role,
                          const std::string& note) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    if (itb_status s = itb_campaign_defect_transition(campaign.ptr, defect_id.c_str(),
                                                      to_state.c_str(), role.c_str(),
                                                      note.c_str())) {
        return fail(s);
    }
    if (int rc = save_campaign(campaign, campaign_path)) return rc;
    std::cout << defect_id << " -> " << to_state << "\n";
    return 0;
}

int cmd_report(const std::string& campaign_path, const std::string& format) {
    CampaignHandle campaign;
    if (int rc = open_campaign(campaign_path, campaign)) return rc;
    char* out = nullptr;
    if (itb_status s = itb_campaign_report(campaign.ptr, format == "structured" ? 1 : 0,
                                           &out)) {
        return fail(s);
    }
    print_owned(out, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integration test bench for the order pipeline simulator"};
    app.set_version_flag("--version", std::string("itb ") + itb_version());
    app.require_subcommand(1);

    auto format_check = CLI::IsMember({"text", "structured"});

    // run
    auto* run_cmd = app.add_subcommand("run", "Run declarative case files");
    std::vector<std::string> run_cases;
    ScenarioFlags run_flags;
    std::string run_format = "text";
    int run_jobs = 1;
    std::string run_trace_out = kDefaultTraceFile;
    run_cmd->add_option("cases", run_cases, "Case files")->required()->expected(-1);
    add_scenario_flags(run_cmd, run_flags);
    run_cmd->add_option("--format", run_format, "Report format")->check(format_check);
    run_cmd->add_option("--jobs", run_jobs, "Run up to N cases concurrently")
        ->check(CLI::Range(1, 64));
    run_cmd->add_option("--trace-out", run_trace_out, "Where to persist the trace export");

    // smoke
    auto* smoke_cmd = app.add_subcommand("smoke", "Exercise every boundary once");
    ScenarioFlags smoke_flags;
    add_scenario_flags(smoke_cmd, smoke_flags);

    // fault
    auto* fault_cmd =
        app.add_subcommand("fault", "Persist a service fault into the scenario file");
    std::string fault_service, fault_state;
    std::string fault_scenario = kDefaultScenarioFile;
    fault_cmd->add_option("service", fault_service, "OLS, WEBSVC, MERCHANT, FRAUD, OMS, RESA or TAX")
        ->required();
    fault_cmd->add_option("state", fault_state, "UP, DOWN or OFFLINE")->required();
    fault_cmd->add_option("--scenario", fault_scenario, "Scenario file to append to");

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "Query the persisted trace export");
    std::string trace_file = kDefaultTraceFile;
    std::string trace_from, trace_to, trace_kind;
    bool trace_decode = false;
    trace_cmd->add_option("--file", trace_file, "Trace export to read");
    trace_cmd->add_option("--from", trace_from, "Only requests sent by this service");
    trace_cmd->add_option("--to", trace_to, "Only requests received by this service");
    trace_cmd->add_option("--kind", trace_kind, "Only this message kind");
    trace_cmd->add_flag("--decode", trace_decode, "Render payloads as text, not hex");

    // rtm
    auto* rtm_cmd = app.add_subcommand("rtm", "Traceability matrix queries");
    rtm_cmd->require_subcommand(1);
    std::string rtm_campaign;
    auto* rtm_cov = rtm_cmd->add_subcommand("coverage", "Requirement coverage summary");
    rtm_cov->add_option("--campaign", rtm_campaign, "Campaign file")->required();
    auto* rtm_trace = rtm_cmd->add_subcommand("trace", "Trace an id through the matrix");
    std::string rtm_id;
    bool rtm_forward = false, rtm_back = false;
    rtm_trace->add_option("id", rtm_id, "Requirement, scenario, condition or case id")
        ->required();
    rtm_trace->add_option("--campaign", rtm_campaign, "Campaign file")->required();
    rtm_trace->add_flag("--forward", rtm_forward, "Requirements toward cases (default)");
    rtm_trace->add_flag("--back", rtm_back, "Cases toward requirements");
    rtm_trace->callback([&] {
        if (rtm_forward && rtm_back) {
            throw CLI::ValidationError("--forward and --back are mutually exclusive");
        }
    });

    // cycle
    auto* cycle_cmd = app.add_subcommand("cycle", "Test cycle lifecycle");
    cycle_cmd->require_subcommand(1);
    std::string cycle_campaign;
    int cycle_no = 0;
    auto* cyc_open = cycle_cmd->add_subcommand("open", "Open a cycle when entry criteria hold");
    double cycle_system_pass = -1.0;
    bool cycle_smoke = false, cycle_integrated = false;
    cyc_open->add_option("cycle", cycle_no, "Cycle number; omitted opens the next planned one");
    cyc_open->add_option("--campaign", cycle_campaign, "Campaign file")->required();
    cyc_open->add_option("--system-pass", cycle_system_pass,
                         "Measured system-test pass rate, 0..1");
    cyc_open->add_flag("--smoke-passed", cycle_smoke, "The smoke run passed");
    cyc_open->add_flag("--integrated", cycle_integrated,
                       "Every application is integrated in the environment");
    auto* cyc_record = cycle_cmd->add_subcommand("record", "Record a case verdict");
    std::string cycle_case, cycle_verdict;
    cyc_record->add_option("cycle", cycle_no, "Cycle number")->required();
    cyc_record->add_option("case", cycle_case, "Case id")->required();
    cyc_record->add_option("verdict", cycle_verdict, "Pass, Fail or Blocked")->required();
    cyc_record->add_option("--campaign", cycle_campaign, "Campaign file")->required();
    auto* cyc_close = cycle_cmd->add_subcommand("close", "Close a cycle once every case is resolved");
    int cycle_regression = -1;
    cyc_close->add_option("cycle", cycle_no, "Cycle number")->required();
    cyc_close->add_option("--regression-done", cycle_regression, "Set the regression flag")
        ->check(CLI::Range(0, 1));
    cyc_close->add_option("--campaign", cycle_campaign, "Campaign file")->required();
    auto* cyc_exit = cycle_cmd->add_subcommand("exit-check", "Evaluate the exit criteria");
    cyc_exit->add_option("--campaign", cycle_campaign, "Campaign file")->required();

    // defect
    auto* defect_cmd = app.add_subcommand("defect", "Defect filing and lifecycle");
    defect_cmd->require_subcommand(1);
    std::string defect_campaign;
    auto* def_file = defect_cmd->add_subcommand("file", "File a defect");
    DefectFlags defect_flags;
    def_file->add_option("--campaign", defect_campaign, "Campaign file")->required();
    def_file->add_option("--id", defect_flags.id, "Defect id; omitted assigns the next one");
    def_file->add_option("--env", defect_flags.env, "Environment")->required();
    def_file->add_option("--application", defect_flags.application, "Application")->required();
    def_file->add_option("--description", defect_flags.description, "What went wrong")
        ->required();
    def_file->add_option("--steps", defect_flags.steps, "Steps to reproduce")->required();
    def_file->add_option("--data", defect_flags.data, "Test data used")->required();
    def_file->add_option("--trace", defect_flags.trace, "Trace excerpt");
    def_file->add_option("--blocked", defect_flags.blocked, "Count of test cases blocked");
    def_file->add_option("--severity", defect_flags.severity, "S1, S2, S3 or S4");
    def_file->add_option("--justification", defect_flags.justification,
                         "Why the severity differs from the suggestion");
    auto* def_move = defect_cmd->add_subcommand("transition", "Move a defect between states");
    std::string defect_id, defect_to, defect_role, defect_note;
    def_move->add_option("id", defect_id, "Defect id")->required();
    def_move->add_option("to", defect_to, "Target state")->required();
    def_move->add_option("role", defect_role, "lead, developer or tester")->required();
    def_move->add_option("--note", defect_note, "History note");
    def_move->add_option("--campaign", defect_campaign, "Campaign file")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "Campaign status report");
    std::string report_campaign;
    std::string report_format = "text";
    report_cmd->add_option("--campaign", report_campaign, "Campaign file")->required();
    report_cmd->add_option("--format", report_format, "Report format")->check(format_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ITB_USAGE);
    }

    if (run_cmd->parsed()) {
        return cmd_run(run_cases, run_flags, run_format, run_jobs, run_trace_out);
    }
    if (smoke_cmd->parsed()) {
        return cmd_smoke(smoke_flags);
    }
    if (fault_cmd->parsed()) {
        return cmd_fault(fault_service, fault_state, fault_scenario);
    }
    if (trace_cmd->parsed()) {
        return cmd_trace(trace_file, trace_from, trace_to, trace_kind, trace_decode);
    }
    if (rtm_cov->parsed()) {
        return cmd_rtm_coverage(rtm_campaign);
    }
    if (rtm_trace->parsed()) {
        return cmd_rtm_trace(rtm_campaign, rtm_id, rtm_back);
    }
    if (cyc_open->parsed()) {
        return cmd_cycle_open(cycle_campaign, cycle_no, cycle_system_pass,
                              cycle_smoke ? 1 : -1, cycle_integrated ? 1 : -1);
    }
    if (cyc_record->parsed()) {
        return cmd_cycle_record(cycle_campaign, cycle_no, cycle_case, cycle_verdict);
    }
    if (cyc_close->parsed()) {
        return cmd_cycle_close(cycle_campaign, cycle_no, cycle_regression);
    }
    if (cyc_exit->parsed()) {
        return cmd_exit_check(cycle_campaign);
    }
    if (def_file->parsed()) {
        return cmd_defect_file(defect_campaign, defect_flags);
    }
    if (def_move->parsed()) {
        return cmd_defect_transition(defect_campaign, defect_id, defect_to, defect_role,
                                     defect_note);
    }
    if (report_cmd->parsed()) {
        return cmd_report(report_campaign, report_format);
    }
    return static_cast<int>(ITB_USAGE);
}
