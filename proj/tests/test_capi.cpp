// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "itb.h"

namespace {

// Collects a caller-owned char* into a std::string and frees it.
std::string take(char* text) {
    if (!text) {
        return "";
    }
    std::string out(text);
    itb_text_free(text);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kCaseText = R"([meta]
id = CAPI-1
objective = Browse and check availability through the shared library

[prereq]
stock = ITEM-1 4
price = ITEM-1 1000 USD

[step 1]
desc = Browse the item
action = browse ITEM-1 outcome=found

[step 2]
desc = Availability comes from order management
action = check_availability ITEM-1 outcome=available
expect.trace_request = from=OLS to=OMS kind=INV_CHECK field=item equals=ITEM-1
)";

struct ConfigGuard {
    itb_config* config = itb_config_new();
    ~ConfigGuard() { itb_config_free(config); }
};

struct CampaignGuard {
    itb_campaign* campaign = nullptr;
    ~CampaignGuard() { itb_campaign_free(campaign); }
};

}  // namespace

TEST_CASE("the library reports a version") {
    std::string v = itb_version();
    CHECK_FALSE(v.empty());
    CHECK(v.find('.') != std::string::npos);
}

TEST_CASE("null arguments are refused with a message") {
    CHECK(itb_config_set_clock(nullptr, "2012-01-01") == ITB_USAGE);
    CHECK(std::string(itb_last_error()).find("null") != std::string::npos);
    itb_run* run = nullptr;
    CHECK(itb_run_case_file(nullptr, nullptr, &run) == ITB_USAGE);
    CHECK(run == nullptr);
    CHECK(itb_trace_filter(nullptr, nullptr, nullptr, nullptr, 0, nullptr) == ITB_USAGE);
}

TEST_CASE("config setters validate their input") {
    ConfigGuard g;
    CHECK(itb_config_set_clock(g.config, "2012-01-01T00:00:00") == ITB_OK);
    CHECK(itb_config_set_clock(g.config, "yesterday") == ITB_USAGE);
    CHECK(itb_config_set_fault(g.config, "FRAUD", "OFFLINE") == ITB_OK);
    CHECK(itb_config_set_fault(g.config, "OMS", "OFFLINE") == ITB_USAGE);
    CHECK(itb_config_set_fault(g.config, "NOPE", "DOWN") == ITB_USAGE);
    CHECK(itb_config_set_stock(g.config, "ITEM-1", -1) == ITB_USAGE);
    CHECK(itb_config_set_price(g.config, "ITEM-1", 100, "usd") == ITB_USAGE);
    CHECK(itb_config_add_fraud_ip(g.config, "not-an-ip") == ITB_USAGE);
    CHECK(itb_config_add_fraud_ip(g.config, "198.51.100.9") == ITB_OK);
    CHECK(itb_config_set_session_ip(g.config, "203.0.113.300") == ITB_USAGE);
    CHECK(itb_config_set_tax_rate_bp(g.config, 10001) == ITB_USAGE);
    CHECK(itb_config_set_tax_rate_bp(g.config, 0) == ITB_OK);
    CHECK(itb_config_add_bin(g.config, "VISA", "42137") == ITB_USAGE);
    CHECK(itb_config_add_bin(g.config, "VISA", "4213") == ITB_OK);
}

TEST_CASE("a passing case runs through the shared library") {
    auto path = temp_file("itb_capi_pass.case", kCaseText);
    itb_run* run = nullptr;
    REQUIRE(itb_run_case_file(path.string().c_str(), nullptr, &run) == ITB_OK);
    REQUIRE(run != nullptr);
    CHECK(itb_run_verdict(run) == ITB_OK);

    std::string text = take(itb_run_render_text(run));
    CHECK(text.find("case CAPI-1") != std::string::npos);
    CHECK(text.find("verdict Pass") != std::string::npos);

    std::string structured = take(itb_run_render_structured(run));
    CHECK(structured.find("\"type\":\"case\"") != std::string::npos);

    std::string trace = take(itb_run_trace_export(run));
    CHECK(trace.find("INV_CHECK") != std::string::npos);
    itb_run_free(run);
}

TEST_CASE("config layers override the case prereq") {
    // Zeroing the stock flips the declared outcome to a failure.
    auto path = temp_file("itb_capi_stock.case", kCaseText);
    ConfigGuard g;
    REQUIRE(itb_config_set_stock(g.config, "ITEM-1", 0) == ITB_OK);
    itb_run* run = nullptr;
    CHECK(itb_run_case_file(path.string().c_str(), g.config, &run) == ITB_FAIL);
    REQUIRE(run != nullptr);
    CHECK(itb_run_verdict(run) == ITB_FAIL);
    std::string text = take(itb_run_render_text(run));
    CHECK(text.find("verdict Fail") != std::string::npos);
    itb_run_free(run);
}

TEST_CASE("a blocked case still yields a renderable run") {
    std::string blocked_case = std::string(kCaseText) + "\n[step 3]\n"
                                                        "desc = unknown item blocks\n"
                                                        "action = cart_checkout GHOST 1\n";
    auto path = temp_file("itb_capi_blocked.case", blocked_case);
    itb_run* run = nullptr;
    CHECK(itb_run_case_file(path.string().c_str(), nullptr, &run) == ITB_ABSENT);
    REQUIRE(run != nullptr);
    std::string text = take(itb_run_render_text(run));
    CHECK(text.find("verdict Blocked") != std::string::npos);
    itb_run_free(run);
}

TEST_CASE("a missing case file is absent, a malformed one is usage") {
    itb_run* run = nullptr;
    CHECK(itb_run_case_file("/no/such/file.case", nullptr, &run) == ITB_ABSENT);
    CHECK(run == nullptr);
    CHECK(std::string(itb_last_error()).find("cannot open") != std::string::npos);

    auto bad = temp_file("itb_capi_bad.case", "[meta]\nid = X\n");
    CHECK(itb_run_case_file(bad.string().c_str(), nullptr, &run) == ITB_USAGE);
    CHECK(run == nullptr);
}

TEST_CASE("smoke runs pass by default and fail under faults") {
    itb_run* run = nullptr;
    REQUIRE(itb_run_smoke(nullptr, &run) == ITB_OK);
    REQUIRE(run != nullptr);
    CHECK(take(itb_run_render_text(run)).find("smoke pass") != std::string::npos);
    CHECK(itb_run_trace_export(run) == nullptr);
    itb_run_free(run);

    ConfigGuard g;
    REQUIRE(itb_config_set_fault(g.config, "OMS", "DOWN") == ITB_OK);
    CHECK(itb_run_smoke(g.config, &run) == ITB_FAIL);
    REQUIRE(run != nullptr);
    std::string text = take(itb_run_render_text(run));
    CHECK(text.find("smoke fail at availability") != std::string::npos);
    itb_run_free(run);
}

TEST_CASE("trace filtering narrows and decodes a persisted export") {
    auto path = temp_file("itb_capi_trace.case", kCaseText);
    itb_run* run = nullptr;
    REQUIRE(itb_run_case_file(path.string().c_str(), nullptr, &run) == ITB_OK);
    std::string full = take(itb_run_trace_export(run));
    itb_run_free(run);

    char* out = nullptr;
    REQUIRE(itb_trace_filter(full.c_str(), "OLS", "OMS", "INV_CHECK", 0, &out) == ITB_OK);
    std::string hex_lines = take(out);
    CHECK(hex_lines.find("OLS|OMS|INV_CHECK") != std::string::npos);
    CHECK(hex_lines.find("item=ITEM-1") == std::string::npos);

    REQUIRE(itb_trace_filter(full.c_str(), "", "", "INV_CHECK", 1, &out) == ITB_OK);
    std::string decoded = take(out);
    CHECK(decoded.find("item=ITEM-1") != std::string::npos);

    REQUIRE(itb_trace_filter(full.c_str(), "", "", "PAY", 0, &out) == ITB_OK);
    CHECK(take(out).empty());

    CHECK(itb_trace_filter("not|a|trace", "", "", "", 0, &out) == ITB_USAGE);
    CHECK(itb_trace_filter(full.c_str(), "NOPE", "", "", 0, &out) == ITB_USAGE);
}

TEST_CASE("fault pairs are validated") {
    CHECK(itb_fault_check("FRAUD", "OFFLINE") == ITB_OK);
    CHECK(itb_fault_check("WEBSVC", "DOWN") == ITB_OK);
    CHECK(itb_fault_check("OMS", "UP") == ITB_OK);
    CHECK(itb_fault_check("OMS", "OFFLINE") == ITB_USAGE);
    CHECK(std::string(itb_last_error()).find("fraud engine") != std::string::npos);
    CHECK(itb_fault_check("NOPE", "DOWN") == ITB_USAGE);
    CHECK(itb_fault_check("OMS", "SLOW") == ITB_USAGE);
}

TEST_CASE("a campaign walks cycle four from refusal to exit") {
    auto fixture = slurp(std::filesystem::path(ITB_DATA_DIR) / "campaign.txt");
    auto path = temp_file("itb_capi_campaign.txt", fixture);

    CampaignGuard g;
    REQUIRE(itb_campaign_open(path.string().c_str(), &g.campaign) == ITB_OK);

    char* out = nullptr;
    REQUIRE(itb_campaign_rtm_trace(g.campaign, "REQ-PAY-01", 0, &out) == ITB_OK);
    CHECK(take(out) == "EG-GATEWAY-DOWN\nEG-PAYMENT-RESUBMIT\n");
    REQUIRE(itb_campaign_rtm_trace(g.campaign, "EG-TAX-DOWN", 1, &out) == ITB_OK);
    CHECK(take(out) == "REQ-AUDIT-01\n");
    CHECK(itb_campaign_rtm_trace(g.campaign, "REQ-NOPE", 0, &out) == ITB_ABSENT);

    REQUIRE(itb_campaign_rtm_coverage(g.campaign, &out) == ITB_OK);
    std::string coverage = take(out);
    CHECK(coverage.find("rate 0.80") != std::string::npos);
    CHECK(coverage.find("REQ-RPT-01") != std::string::npos);

    // Cycle 4 ships with no entry evidence, so opening is refused.
    CHECK(itb_campaign_cycle_open(g.campaign, 4, &out) == ITB_FAIL);
    std::string refused = take(out);
    CHECK(refused.find("cycle 4 refused") != std::string::npos);
    CHECK(refused.find("smoke test has not passed") != std::string::npos);

    REQUIRE(itb_campaign_cycle_entry(g.campaign, 0, 0.95, 1, 1) == ITB_OK);
    REQUIRE(itb_campaign_cycle_open(g.campaign, 0, &out) == ITB_OK);
    CHECK(take(out) == "opened cycle 4\n");

    CHECK(itb_campaign_cycle_record(g.campaign, 4, "E2E-OFFLINE-CANCEL", "Maybe") ==
          ITB_USAGE);
    REQUIRE(itb_campaign_cycle_record(g.campaign, 4, "E2E-OFFLINE-CANCEL", "Pass") ==
            ITB_OK);
    CHECK(itb_campaign_cycle_close(g.campaign, 4, -1) == ITB_SEQUENCE);
    REQUIRE(itb_campaign_cycle_record(g.campaign, 4, "EG-GATEWAY-DOWN", "Pass") ==
            ITB_OK);
    REQUIRE(itb_campaign_cycle_close(g.campaign, 4, -1) == ITB_OK);

    int done = 0;
    REQUIRE(itb_campaign_exit_check(g.campaign, &out, &done) == ITB_OK);
    CHECK(done == 1);
    CHECK(take(out).find("exit ready") != std::string::npos);

    // Round-trip through disk keeps the recorded state.
    auto saved = std::filesystem::temp_directory_path() / "itb_capi_campaign_out.txt";
    REQUIRE(itb_campaign_save(g.campaign, saved.string().c_str()) == ITB_OK);
    CampaignGuard reopened;
    REQUIRE(itb_campaign_open(saved.string().c_str(), &reopened.campaign) == ITB_OK);
    REQUIRE(itb_campaign_exit_check(reopened.campaign, &out, &done) == ITB_OK);
    CHECK(done == 1);
}

TEST_CASE("defects file and move through the shared library") {
    auto fixture = slurp(std::filesystem::path(ITB_DATA_DIR) / "campaign.txt");
    auto path = temp_file("itb_capi_defects.txt", fixture);
    CampaignGuard g;
    REQUIRE(itb_campaign_open(path.string().c_str(), &g.campaign) == ITB_OK);

    char* id_text = nullptr;
    std::string fields = "env = INT2\napplication = OMS\n"
                         "description = duplicate feed accepted\n"
                         "steps = replay the feed\ndata = order W000000001\n"
                         "blocked = 2\n";
    REQUIRE(itb_campaign_defect_file(g.campaign, fields.c_str(), &id_text) == ITB_OK);
    std::string id = take(id_text);
    CHECK(id == "D-002");

    CHECK(itb_campaign_defect_transition(g.campaign, id.c_str(), "Assigned", "tester",
                                         "") == ITB_SEQUENCE);
    CHECK(itb_campaign_defect_transition(g.campaign, id.c_str(), "Assigned", "lead",
                                         "triage") == ITB_OK);
    CHECK(itb_campaign_defect_transition(g.campaign, "D-404", "Assigned", "lead", "") ==
          ITB_ABSENT);

    std::string bad_fields = "env = INT2\n";
    CHECK(itb_campaign_defect_file(g.campaign, bad_fields.c_str(), &id_text) ==
          ITB_USAGE);

    char* report = nullptr;
    REQUIRE(itb_campaign_report(g.campaign, 0, &report) == ITB_OK);
    CHECK(take(report).find("coverage") != std::string::npos);
    REQUIRE(itb_campaign_report(g.campaign, 1, &report) == ITB_OK);
    CHECK(take(report).find("\"coverage\"") != std::string::npos);
}

TEST_CASE("a missing campaign file is absent") {
    CampaignGuard g;
    CHECK(itb_campaign_open("/no/such/campaign.txt", &g.campaign) == ITB_ABSENT);
    CHECK(g.campaign == nullptr);
}
