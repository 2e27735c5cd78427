// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "itb.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "environment.hpp"
#include "stlc/campaign.hpp"
#include "testkit/executor.hpp"
#include "util/text.hpp"

using namespace itb;

struct itb_config {
    ScenarioOverrides overrides;
};

struct itb_run {
    bool is_smoke = false;
    testkit::CaseResult result;
    testkit::SmokeResult smoke;
};

struct itb_campaign {
    stlc::Campaign campaign;
};

namespace {

thread_local std::string tls_error;

itb_status to_status(Status s) {
    return static_cast<itb_status>(static_cast<int>(s));
}

char* dup_text(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) {
        std::memcpy(out, s.c_str(), s.size() + 1);
    }
    return out;
}

// Runs `fn`, funnelling exceptions into the status/last-error contract.
template <typename Fn>
itb_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        tls_error = e.what();
        return to_status(e.status());
    } catch (const std::exception& e) {
        tls_error = e.what();
        return ITB_USAGE;
    }
}

itb_status verdict_status(testkit::Verdict v) {
    switch (v) {
    case testkit::Verdict::Pass:
        return ITB_OK;
    case testkit::Verdict::Fail:
        return ITB_FAIL;
    case testkit::Verdict::Blocked:
        return ITB_ABSENT;
    }
    return ITB_ABSENT;
}

itb_status require(bool ok, const char* why) {
    if (!ok) {
        tls_error = why;
        return ITB_USAGE;
    }
    return ITB_OK;
}

std::string smoke_text(const testkit::SmokeResult& r) {
    if (r.pass) {
        return "smoke pass\n";
    }
    return "smoke fail at " + r.failed_boundary + ": " + r.detail + "\n";
}

}  // namespace

extern "C" {

const char* itb_version(void) {
    return "0.1.0";
}

const char* itb_last_error(void) {
    return tls_error.c_str();
}

void itb_text_free(char* text) {
    std::free(text);
}

itb_config* itb_config_new(void) {
    return new itb_config();
}

void itb_config_free(itb_config* config) {
    delete config;
}

itb_status itb_config_set_clock(itb_config* config, const char* iso8601) {
    if (auto s = require(config && iso8601, "null argument")) return s;
    return guarded([&] {
        domain::parse_datetime(iso8601);  // validate eagerly
        config->overrides.clock_start = iso8601;
        return ITB_OK;
    });
}

itb_status itb_config_set_fault(itb_config* config, const char* service,
                                const char* state) {
    if (auto s = require(config && service && state, "null argument")) return s;
    return guarded([&] {
        netsim::ServiceId svc = netsim::parse_service(service);
        netsim::Availability a = netsim::parse_availability(state);
        if (a == netsim::Availability::Offline && svc != netsim::ServiceId::FRAUD) {
            throw Error(Status::Usage,
                        "only the fraud engine can be OFFLINE; other services are UP or DOWN");
        }
        config->overrides.faults.emplace_back(svc, a);
        return ITB_OK;
    });
}

itb_status itb_config_set_stock(itb_config* config, const char* item, int64_t qty) {
    if (auto s = require(config && item, "null argument")) return s;
    return guarded([&] {
        if (qty < 0) {
            throw Error(Status::Usage, "stock cannot be negative");
        }
        config->overrides.stock.emplace_back(item, qty);
        return ITB_OK;
    });
}

itb_status itb_config_set_price(itb_config* config, const char* item, int64_t cents,
                                const char* currency) {
    if (auto s = require(config && item, "null argument")) return s;
    return guarded([&] {
        config->overrides.prices.emplace_back(
            item, domain::make_money(cents, currency ? currency : "USD"));
        return ITB_OK;
    });
}

itb_status itb_config_add_fraud_ip(itb_config* config, const char* ip) {
    if (auto s = require(config && ip, "null argument")) return s;
    return guarded([&] {
        if (!text::is_ipv4(ip)) {
            throw Error(Status::Usage, std::string("bad IPv4 '") + ip + "'");
        }
        config->overrides.fraud_ips.push_back(ip);
        return ITB_OK;
    });
}

itb_status itb_config_set_session_ip(itb_config* config, const char* ip) {
    if (auto s = require(config && ip, "null argument")) return s;
    return guarded([&] {
        if (!text::is_ipv4(ip)) {
            throw Error(Status::Usage, std::string("bad IPv4 '") + ip + "'");
        }
        config->overrides.session_ip = ip;
        return ITB_OK;
    });
}

itb_status itb_config_set_ship_zip(itb_config* config, const char* zip) {
    if (auto s = require(config && zip, "null argument")) return s;
    config->overrides.ship_zip = zip;
    return ITB_OK;
}

itb_status itb_config_set_bill_zip(itb_config* config, const char* zip) {
    if (auto s = require(config && zip, "null argument")) return s;
    config->overrides.bill_zip = zip;
    return ITB_OK;
}

itb_status itb_config_add_avs_zip(itb_config* config, const char* zip) {
    if (auto s = require(config && zip, "null argument")) return s;
    config->overrides.avs_zips.push_back(zip);
    return ITB_OK;
}

itb_status itb_config_add_bin(itb_config* config, const char* network,
                              const char* prefix) {
    if (auto s = require(config && network && prefix, "null argument")) return s;
    return guarded([&] {
        domain::CardNetwork net = domain::parse_network(network);
        // Probe table so a bad prefix is refused here, not at environment boot.
        domain::BinTable probe;
        probe.add_prefix(net, prefix);
        config->overrides.extra_bins.emplace_back(net, prefix);
        return ITB_OK;
    });
}

itb_status itb_config_set_tax_rate_bp(itb_config* config, int64_t bp) {
    if (auto s = require(config != nullptr, "null argument")) return s;
    return guarded([&] {
        if (bp < 0 || bp > 10000) {
            throw Error(Status::Usage, "tax_rate_bp must be within 0..10000");
        }
        config->overrides.tax_rate_bp = bp;
        return ITB_OK;
    });
}

itb_status itb_config_load_file(itb_config* config, const char* path) {
    if (auto s = require(config && path, "null argument")) return s;
    return guarded([&] {
        ScenarioOverrides file_overrides = load_scenario_file(path);
        // Keep call-order precedence: the file lands as if each of its
        // entries had been set through the API right now.
        ScenarioOverrides& o = config->overrides;
        if (file_overrides.clock_start) o.clock_start = file_overrides.clock_start;
        for (const auto& f : file_overrides.faults) o.faults.push_back(f);
        for (const auto& st : file_overrides.stock) o.stock.push_back(st);
        for (const auto& p : file_overrides.prices) o.prices.push_back(p);
        for (const auto& ip : file_overrides.fraud_ips) o.fraud_ips.push_back(ip);
        if (file_overrides.session_ip) o.session_ip = file_overrides.session_ip;
        if (file_overrides.ship_zip) o.ship_zip = file_overrides.ship_zip;
        if (file_overrides.bill_zip) o.bill_zip = file_overrides.bill_zip;
        for (const auto& z : file_overrides.avs_zips) o.avs_zips.push_back(z);
        for (const auto& b : file_overrides.extra_bins) o.extra_bins.push_back(b);
        if (file_overrides.tax_rate_bp) o.tax_rate_bp = file_overrides.tax_rate_bp;
        return ITB_OK;
    });
}

itb_status itb_run_case_file(const char* case_path, const itb_config* config,
                             itb_run** out) {
    if (auto s = require(case_path && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        testkit::TestCase tc = testkit::load_case(case_path);
        std::vector<ScenarioOverrides> layers;
        if (config) {
            layers.push_back(config->overrides);
        }
        auto run = new itb_run();
        run->result = testkit::run_case(tc, layers);
        *out = run;
        return verdict_status(run->result.verdict);
    });
}

itb_status itb_run_smoke(const itb_config* config, itb_run** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        ScenarioConfig resolved;
        if (config) {
            config->overrides.apply(resolved);
        }
        auto run = new itb_run();
        run->is_smoke = true;
        run->smoke = testkit::run_smoke(resolved);
        *out = run;
        if (run->smoke.pass) {
            return ITB_OK;
        }
        if (run->smoke.failed_boundary == "environment") {
            tls_error = run->smoke.detail;
            return ITB_ABSENT;
        }
        tls_error = smoke_text(run->smoke);
        return ITB_FAIL;
    });
}

itb_status itb_run_verdict(const itb_run* run) {
    if (auto s = require(run != nullptr, "null argument")) return s;
    if (run->is_smoke) {
        return run->smoke.pass
                   ? ITB_OK
                   : (run->smoke.failed_boundary == "environment" ? ITB_ABSENT
                                                                  : ITB_FAIL);
    }
    return verdict_status(run->result.verdict);
}

char* itb_run_render_text(const itb_run* run) {
    if (!run) {
        return nullptr;
    }
    return dup_text(run->is_smoke ? smoke_text(run->smoke)
                                  : testkit::render_text(run->result));
}

char* itb_run_render_structured(const itb_run* run) {
    if (!run) {
        return nullptr;
    }
    if (run->is_smoke) {
        std::ostringstream out;
        out << "{\"type\":\"smoke\",\"pass\":" << (run->smoke.pass ? "true" : "false");
        if (!run->smoke.pass) {
            out << ",\"boundary\":\"" << run->smoke.failed_boundary << "\"";
        }
        out << "}\n";
        return dup_text(out.str());
    }
    return dup_text(testkit::render_structured(run->result));
}

char* itb_run_trace_export(const itb_run* run) {
    if (!run || run->is_smoke) {
        return nullptr;
    }
    return dup_text(run->result.trace_export);
}

void itb_run_free(itb_run* run) {
    delete run;
}

itb_status itb_trace_filter(const char* export_text, const char* from, const char* to,
                            const char* kind, int decode, char** out) {
    if (auto s = require(export_text && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        std::optional<netsim::ServiceId> want_from;
        std::optional<netsim::ServiceId> want_to;
        std::string want_kind = kind ? kind : "";
        if (from && *from) {
            want_from = netsim::parse_service(from);
        }
        if (to && *to) {
            want_to = netsim::parse_service(to);
        }
        std::ostringstream result;
        int line_no = 0;
        for (const auto& line : text::split(export_text, '\n')) {
            ++line_no;
            if (text::trim(line).empty()) {
                continue;
            }
            auto fields = text::split(line, '|');
            if (fields.size() != 6) {
                throw Error(Status::Usage,
                            "trace line " + std::to_string(line_no) + " is malformed");
            }
            netsim::ServiceId f = netsim::parse_service(fields[1]);
            netsim::ServiceId t = netsim::parse_service(fields[2]);
            if (want_from && f != *want_from) continue;
            if (want_to && t != *want_to) continue;
            if (!want_kind.empty() && fields[3] != want_kind) continue;
            if (!decode) {
                result << line << "\n";
                continue;
            }
            std::string payload = text::hex_decode(fields[4]);
            std::string reply =
                fields[5] == "ERR" ? "ERR" : text::hex_decode(fields[5]);
            result << fields[0] << "|" << fields[1] << "|" << fields[2] << "|"
                   << fields[3] << "|" << payload << "|" << reply << "\n";
        }
        *out = dup_text(result.str());
        return ITB_OK;
    });
}

itb_status itb_fault_check(const char* service, const char* state) {
    if (auto s = require(service && state, "null argument")) return s;
    return guarded([&] {
        netsim::ServiceId svc = netsim::parse_service(service);
        netsim::Availability a = netsim::parse_availability(state);
        if (a == netsim::Availability::Offline && svc != netsim::ServiceId::FRAUD) {
            throw Error(Status::Usage,
                        "only the fraud engine can be OFFLINE; other services are UP or DOWN");
        }
        return ITB_OK;
    });
}

itb_status itb_campaign_open(const char* path, itb_campaign** out) {
    if (auto s = require(path && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        auto c = new itb_campaign();
        try {
            c->campaign = stlc::load_campaign(path);
        } catch (...) {
            delete c;
            throw;
        }
        *out = c;
        return ITB_OK;
    });
}

itb_status itb_campaign_save(const itb_campaign* campaign, const char* path) {
    if (auto s = require(campaign && path, "null argument")) return s;
    return guarded([&] {
        stlc::save_campaign(campaign->campaign, path);
        return ITB_OK;
    });
}

void itb_campaign_free(itb_campaign* campaign) {
    delete campaign;
}

itb_status itb_campaign_rtm_trace(const itb_campaign* campaign, const char* id,
                                  int backward, char** out) {
    if (auto s = require(campaign && id && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        auto ids = backward ? stlc::rtm_back(campaign->campaign, id)
                            : stlc::rtm_forward(campaign->campaign, id);
        std::string joined = text::join(ids, "\n");
        if (!joined.empty()) {
            joined += "\n";
        }
        *out = dup_text(joined);
        return ITB_OK;
    });
}

itb_status itb_campaign_rtm_coverage(const itb_campaign* campaign, char** out) {
    if (auto s = require(campaign && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        stlc::Coverage cov = stlc::rtm_coverage(campaign->campaign);
        std::ostringstream text_out;
        text_out << "in-scope " << cov.covered.size() + cov.uncovered.size()
                 << "\ncovered " << cov.covered.size() << "\nuncovered "
                 << cov.uncovered.size();
        for (const auto& id : cov.uncovered) {
            text_out << "\n  " << id;
        }
        text_out << "\nout-of-scope " << cov.out_scope.size() << "\nrate ";
        std::ostringstream rate;
        rate.setf(std::ios::fixed);
        rate.precision(2);
        rate << cov.rate;
        text_out << rate.str() << "\n";
        *out = dup_text(text_out.str());
        return ITB_OK;
    });
}

itb_status itb_campaign_cycle_entry(itb_campaign* campaign, int cycle_no,
                                    double system_pass, int smoke, int integrated) {
    if (auto s = require(campaign != nullptr, "null argument")) return s;
    return guarded([&] {
        stlc::Cycle* target = nullptr;
        for (auto& cy : campaign->campaign.cycles) {
            if (cycle_no > 0 ? cy.no == cycle_no
                             : cy.state == stlc::CycleState::Planned) {
                target = &cy;
                break;
            }
        }
        if (!target) {
            throw Error(Status::Absent,
                        cycle_no > 0
                            ? "no cycle " + std::to_string(cycle_no)
                            : std::string("no planned cycle left"));
        }
        if (system_pass >= 0.0) {
            if (system_pass > 1.0) {
                throw Error(Status::Usage, "system pass rate wants 0..1");
            }
            target->entry.system_pass = system_pass;
        }
        if (smoke >= 0) {
            target->entry.smoke = smoke != 0;
        }
        if (integrated >= 0) {
            target->entry.integrated = integrated != 0;
        }
        return ITB_OK;
    });
}

itb_status itb_campaign_cycle_open(itb_campaign* campaign, int cycle_no, char** report) {
    if (auto s = require(campaign != nullptr, "null argument")) return s;
    if (report) {
        *report = nullptr;
    }
    return guarded([&] {
        std::optional<int> no;
        if (cycle_no > 0) {
            no = cycle_no;
        }
        stlc::OpenResult r = stlc::cycle_open(campaign->campaign, no);
        std::ostringstream out;
        if (r.opened) {
            out << "opened cycle " << r.cycle_no << "\n";
        } else {
            out << "cycle " << r.cycle_no << " refused:\n";
            for (const auto& why : r.refusals) {
                out << "  - " << why << "\n";
            }
        }
        if (report) {
            *report = dup_text(out.str());
        }
        if (!r.opened) {
            tls_error = "entry criteria not met for cycle " + std::to_string(r.cycle_no);
            return ITB_FAIL;
        }
        return ITB_OK;
    });
}

itb_status itb_campaign_cycle_record(itb_campaign* campaign, int cycle_no,
                                     const char* case_id, const char* verdict) {
    if (auto s = require(campaign && case_id && verdict, "null argument")) return s;
    return guarded([&] {
        std::string v = verdict;
        testkit::Verdict parsed;
        if (v == "Pass") {
            parsed = testkit::Verdict::Pass;
        } else if (v == "Fail") {
            parsed = testkit::Verdict::Fail;
        } else if (v == "Blocked") {
            parsed = testkit::Verdict::Blocked;
        } else {
            throw Error(Status::Usage, "verdict wants Pass, Fail or Blocked");
        }
        stlc::cycle_record(campaign->campaign, cycle_no, case_id, parsed);
        return ITB_OK;
    });
}

itb_status itb_campaign_cycle_close(itb_campaign* campaign, int cycle_no,
                                    int regression_done) {
    if (auto s = require(campaign != nullptr, "null argument")) return s;
    return guarded([&] {
        std::optional<bool> flag;
        if (regression_done == 0) {
            flag = false;
        } else if (regression_done > 0) {
            flag = true;
        }
        stlc::cycle_close(campaign->campaign, cycle_no, flag);
        return ITB_OK;
    });
}

itb_status itb_campaign_exit_check(const itb_campaign* campaign, char** report,
                                   int* done) {
    if (auto s = require(campaign != nullptr, "null argument")) return s;
    if (report) {
        *report = nullptr;
    }
    return guarded([&] {
        stlc::ExitReport r = stlc::exit_check(campaign->campaign);
        std::ostringstream out;
        out << "exit " << (r.done ? "ready" : "not ready") << "\n";
        for (const auto& c : r.criteria) {
            out << "  [" << (c.pass ? "ok" : "no") << "] " << c.name << ": " << c.detail
                << "\n";
        }
        if (report) {
            *report = dup_text(out.str());
        }
        if (done) {
            *done = r.done ? 1 : 0;
        }
        if (!r.done) {
            tls_error = "exit criteria not met";
            return ITB_FAIL;
        }
        return ITB_OK;
    });
}

itb_status itb_campaign_defect_file(itb_campaign* campaign, const char* fields_text,
                                    char** defect_id) {
    if (auto s = require(campaign && fields_text, "null argument")) return s;
    if (defect_id) {
        *defect_id = nullptr;
    }
    return guarded([&] {
        stlc::DefectDraft draft;
        for (const auto& e : text::parse_entries(fields_text, "defect")) {
            if (e.key == "id") {
                draft.id = e.value;
            } else if (e.key == "env") {
                draft.env = e.value;
            } else if (e.key == "application") {
                draft.application = e.value;
            } else if (e.key == "description") {
                draft.description = e.value;
            } else if (e.key == "steps") {
                draft.steps = e.value;
            } else if (e.key == "data") {
                draft.data = e.value;
            } else if (e.key == "trace") {
                draft.trace = e.value;
            } else if (e.key == "blocked") {
                draft.blocked = std::stoll(e.value);
            } else if (e.key == "severity") {
                draft.severity = testkit::parse_severity(e.value);
            } else if (e.key == "severity_justification") {
                draft.severity_justification = e.value;
            } else {
                throw Error(Status::Usage, "unknown defect field '" + e.key + "'");
            }
        }
        std::string id = stlc::defect_file(campaign->campaign, draft);
        if (defect_id) {
            *defect_id = dup_text(id);
        }
        return ITB_OK;
    });
}

itb_status itb_campaign_defect_transition(itb_campaign* campaign, const char* defect_id,
                                          const char* to_state, const char* role,
                                          const char* note) {
    if (auto s = require(campaign && defect_id && to_state && role, "null argument")) {
        return s;
    }
    return guarded([&] {
        stlc::defect_transition(campaign->campaign, defect_id,
                                stlc::parse_defect_state(to_state), role,
                                note ? note : "");
        return ITB_OK;
    });
}

itb_status itb_campaign_report(const itb_campaign* campaign, int structured,
                               char** out) {
    if (auto s = require(campaign && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        *out = dup_text(structured ? stlc::report_structured(campaign->campaign)
                                   : stlc::report_text(campaign->campaign));
        return ITB_OK;
    });
}

}  // extern "C"
