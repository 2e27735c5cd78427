// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <iomanip>
#include <sstream>

#include "stlc/campaign.hpp"
#include "util/text.hpp"

namespace itb::stlc {

namespace {

[[noreturn]] void fail_at(const std::string& origin, int line, const std::string& why) {
    std::ostringstream out;
    out << origin << ":" << line << ": " << why;
    throw Error(Status::Usage, out.str());
}

bool parse_bool(const std::string& origin, const text::Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail_at(origin, e.line, "'" + e.key + "' wants true or false");
}

double parse_rate(const std::string& origin, const text::Entry& e) {
    try {
        size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size() || v < 0.0 || v > 1.0) {
            fail_at(origin, e.line, "'" + e.key + "' wants a rate within 0..1");
        }
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(origin, e.line, "'" + e.key + "' wants a rate within 0..1");
    }
}

int64_t parse_int_entry(const std::string& origin, const text::Entry& e) {
    try {
        size_t pos = 0;
        int64_t v = std::stoll(e.value, &pos);
        if (pos != e.value.size()) {
            fail_at(origin, e.line, "'" + e.key + "' wants an integer");
        }
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail_at(origin, e.line, "'" + e.key + "' wants an integer");
    }
}

Verdict parse_verdict_entry(const std::string& origin, const text::Entry& e) {
    if (e.value == "Pass") return Verdict::Pass;
    if (e.value == "Fail") return Verdict::Fail;
    if (e.value == "Blocked") return Verdict::Blocked;
    fail_at(origin, e.line, "result wants Pass, Fail or Blocked");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

// Two-or-more decimals, trailing zeros beyond that trimmed, so saved
// rates read naturally and round-trip.
std::string format_rate_field(double rate) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << rate;
    std::string s = out.str();
    while (s.size() > 0 && s.back() == '0' && s[s.size() - 2] != '.' &&
           s.find('.') + 2 < s.size() - 1) {
        s.pop_back();
    }
    return s;
}

void parse_campaign_section(const text::Section& s, const std::string& origin,
                            Campaign& c) {
    for (const auto& e : s.entries) {
        if (e.key == "regression_done") {
            c.regression_done = parse_bool(origin, e);
        } else if (e.key == "entry_floor") {
            c.entry_floor = parse_rate(origin, e);
        } else if (e.key == "exit_rate") {
            c.exit_rate = parse_rate(origin, e);
        } else {
            fail_at(origin, e.line, "unknown campaign key '" + e.key + "'");
        }
    }
}

void parse_requirement_section(const text::Section& s, const std::string& origin,
                               Campaign& c) {
    Requirement r;
    for (const auto& e : s.entries) {
        if (e.key == "id") {
            r.id = e.value;
        } else if (e.key == "source") {
            try {
                r.source = parse_req_source(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else if (e.key == "text") {
            r.text = e.value;
        } else if (e.key == "in_scope") {
            r.in_scope = parse_bool(origin, e);
        } else {
            fail_at(origin, e.line, "unknown requirement key '" + e.key + "'");
        }
    }
    if (r.id.empty()) {
        fail_at(origin, s.line, "requirement is missing 'id'");
    }
    for (const auto& existing : c.requirements) {
        if (existing.id == r.id) {
            fail_at(origin, s.line, "duplicate requirement " + r.id);
        }
    }
    c.requirements.push_back(std::move(r));
}

void parse_link_section(const text::Section& s, const std::string& origin, Campaign& c) {
    RtmChain ch;
    for (const auto& e : s.entries) {
        if (e.key == "req") {
            ch.req = e.value;
        } else if (e.key == "scenario") {
            ch.scenario = e.value;
        } else if (e.key == "condition") {
            ch.condition = e.value;
        } else if (e.key == "case") {
            ch.case_id = e.value;
        } else {
            fail_at(origin, e.line, "unknown link key '" + e.key + "'");
        }
    }
    if (ch.req.empty() || ch.scenario.empty() || ch.condition.empty() ||
        ch.case_id.empty()) {
        fail_at(origin, s.line, "link wants req, scenario, condition and case");
    }
    c.chains.push_back(std::move(ch));
}

void parse_cycle_section(const text::Section& s, const std::string& origin,
                         Campaign& c) {
    Cycle cy;
    bool saw_no = false;
    for (const auto& e : s.entries) {
        if (e.key == "no") {
            cy.no = static_cast<int>(parse_int_entry(origin, e));
            saw_no = true;
        } else if (e.key == "state") {
            try {
                cy.state = parse_cycle_state(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else if (e.key == "cases") {
            cy.cases = split_ws(e.value);
        } else if (e.key == "entry.system_pass") {
            cy.entry.system_pass = parse_rate(origin, e);
        } else if (e.key == "entry.smoke") {
            cy.entry.smoke = parse_bool(origin, e);
        } else if (e.key == "entry.integrated") {
            cy.entry.integrated = parse_bool(origin, e);
        } else if (e.key.rfind("result.", 0) == 0) {
            cy.results[e.key.substr(7)] = parse_verdict_entry(origin, e);
        } else {
            fail_at(origin, e.line, "unknown cycle key '" + e.key + "'");
        }
    }
    if (!saw_no) {
        fail_at(origin, s.line, "cycle is missing 'no'");
    }
    for (const auto& existing : c.cycles) {
        if (existing.no == cy.no) {
            fail_at(origin, s.line, "duplicate cycle " + std::to_string(cy.no));
        }
    }
    for (const auto& [case_id, verdict] : cy.results) {
        (void)verdict;
        bool listed = false;
        for (const auto& id : cy.cases) {
            if (id == case_id) {
                listed = true;
                break;
            }
        }
        if (!listed) {
            fail_at(origin, s.line,
                    "cycle " + std::to_string(cy.no) + " has a result for " + case_id +
                        " which is not in its case list");
        }
    }
    c.cycles.push_back(std::move(cy));
}

void parse_defect_section(const text::Section& s, const std::string& origin,
                          Campaign& c) {
    Defect d;
    for (const auto& e : s.entries) {
        if (e.key == "id") {
            d.id = e.value;
        } else if (e.key == "title") {
            d.title = e.value;
        } else if (e.key == "severity") {
            try {
                d.severity = testkit::parse_severity(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else if (e.key == "state") {
            try {
                d.state = parse_defect_state(e.value);
            } catch (const Error& err) {
                fail_at(origin, e.line, err.what());
            }
        } else if (e.key == "blocked") {
            d.blocked = parse_int_entry(origin, e);
        } else if (e.key == "env") {
            d.env = e.value;
        } else if (e.key == "application") {
            d.application = e.value;
        } else if (e.key == "description") {
            d.description = e.value;
        } else if (e.key == "steps") {
            d.steps = e.value;
        } else if (e.key == "data") {
            d.data = e.value;
        } else if (e.key == "trace") {
            d.trace = e.value;
        } else if (e.key == "severity_justification") {
            d.severity_justification = e.value;
        } else if (e.key == "history") {
            d.history.push_back(e.value);
        } else {
            fail_at(origin, e.line, "unknown defect key '" + e.key + "'");
        }
    }
    if (d.id.empty()) {
        fail_at(origin, s.line, "defect is missing 'id'");
    }
    if (find_defect(c, d.id)) {
        fail_at(origin, s.line, "duplicate defect " + d.id);
    }
    if (d.title.empty()) {
        d.title = normalize_title(d.env, d.application, d.description);
    }
    c.defects.push_back(std::move(d));
}

void parse_lifecycle_section(const text::Section& s, const std::string& origin,
                             Campaign& c) {
    LifecycleGraph g;
    for (const auto& e : s.entries) {
        if (e.key != "edge") {
            fail_at(origin, e.line, "unknown lifecycle key '" + e.key + "'");
        }
        auto toks = split_ws(e.value);
        if (toks.size() != 3) {
            fail_at(origin, e.line, "edge wants 'FROM TO role'");
        }
        try {
            g.edges.push_back(LifecycleEdge{parse_defect_state(toks[0]),
                                            parse_defect_state(toks[1]), toks[2]});
        } catch (const Error& err) {
            fail_at(origin, e.line, err.what());
        }
    }
    if (g.edges.empty()) {
        fail_at(origin, s.line, "lifecycle section has no edges");
    }
    c.lifecycle = std::move(g);
    c.lifecycle_overridden = true;
}

void validate(const Campaign& c, const std::string& origin) {
    for (const auto& ch : c.chains) {
        bool found = false;
        for (const auto& r : c.requirements) {
            if (r.id == ch.req) {
                found = true;
                break;
            }
        }
        if (!found) {
            fail_at(origin, 1, "link references unknown requirement " + ch.req);
        }
    }
    // A cycle may only exercise cases the traceability matrix knows about;
    // otherwise coverage numbers would silently lie.
    for (const auto& cy : c.cycles) {
        for (const auto& case_id : cy.cases) {
            bool chained = false;
            for (const auto& ch : c.chains) {
                if (ch.case_id == case_id) {
                    chained = true;
                    break;
                }
            }
            if (!chained) {
                fail_at(origin, 1,
                        "cycle " + std::to_string(cy.no) + " references case " + case_id +
                            " that no traceability chain mentions");
            }
        }
    }
}

}  // namespace

Campaign parse_campaign(const std::string& content, const std::string& origin) {
    Campaign c;
    c.origin = origin;
    for (const auto& section : text::parse_sections(content, origin)) {
        if (section.name == "campaign") {
            parse_campaign_section(section, origin, c);
        } else if (section.name == "requirement") {
            parse_requirement_section(section, origin, c);
        } else if (section.name == "link") {
            parse_link_section(section, origin, c);
        } else if (section.name == "cycle") {
            parse_cycle_section(section, origin, c);
        } else if (section.name == "defect") {
            parse_defect_section(section, origin, c);
        } else if (section.name == "lifecycle") {
            parse_lifecycle_section(section, origin, c);
        } else {
            fail_at(origin, section.line, "unknown section [" + section.name + "]");
        }
    }
    validate(c, origin);
    return c;
}

Campaign load_campaign(const std::string& path) {
    return parse_campaign(text::read_file(path), path);
}

std::string save_campaign_text(const Campaign& c) {
    std::ostringstream out;
    out << "[campaign]\n";
    out << "regression_done = " << (c.regression_done ? "true" : "false") << "\n";
    out << "entry_floor = " << format_rate_field(c.entry_floor) << "\n";
    out << "exit_rate = " << format_rate_field(c.exit_rate) << "\n";
    for (const auto& r : c.requirements) {
        out << "\n[requirement]\n";
        out << "id = " << r.id << "\n";
        out << "source = " << req_source_name(r.source) << "\n";
        out << "text = " << r.text << "\n";
        out << "in_scope = " << (r.in_scope ? "true" : "false") << "\n";
    }
    for (const auto& ch : c.chains) {
        out << "\n[link]\n";
        out << "req = " << ch.req << "\n";
        out << "scenario = " << ch.scenario << "\n";
        out << "condition = " << ch.condition << "\n";
        out << "case = " << ch.case_id << "\n";
    }
    for (const auto& cy : c.cycles) {
        out << "\n[cycle]\n";
        out << "no = " << cy.no << "\n";
        out << "state = " << cycle_state_name(cy.state) << "\n";
        out << "cases = " << text::join(cy.cases, " ") << "\n";
        out << "entry.system_pass = " << format_rate_field(cy.entry.system_pass) << "\n";
        out << "entry.smoke = " << (cy.entry.smoke ? "true" : "false") << "\n";
        out << "entry.integrated = " << (cy.entry.integrated ? "true" : "false") << "\n";
        for (const auto& [case_id, verdict] : cy.results) {
            out << "result." << case_id << " = " << testkit::verdict_name(verdict)
                << "\n";
        }
    }
    for (const auto& d : c.defects) {
        out << "\n[defect]\n";
        out << "id = " << d.id << "\n";
        out << "title = " << d.title << "\n";
        out << "severity = " << testkit::severity_name(d.severity) << "\n";
        out << "state = " << defect_state_name(d.state) << "\n";
        out << "blocked = " << d.blocked << "\n";
        out << "env = " << d.env << "\n";
        out << "application = " << d.application << "\n";
        out << "description = " << d.description << "\n";
        out << "steps = " << d.steps << "\n";
        out << "data = " << d.data << "\n";
        if (!d.trace.empty()) {
            out << "trace = " << d.trace << "\n";
        }
        if (!d.severity_justification.empty()) {
            out << "severity_justification = " << d.severity_justification << "\n";
        }
        for (const auto& h : d.history) {
            out << "history = " << h << "\n";
        }
    }
    if (c.lifecycle_overridden) {
        out << "\n[lifecycle]\n";
        for (const auto& e : c.lifecycle.edges) {
            out << "edge = " << defect_state_name(e.from) << " "
                << defect_state_name(e.to) << " " << e.role << "\n";
        }
    }
    return out.str();
}

void save_campaign(const Campaign& campaign, const std::string& path) {
    text::write_file(path, save_campaign_text(campaign));
}

}  // namespace itb::stlc
