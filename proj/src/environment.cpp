// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "environment.hpp"

#include <sstream>

namespace itb {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] void bad_entry(const std::string& origin, const text::Entry& entry,
                            const std::string& why) {
    std::ostringstream out;
    out << origin << ":" << entry.line << ": " << why;
    throw Error(Status::Usage, out.str());
}

int64_t parse_int(const std::string& origin, const text::Entry& entry,
                  const std::string& tok) {
    try {
        size_t pos = 0;
        int64_t v = std::stoll(tok, &pos);
        if (pos != tok.size()) {
            bad_entry(origin, entry, "bad integer '" + tok + "'");
        }
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_entry(origin, entry, "bad integer '" + tok + "'");
    }
}

}  // namespace

void ScenarioOverrides::apply(ScenarioConfig& config) const {
    if (clock_start) {
        config.clock_start = *clock_start;
    }
    for (const auto& f : faults) {
        config.faults.push_back(f);
    }
    for (const auto& [item, qty] : stock) {
        config.stock[item] = qty;
    }
    for (const auto& [item, money] : prices) {
        config.prices[item] = money;
    }
    for (const auto& ip : fraud_ips) {
        config.fraud_ips.push_back(ip);
    }
    if (session_ip) {
        config.session_ip = *session_ip;
    }
    if (ship_zip) {
        config.ship_zip = *ship_zip;
    }
    if (bill_zip) {
        config.bill_zip = *bill_zip;
    }
    for (const auto& zip : avs_zips) {
        config.avs_zips.insert(zip);
    }
    for (const auto& bin : extra_bins) {
        config.extra_bins.push_back(bin);
    }
    if (tax_rate_bp) {
        config.tax_rate_bp = *tax_rate_bp;
    }
}

bool ScenarioOverrides::empty() const {
    return !clock_start && faults.empty() && stock.empty() && prices.empty() &&
           fraud_ips.empty() && !session_ip && !ship_zip && !bill_zip &&
           avs_zips.empty() && extra_bins.empty() && !tax_rate_bp;
}

void ScenarioOverrides::add_entry(const text::Entry& entry, const std::string& origin) {
    const std::string& key = entry.key;
    const std::string& value = entry.value;
    if (key == "clock") {
        clock_start = value;
        return;
    }
    if (key == "fault") {
        auto toks = split_ws(value);
        if (toks.size() != 2) {
            bad_entry(origin, entry, "fault wants 'SERVICE STATE'");
        }
        try {
            faults.emplace_back(netsim::parse_service(toks[0]),
                                netsim::parse_availability(toks[1]));
        } catch (const Error& e) {
            bad_entry(origin, entry, e.what());
        }
        return;
    }
    if (key == "stock") {
        auto toks = split_ws(value);
        if (toks.size() != 2) {
            bad_entry(origin, entry, "stock wants 'ITEM QTY'");
        }
        int64_t qty = parse_int(origin, entry, toks[1]);
        if (qty < 0) {
            bad_entry(origin, entry, "stock cannot be negative");
        }
        stock.emplace_back(toks[0], qty);
        return;
    }
    if (key == "price") {
        auto toks = split_ws(value);
        if (toks.size() != 2 && toks.size() != 3) {
            bad_entry(origin, entry, "price wants 'ITEM CENTS [CURRENCY]'");
        }
        int64_t cents = parse_int(origin, entry, toks[1]);
        std::string currency = toks.size() == 3 ? toks[2] : "USD";
        try {
            prices.emplace_back(toks[0], domain::make_money(cents, currency));
        } catch (const Error& e) {
            bad_entry(origin, entry, e.what());
        }
        return;
    }
    if (key == "fraud_ip") {
        fraud_ips.push_back(value);
        return;
    }
    if (key == "session_ip") {
        session_ip = value;
        return;
    }
    if (key == "ship_zip") {
        ship_zip = value;
        return;
    }
    if (key == "bill_zip") {
        bill_zip = value;
        return;
    }
    if (key == "avs_zip") {
        avs_zips.push_back(value);
        return;
    }
    if (key == "bin") {
        auto toks = split_ws(value);
        if (toks.size() != 2) {
            bad_entry(origin, entry, "bin wants 'NETWORK PREFIX'");
        }
        try {
            extra_bins.emplace_back(domain::parse_network(toks[0]), toks[1]);
        } catch (const Error& e) {
            bad_entry(origin, entry, e.what());
        }
        return;
    }
    if (key == "tax_rate_bp") {
        int64_t bp = parse_int(origin, entry, value);
        if (bp < 0 || bp > 10000) {
            bad_entry(origin, entry, "tax_rate_bp must be within 0..10000");
        }
        tax_rate_bp = bp;
        return;
    }
    bad_entry(origin, entry, "unknown setting '" + key + "'");
}

ScenarioOverrides ScenarioOverrides::from_section(const text::Section& section,
                                                  const std::string& origin) {
    ScenarioOverrides o;
    for (const auto& entry : section.entries) {
        o.add_entry(entry, origin);
    }
    return o;
}

ScenarioOverrides load_scenario_text(const std::string& content,
                                     const std::string& origin) {
    ScenarioOverrides o;
    std::string body = text::trim(content);
    bool sectioned = false;
    for (const auto& line : text::split(body, '\n')) {
        std::string t = text::trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        sectioned = t[0] == '[';
        break;
    }
    if (sectioned) {
        for (const auto& section : text::parse_sections(content, origin)) {
            if (section.name != "scenario") {
                throw Error(Status::Usage, origin + ":" + std::to_string(section.line) +
                                               ": scenario files know only [scenario]");
            }
            for (const auto& e : section.entries) {
                o.add_entry(e, origin);
            }
        }
    } else {
        for (const auto& e : text::parse_entries(content, origin)) {
            o.add_entry(e, origin);
        }
    }
    return o;
}

ScenarioOverrides load_scenario_file(const std::string& path) {
    return load_scenario_text(text::read_file(path), path);
}

domain::BinTable Environment::make_bin_table(const ScenarioConfig& config) {
    domain::BinTable table = domain::BinTable::defaults();
    for (const auto& [network, prefix] : config.extra_bins) {
        table.add_prefix(network, prefix);
    }
    return table;
}

Environment::Environment(const ScenarioConfig& config)
    : config_(config),
      clock_(domain::parse_datetime(config.clock_start)),
      bus_(),
      merchant_(make_bin_table(config), config.avs_zips, &clock_),
      gateway_(),
      tax_(config.tax_rate_bp),
      fraud_(),
      oms_(&bus_, &clock_),
      resa_(&bus_),
      ols_(&bus_, &clock_) {
    ols_.attach(bus_);
    gateway_.attach(bus_);
    merchant_.attach(bus_);
    fraud_.attach(bus_);
    oms_.attach(bus_);
    tax_.attach(bus_);

    for (const auto& [item, qty] : config_.stock) {
        oms_.seed_stock(item, qty);
    }
    for (const auto& [item, money] : config_.prices) {
        ols_.set_price(item, money);
    }
    for (const auto& ip : config_.fraud_ips) {
        fraud_.add_listed_ip(ip);
    }
    ols_.set_default_addresses(
        storefront::PostalAddress{"1 Main St", "Springfield", "NY", config_.ship_zip},
        storefront::PostalAddress{"2 Oak Ave", "Springfield", "NY", config_.bill_zip});

    for (const auto& [svc, state] : config_.faults) {
        bus_.set_availability(svc, state);
    }
}

void Environment::set_fault(netsim::ServiceId svc, netsim::Availability a) {
    bus_.set_availability(svc, a);
}

}  // namespace itb
