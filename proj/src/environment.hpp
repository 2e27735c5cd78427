// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "backoffice/backoffice.hpp"
#include "domain/domain.hpp"
#include "netsim/bus.hpp"
#include "storefront/storefront.hpp"
#include "util/text.hpp"

namespace itb {

// Everything a scenario needs before the first request is sent. Values
// here are the resolved result of layering overrides; Environment
// consumes it verbatim.
struct ScenarioConfig {
    std::string clock_start = domain::kDefaultClock;
    std::vector<std::pair<netsim::ServiceId, netsim::Availability>> faults;
    std::map<std::string, int64_t> stock;
    std::map<std::string, domain::Money> prices;
    std::vector<std::string> fraud_ips;
    std::string session_ip = "198.51.100.7";
    std::string ship_zip = "10001";
    std::string bill_zip = "90210";
    std::set<std::string> avs_zips = {"10001", "90210"};
    std::vector<std::pair<domain::CardNetwork, std::string>> extra_bins;
    int64_t tax_rate_bp = 800;
};

// One layer of configuration. Scalars replace, list entries append; apply
// layers lowest precedence first.
struct ScenarioOverrides {
    std::optional<std::string> clock_start;
    std::vector<std::pair<netsim::ServiceId, netsim::Availability>> faults;
    std::vector<std::pair<std::string, int64_t>> stock;
    std::vector<std::pair<std::string, domain::Money>> prices;
    std::vector<std::string> fraud_ips;
    std::optional<std::string> session_ip;
    std::optional<std::string> ship_zip;
    std::optional<std::string> bill_zip;
    std::vector<std::string> avs_zips;
    std::vector<std::pair<domain::CardNetwork, std::string>> extra_bins;
    std::optional<int64_t> tax_rate_bp;

    void apply(ScenarioConfig& config) const;
    bool empty() const;

    // Reads one "key = value" setting (the prereq vocabulary). Throws
    // Error(Usage) with origin:line on unknown keys or bad values.
    void add_entry(const text::Entry& entry, const std::string& origin);
    static ScenarioOverrides from_section(const text::Section& section,
                                          const std::string& origin);
};

// Scenario file: bare "key = value" lines, optionally under a single
// [scenario] section. Both shapes carry the prereq vocabulary.
ScenarioOverrides load_scenario_text(const std::string& content,
                                     const std::string& origin);
ScenarioOverrides load_scenario_file(const std::string& path);

// A fully wired scenario: simulated clock, bus, and all applications with
// their handlers registered, stock seeded and faults applied.
class Environment {
  public:
    explicit Environment(const ScenarioConfig& config);

    Environment(const Environment&) = delete;
    Environment& operator=(const Environment&) = delete;

    netsim::Bus& bus() { return bus_; }
    domain::SimClock& clock() { return clock_; }
    storefront::OnlineStore& ols() { return ols_; }
    storefront::Merchant& merchant() { return merchant_; }
    storefront::FraudEngine& fraud() { return fraud_; }
    backoffice::Oms& oms() { return oms_; }
    backoffice::Resa& resa() { return resa_; }
    const ScenarioConfig& config() const { return config_; }

    void set_fault(netsim::ServiceId svc, netsim::Availability a);

  private:
    static domain::BinTable make_bin_table(const ScenarioConfig& config);

    ScenarioConfig config_;
    domain::SimClock clock_;
    netsim::Bus bus_;
    storefront::Merchant merchant_;
    storefront::PaymentGateway gateway_;
    storefront::TaxService tax_;
    storefront::FraudEngine fraud_;
    backoffice::Oms oms_;
    backoffice::Resa resa_;
    storefront::OnlineStore ols_;
};

}  // namespace itb
