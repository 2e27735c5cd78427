// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "storefront/messages.hpp"

#include "util/text.hpp"

namespace itb::storefront {

std::string avs_name(Avs a) {
    switch (a) {
    case Avs::Match:
        return "MATCH";
    case Avs::NoMatch:
        return "NO_MATCH";
    case Avs::Unavailable:
        return "UNAVAILABLE";
    }
    return "UNAVAILABLE";
}

std::string avs_description(Avs a) {
    switch (a) {
    case Avs::Match:
        return "AVS address match";
    case Avs::NoMatch:
        return "AVS address mismatch";
    case Avs::Unavailable:
        return "AVS unavailable";
    }
    return "AVS unavailable";
}

std::optional<Avs> parse_avs(const std::string& name) {
    if (name == "MATCH") {
        return Avs::Match;
    }
    if (name == "NO_MATCH") {
        return Avs::NoMatch;
    }
    if (name == "UNAVAILABLE") {
        return Avs::Unavailable;
    }
    return std::nullopt;
}

std::string AuthRequest::to_payload() const {
    std::string fragment = bin_prefix.substr(0, kWireBinLen);
    return text::kv_build({
        {"masked", masked.text},
        {"network", domain::network_name(network)},
        {"bin", fragment},
        {"last4", masked.text.size() >= 4 ? masked.text.substr(masked.text.size() - 4)
                                          : masked.text},
        {"expiry", domain::format_expiry(expiry)},
        {"amount", std::to_string(amount.cents)},
        {"currency", amount.currency},
        {"zip", bill_zip},
    });
}

AuthRequest AuthRequest::from_payload(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    AuthRequest req;
    req.masked.text = text::kv_need(kv, "masked");
    req.network = domain::parse_network(text::kv_need(kv, "network"));
    req.bin_prefix = text::kv_need(kv, "bin");
    req.expiry = domain::parse_expiry(text::kv_need(kv, "expiry"));
    req.amount = domain::make_money(std::stoll(text::kv_need(kv, "amount")),
                                    text::kv_need(kv, "currency"));
    req.bill_zip = text::kv_need(kv, "zip");
    return req;
}

AuthResponse AuthResponse::declined_bin() {
    return AuthResponse{kCodeDeclinedBin, kReasonDeclinedBin, std::nullopt};
}

AuthResponse AuthResponse::expired() {
    return AuthResponse{kCodeExpired, kReasonExpired, std::nullopt};
}

AuthResponse AuthResponse::approved(Avs avs) {
    return AuthResponse{kCodeApproved, avs_description(avs), avs};
}

std::string AuthResponse::to_payload() const {
    text::KvPairs kv{{"code", code}, {"reason", reason}};
    if (avs) {
        kv.emplace_back("avs", avs_name(*avs));
    }
    return text::kv_build(kv);
}

AuthResponse AuthResponse::from_payload(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    AuthResponse resp;
    resp.code = text::kv_need(kv, "code");
    resp.reason = text::kv_need(kv, "reason");
    std::string avs = text::kv_or(kv, "avs", "");
    if (!avs.empty()) {
        resp.avs = parse_avs(avs);
    }
    // invariant: an approval always carries an AVS result
    if (resp.approved_ok() && !resp.avs) {
        throw Error(Status::Usage, "auth response: approval without avs result");
    }
    return resp;
}

std::string ScreenRequest::to_payload() const {
    return text::kv_build({{"order", order_no}, {"ip", customer_ip}});
}

ScreenRequest ScreenRequest::from_payload(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    return ScreenRequest{text::kv_need(kv, "order"), text::kv_need(kv, "ip")};
}

std::string ScreenResult::to_payload() const {
    if (cleared) {
        return text::kv_build({{"result", "Y"}});
    }
    return text::kv_build({{"result", "N"}, {"rule", rule_id}});
}

ScreenResult ScreenResult::from_payload(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    std::string result = text::kv_need(kv, "result");
    if (result == "Y") {
        return ScreenResult{true, ""};
    }
    if (result == "N") {
        return ScreenResult{false, text::kv_need(kv, "rule")};
    }
    throw Error(Status::Usage, "screen result: expected Y or N, got '" + result + "'");
}

std::string status_sync_payload(const std::string& order_no, const std::string& status) {
    return order_no + "|" + status;
}

std::pair<std::string, std::string> parse_status_sync(const std::string& payload) {
    auto pos = payload.find('|');
    if (pos == std::string::npos) {
        throw Error(Status::Usage, "status sync: missing '|' separator");
    }
    return {payload.substr(0, pos), payload.substr(pos + 1)};
}

}  // namespace itb::storefront
