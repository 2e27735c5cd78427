// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>

#include "domain/domain.hpp"

namespace itb::storefront {

// Merchant response codes. 227 carries its fixed reason text; 00 always
// carries an address-verification result.
inline constexpr const char* kCodeApproved = "00";
inline constexpr const char* kCodeDeclinedBin = "227";
inline constexpr const char* kCodeExpired = "EXPIRED";
inline constexpr const char* kReasonDeclinedBin =
    "Merchant cannot accept this Private Label BIN range";
inline constexpr const char* kReasonExpired = "card expired";

enum class Avs { Match, NoMatch, Unavailable };

std::string avs_name(Avs a);
std::string avs_description(Avs a);
std::optional<Avs> parse_avs(const std::string& name);

// Authorization request as built by the storefront. Only non-secret card
// data crosses the wire: the masked number, the last four digits and a BIN
// fragment capped at four digits, so no payload ever carries five or more
// consecutive digits of the account number.
struct AuthRequest {
    domain::MaskedPan masked;
    domain::CardNetwork network = domain::CardNetwork::Visa;
    std::string bin_prefix;  // first six digits, kept storefront-side
    domain::YearMonth expiry;
    domain::Money amount;
    std::string bill_zip;

    static constexpr size_t kWireBinLen = 4;

    std::string to_payload() const;
    static AuthRequest from_payload(const std::string& payload);
};

struct AuthResponse {
    std::string code;
    std::string reason;
    std::optional<Avs> avs;

    static AuthResponse declined_bin();
    static AuthResponse expired();
    static AuthResponse approved(Avs avs);

    bool approved_ok() const { return code == kCodeApproved; }

    std::string to_payload() const;
    static AuthResponse from_payload(const std::string& payload);
};

// PAY replies when the gateway itself ran but its downstream did not.
inline constexpr const char* kGatewayDownstreamError = "downstream-unavailable";

// FRAUD_SCREEN request/reply.
struct ScreenRequest {
    std::string order_no;
    std::string customer_ip;

    std::string to_payload() const;
    static ScreenRequest from_payload(const std::string& payload);
};

struct ScreenResult {
    bool cleared = true;     // Y / N
    std::string rule_id;     // set when cleared == false

    std::string to_payload() const;
    static ScreenResult from_payload(const std::string& payload);
};

// STATUS_SYNC payload is plain "order_no|status".
std::string status_sync_payload(const std::string& order_no, const std::string& status);
std::pair<std::string, std::string> parse_status_sync(const std::string& payload);

}  // namespace itb::storefront
