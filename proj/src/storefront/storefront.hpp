// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domain/domain.hpp"
#include "netsim/bus.hpp"
#include "storefront/messages.hpp"
#include "storefront/order_feed.hpp"

namespace itb::storefront {

struct PostalAddress {
    std::string line1;
    std::string city;
    std::string region;
    std::string zip;

    std::string render() const;
};

// Merchant authorizer. Decision order: BIN range, then expiry, then
// approval with an address-verification result.
class Merchant {
  public:
    Merchant(domain::BinTable table, std::set<std::string> avs_zips,
             const domain::SimClock* clock);

    AuthResponse authorize(const AuthRequest& req) const;
    void attach(netsim::Bus& bus);

    const domain::BinTable& bin_table() const { return table_; }

  private:
    domain::BinTable table_;
    std::set<std::string> avs_zips_;
    const domain::SimClock* clock_;
};

// Payment web service. Accepts PAY, forwards the payload verbatim as AUTH
// to the merchant, and relays the merchant reply. A merchant transport
// failure turns into an in-band gateway error so the storefront sees one
// uniform reply shape.
class PaymentGateway {
  public:
    void attach(netsim::Bus& bus);
};

class TaxService {
  public:
    explicit TaxService(int64_t rate_bp) : rate_bp_(rate_bp) {}

    int64_t rate_bp() const { return rate_bp_; }
    void attach(netsim::Bus& bus);

  private:
    int64_t rate_bp_;
};

enum class FraudRuleKind { IpInFraudList };

struct FraudRule {
    std::string rule_id;
    FraudRuleKind kind = FraudRuleKind::IpInFraudList;
    std::set<std::string> ip_list;
};

class FraudEngine {
  public:
    void add_rule(FraudRule rule);
    void add_listed_ip(const std::string& ip);

    ScreenResult screen(const ScreenRequest& req) const;
    void attach(netsim::Bus& bus);

    const std::vector<FraudRule>& rules() const { return rules_; }

  private:
    std::vector<FraudRule> rules_;
};

inline constexpr const char* kDefaultFraudRuleId = "RULE-IP-01";

enum class SessionState {
    Browsing,
    CheckedOut,
    AddressSet,
    PaymentAccepted,
    Placed,
    PaymentError,
};

std::string session_state_name(SessionState s);

struct CartLine {
    std::string item_id;
    int64_t qty = 0;
};

// One shopper session. last_message holds the most recent storefront
// message shown to the shopper; last_error the most recent refusal text.
struct CartSession {
    std::string session_id;
    std::string customer_ip;
    SessionState state = SessionState::Browsing;
    std::vector<CartLine> cart;
    std::optional<PostalAddress> ship_to;
    std::optional<PostalAddress> bill_to;
    std::optional<domain::CardDetails> card;
    std::optional<AuthResponse> last_auth;
    std::string last_entered_pan;
    std::string order_no;
    std::string last_message;
    std::string last_error;
};

enum class AvailabilityResult { Available, Unavailable, Unknown };

std::string availability_name(AvailabilityResult a);

enum class PaymentOutcome { Accepted, Declined, GatewayUnavailable };

std::string payment_outcome_name(PaymentOutcome o);

struct PlaceResult {
    bool placed = false;
    std::string order_no;
    std::string error;
};

struct OlsOrder {
    std::string order_no;
    std::string status;
    std::string session_id;
};

// Storefront error texts.
inline constexpr const char* kMsgGatewayUnavailable =
    "Payment gateway unavailable, please try again later";
inline constexpr const char* kMsgAvailabilityUnknown =
    "Availability unknown: order management is unreachable";
inline constexpr const char* kMsgTaxUnavailable =
    "Tax service unavailable, order not placed";
inline constexpr const char* kMsgOmsUnavailable =
    "Order management unavailable, order not placed";
inline constexpr const char* kMsgFraudRefused = "Order refused by fraud screening";

// The storefront. Owns shopper sessions, the item catalog with unit
// prices, and its local copy of order status. Talks to every other
// application through the bus only.
class OnlineStore {
  public:
    OnlineStore(netsim::Bus* bus, const domain::SimClock* clock);

    void set_price(const std::string& item_id, domain::Money price);
    std::optional<domain::Money> price(const std::string& item_id) const;
    void set_default_addresses(PostalAddress ship, PostalAddress bill);

    CartSession& new_session(const std::string& customer_ip);
    CartSession& session(const std::string& session_id);
    const CartSession* find_session(const std::string& session_id) const;
    CartSession* current_session();

    // Catalog lookup only; no bus traffic.
    bool browse(CartSession& s, const std::string& item_id);

    AvailabilityResult check_availability(CartSession& s, const std::string& item_id);

    // Moves Browsing -> CheckedOut. Adds the line to the cart.
    void cart_checkout(CartSession& s, const std::string& item_id, int64_t qty);

    // Moves CheckedOut -> AddressSet (idempotent while AddressSet).
    void set_addresses(CartSession& s, std::optional<PostalAddress> ship,
                       std::optional<PostalAddress> bill);

    PaymentOutcome submit_payment(CartSession& s, const domain::CardDetails& card);

    // Browser-back path. While PaymentAccepted this returns Accepted
    // without any bus traffic; the earlier authorization stands.
    PaymentOutcome resubmit_payment(CartSession& s);

    PlaceResult place_order(CartSession& s);

    std::optional<std::string> order_status(const std::string& order_no) const;

    domain::Money cart_subtotal(const CartSession& s) const;

    void attach(netsim::Bus& bus);

    const std::map<std::string, OlsOrder>& orders() const { return orders_; }

  private:
    std::string next_order_no_preview() const;
    void commit_order_no();

    netsim::Bus* bus_;
    const domain::SimClock* clock_;
    std::map<std::string, domain::Money> catalog_;
    std::map<std::string, CartSession> sessions_;
    std::map<std::string, OlsOrder> orders_;
    PostalAddress default_ship_;
    PostalAddress default_bill_;
    int64_t session_counter_ = 0;
    int64_t order_counter_ = 0;
    std::string current_session_id_;
};

// Order numbers are "W" plus a nine digit zero padded counter.
std::string format_order_no(int64_t counter);

}  // namespace itb::storefront
