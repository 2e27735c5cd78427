// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "storefront/storefront.hpp"

#include <sstream>

#include "util/text.hpp"

namespace itb::storefront {

using domain::Money;
using netsim::Bus;
using netsim::Envelope;
using netsim::Reply;
using netsim::ServiceId;

std::string PostalAddress::render() const {
    std::ostringstream out;
    out << line1 << ", " << city << ", " << region << " " << zip;
    return out.str();
}

Merchant::Merchant(domain::BinTable table, std::set<std::string> avs_zips,
                   const domain::SimClock* clock)
    : table_(std::move(table)), avs_zips_(std::move(avs_zips)), clock_(clock) {}

AuthResponse Merchant::authorize(const AuthRequest& req) const {
    if (!table_.fragment_in_network(req.bin_prefix, req.network)) {
        return AuthResponse::declined_bin();
    }
    if (domain::is_expired(req.expiry, clock_->now().date)) {
        return AuthResponse::expired();
    }
    Avs avs = Avs::Unavailable;
    if (!req.bill_zip.empty()) {
        avs = avs_zips_.count(req.bill_zip) ? Avs::Match : Avs::NoMatch;
    }
    return AuthResponse::approved(avs);
}

void Merchant::attach(Bus& bus) {
    bus.register_handler(ServiceId::MERCHANT, [this](const Envelope& env) {
        if (env.kind != netsim::kind::Auth) {
            throw Error(Status::Usage, "merchant: unexpected kind " + env.kind);
        }
        return authorize(AuthRequest::from_payload(env.payload)).to_payload();
    });
}

void PaymentGateway::attach(Bus& bus) {
    bus.register_handler(ServiceId::WEBSVC, [&bus](const Envelope& env) {
        if (env.kind != netsim::kind::Pay) {
            throw Error(Status::Usage, "gateway: unexpected kind " + env.kind);
        }
        Reply r = bus.send(ServiceId::WEBSVC, ServiceId::MERCHANT, netsim::kind::Auth,
                           env.payload);
        if (r.transport_error) {
            return text::kv_build({{"error", kGatewayDownstreamError}});
        }
        return r.payload;
    });
}

void TaxService::attach(Bus& bus) {
    bus.register_handler(ServiceId::TAX, [this](const Envelope& env) {
        if (env.kind != netsim::kind::TaxQuote) {
            throw Error(Status::Usage, "tax: unexpected kind " + env.kind);
        }
        auto kv = text::kv_parse(env.payload);
        int64_t subtotal = std::stoll(text::kv_need(kv, "subtotal"));
        int64_t tax = domain::apply_rate_bp(subtotal, rate_bp_);
        return text::kv_build({{"tax", std::to_string(tax)}});
    });
}

void FraudEngine::add_rule(FraudRule rule) {
    for (const auto& ip : rule.ip_list) {
        if (!text::is_ipv4(ip)) {
            throw Error(Status::Usage, "fraud rule " + rule.rule_id + ": bad IPv4 '" + ip + "'");
        }
    }
    rules_.push_back(std::move(rule));
}

void FraudEngine::add_listed_ip(const std::string& ip) {
    if (!text::is_ipv4(ip)) {
        throw Error(Status::Usage, "fraud list: bad IPv4 '" + ip + "'");
    }
    for (auto& rule : rules_) {
        if (rule.rule_id == kDefaultFraudRuleId) {
            rule.ip_list.insert(ip);
            return;
        }
    }
    rules_.push_back(FraudRule{kDefaultFraudRuleId, FraudRuleKind::IpInFraudList, {ip}});
}

ScreenResult FraudEngine::screen(const ScreenRequest& req) const {
    for (const auto& rule : rules_) {
        if (rule.kind == FraudRuleKind::IpInFraudList && rule.ip_list.count(req.customer_ip)) {
            return ScreenResult{false, rule.rule_id};
        }
    }
    return ScreenResult{true, ""};
}

void FraudEngine::attach(Bus& bus) {
    bus.register_handler(ServiceId::FRAUD, [this](const Envelope& env) {
        if (env.kind != netsim::kind::FraudScreen) {
            throw Error(Status::Usage, "fraud: unexpected kind " + env.kind);
        }
        return screen(ScreenRequest::from_payload(env.payload)).to_payload();
    });
}

std::string session_state_name(SessionState s) {
    switch (s) {
    case SessionState::Browsing:
        return "Browsing";
    case SessionState::CheckedOut:
        return "CheckedOut";
    case SessionState::AddressSet:
        return "AddressSet";
    case SessionState::PaymentAccepted:
        return "PaymentAccepted";
    case SessionState::Placed:
        return "Placed";
    case SessionState::PaymentError:
        return "PaymentError";
    }
    return "Browsing";
}

std::string availability_name(AvailabilityResult a) {
    switch (a) {
    case AvailabilityResult::Available:
        return "Available";
    case AvailabilityResult::Unavailable:
        return "Unavailable";
    case AvailabilityResult::Unknown:
        return "Unknown";
    }
    return "Unknown";
}

std::string payment_outcome_name(PaymentOutcome o) {
    switch (o) {
    case PaymentOutcome::Accepted:
        return "Accepted";
    case PaymentOutcome::Declined:
        return "Declined";
    case PaymentOutcome::GatewayUnavailable:
        return "GatewayUnavailable";
    }
    return "Declined";
}

std::string format_order_no(int64_t counter) {
    return "W" + text::pad_int(counter, 9);
}

OnlineStore::OnlineStore(Bus* bus, const domain::SimClock* clock)
    : bus_(bus), clock_(clock) {
    default_ship_ = PostalAddress{"1 Main St", "Springfield", "NY", "10001"};
    default_bill_ = PostalAddress{"1 Main St", "Springfield", "NY", "90210"};
}

void OnlineStore::set_price(const std::string& item_id, Money price) {
    catalog_[item_id] = price;
}

std::optional<Money> OnlineStore::price(const std::string& item_id) const {
    auto it = catalog_.find(item_id);
    if (it == catalog_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void OnlineStore::set_default_addresses(PostalAddress ship, PostalAddress bill) {
    default_ship_ = std::move(ship);
    default_bill_ = std::move(bill);
}

CartSession& OnlineStore::new_session(const std::string& customer_ip) {
    if (!text::is_ipv4(customer_ip)) {
        throw Error(Status::Usage, "session: bad customer IPv4 '" + customer_ip + "'");
    }
    ++session_counter_;
    std::string id = "S-" + text::pad_int(session_counter_, 3);
    CartSession s;
    s.session_id = id;
    s.customer_ip = customer_ip;
    current_session_id_ = id;
    auto [it, inserted] = sessions_.emplace(id, std::move(s));
    return it->second;
}

CartSession& OnlineStore::session(const std::string& session_id) {
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw Error(Status::Absent, "unknown session " + session_id);
    }
    return it->second;
}

const CartSession* OnlineStore::find_session(const std::string& session_id) const {
    auto it = sessions_.find(session_id);
    return it == sessions_.end() ? nullptr : &it->second;
}

CartSession* OnlineStore::current_session() {
    if (current_session_id_.empty()) {
        return nullptr;
    }
    auto it = sessions_.find(current_session_id_);
    return it == sessions_.end() ? nullptr : &it->second;
}

bool OnlineStore::browse(CartSession& s, const std::string& item_id) {
    if (catalog_.count(item_id)) {
        s.last_message = "Item " + item_id + " available";
        return true;
    }
    s.last_error = "Item " + item_id + " not found";
    return false;
}

AvailabilityResult OnlineStore::check_availability(CartSession& s, const std::string& item_id) {
    Reply r = bus_->send(ServiceId::OLS, ServiceId::OMS, netsim::kind::InvCheck,
                         text::kv_build({{"item", item_id}}));
    if (r.transport_error) {
        s.last_error = kMsgAvailabilityUnknown;
        return AvailabilityResult::Unknown;
    }
    auto kv = text::kv_parse(r.payload);
    std::string err = text::kv_or(kv, "error", "");
    if (!err.empty()) {
        s.last_error = err;
        return AvailabilityResult::Unknown;
    }
    std::string avail = text::kv_need(kv, "availability");
    s.last_message = avail;
    return avail == "Available" ? AvailabilityResult::Available
                                : AvailabilityResult::Unavailable;
}

void OnlineStore::cart_checkout(CartSession& s, const std::string& item_id, int64_t qty) {
    if (s.state != SessionState::Browsing && s.state != SessionState::CheckedOut) {
        throw Error(Status::Sequence,
                    "checkout not allowed in state " + session_state_name(s.state));
    }
    if (qty < 1) {
        throw Error(Status::Usage, "checkout: quantity must be at least 1");
    }
    if (!catalog_.count(item_id)) {
        throw Error(Status::Usage, "checkout: item " + item_id + " not in catalog");
    }
    s.cart.push_back(CartLine{item_id, qty});
    s.state = SessionState::CheckedOut;
    s.last_message = "Checked out " + std::to_string(qty) + " x " + item_id;
}

void OnlineStore::set_addresses(CartSession& s, std::optional<PostalAddress> ship,
                                std::optional<PostalAddress> bill) {
    if (s.state != SessionState::CheckedOut && s.state != SessionState::AddressSet) {
        throw Error(Status::Sequence,
                    "addresses not allowed in state " + session_state_name(s.state));
    }
    s.ship_to = ship ? *ship : default_ship_;
    s.bill_to = bill ? *bill : default_bill_;
    s.state = SessionState::AddressSet;
    s.last_message = "Addresses set";
}

Money OnlineStore::cart_subtotal(const CartSession& s) const {
    Money total{0, "USD"};
    bool first = true;
    for (const auto& line : s.cart) {
        auto it = catalog_.find(line.item_id);
        if (it == catalog_.end()) {
            throw Error(Status::Usage, "no price for item " + line.item_id);
        }
        if (first) {
            total.currency = it->second.currency;
            first = false;
        } else if (total.currency != it->second.currency) {
            throw Error(Status::Usage, "mixed currencies in cart");
        }
        total.cents += it->second.cents * line.qty;
    }
    return total;
}

PaymentOutcome OnlineStore::submit_payment(CartSession& s, const domain::CardDetails& card) {
    if (s.state != SessionState::AddressSet && s.state != SessionState::PaymentError) {
        throw Error(Status::Sequence,
                    "payment not allowed in state " + session_state_name(s.state));
    }
    s.last_entered_pan = card.pan.digits();
    AuthRequest req;
    req.masked = domain::mask_pan(card.pan);
    req.network = card.network;
    req.bin_prefix = card.pan.prefix(6);
    req.expiry = card.expiry;
    req.amount = cart_subtotal(s);
    req.bill_zip = s.bill_to ? s.bill_to->zip : "";
    Reply r = bus_->send(ServiceId::OLS, ServiceId::WEBSVC, netsim::kind::Pay,
                         req.to_payload());
    if (r.transport_error) {
        s.state = SessionState::PaymentError;
        s.last_error = kMsgGatewayUnavailable;
        return PaymentOutcome::GatewayUnavailable;
    }
    auto kv = text::kv_parse(r.payload);
    if (text::kv_or(kv, "error", "") == kGatewayDownstreamError) {
        s.state = SessionState::PaymentError;
        s.last_error = kMsgGatewayUnavailable;
        return PaymentOutcome::GatewayUnavailable;
    }
    AuthResponse resp = AuthResponse::from_payload(r.payload);
    s.last_auth = resp;
    if (resp.approved_ok()) {
        s.state = SessionState::PaymentAccepted;
        s.card = card;
        s.last_message = "Payment accepted";
        return PaymentOutcome::Accepted;
    }
    s.state = SessionState::PaymentError;
    s.last_error = resp.reason;
    return PaymentOutcome::Declined;
}

PaymentOutcome OnlineStore::resubmit_payment(CartSession& s) {
    if (s.state == SessionState::PaymentAccepted) {
        // Double submit after success: the earlier authorization stands,
        // no new request leaves the storefront.
        s.last_message = "Payment accepted";
        return PaymentOutcome::Accepted;
    }
    if (!s.card) {
        throw Error(Status::Sequence, "no accepted payment to resubmit");
    }
    return submit_payment(s, *s.card);
}

PlaceResult OnlineStore::place_order(CartSession& s) {
    PlaceResult result;
    if (s.state != SessionState::PaymentAccepted) {
        throw Error(Status::Sequence,
                    "place not allowed in state " + session_state_name(s.state));
    }
    Money subtotal = cart_subtotal(s);

    Reply taxr = bus_->send(ServiceId::OLS, ServiceId::TAX, netsim::kind::TaxQuote,
                            text::kv_build({{"subtotal", std::to_string(subtotal.cents)},
                                            {"currency", subtotal.currency}}));
    if (taxr.transport_error) {
        s.last_error = kMsgTaxUnavailable;
        result.error = kMsgTaxUnavailable;
        return result;
    }
    int64_t tax = std::stoll(text::kv_need(text::kv_parse(taxr.payload), "tax"));

    // The candidate number is only committed once the order management
    // system accepts the feed; a refused placement leaves the counter
    // untouched so the next attempt reuses the same number.
    std::string candidate = next_order_no_preview();

    std::string ind = "N";
    if (bus_->availability(ServiceId::FRAUD) == netsim::Availability::Up) {
        ScreenRequest sreq{candidate, s.customer_ip};
        Reply fr = bus_->send(ServiceId::OLS, ServiceId::FRAUD, netsim::kind::FraudScreen,
                              sreq.to_payload());
        if (!fr.transport_error) {
            ScreenResult sr = ScreenResult::from_payload(fr.payload);
            if (!sr.cleared) {
                s.last_error = kMsgFraudRefused;
                result.error = kMsgFraudRefused;
                return result;
            }
            ind = "Y";
        }
    }

    OrderFeed feed;
    feed.order_no = candidate;
    feed.status = "Created";
    feed.fraud_check_ind = ind;
    feed.customer_ip = s.customer_ip;
    for (const auto& line : s.cart) {
        feed.lines.push_back(FeedLine{line.item_id, line.qty, catalog_.at(line.item_id).cents});
    }
    feed.tax = tax;
    feed.total = subtotal.cents + tax;
    feed.ship_to = s.ship_to ? s.ship_to->render() : "";
    feed.bill_to = s.bill_to ? s.bill_to->render() : "";

    Reply fr = bus_->send(ServiceId::OLS, ServiceId::OMS, netsim::kind::OrderFeed,
                          feed_to_xml(feed));
    if (fr.transport_error) {
        s.last_error = kMsgOmsUnavailable;
        result.error = kMsgOmsUnavailable;
        return result;
    }
    auto kv = text::kv_parse(fr.payload);
    std::string err = text::kv_or(kv, "error", "");
    if (!err.empty()) {
        s.last_error = "order rejected: " + err;
        result.error = s.last_error;
        return result;
    }

    commit_order_no();
    orders_[candidate] = OlsOrder{candidate, "Created", s.session_id};
    s.state = SessionState::Placed;
    s.order_no = candidate;
    s.last_message = "Order placed: " + candidate;
    result.placed = true;
    result.order_no = candidate;
    return result;
}

std::optional<std::string> OnlineStore::order_status(const std::string& order_no) const {
    auto it = orders_.find(order_no);
    if (it == orders_.end()) {
        return std::nullopt;
    }
    return it->second.status;
}

void OnlineStore::attach(Bus& bus) {
    bus.register_handler(ServiceId::OLS, [this](const Envelope& env) {
        if (env.kind != netsim::kind::StatusSync) {
            throw Error(Status::Usage, "storefront: unexpected kind " + env.kind);
        }
        auto [order_no, status] = parse_status_sync(env.payload);
        auto it = orders_.find(order_no);
        if (it == orders_.end()) {
            orders_[order_no] = OlsOrder{order_no, status, ""};
        } else {
            it->second.status = status;
        }
        return text::kv_build({{"ok", "1"}});
    });
}

std::string OnlineStore::next_order_no_preview() const {
    return format_order_no(order_counter_ + 1);
}

void OnlineStore::commit_order_no() {
    ++order_counter_;
}

}  // namespace itb::storefront
