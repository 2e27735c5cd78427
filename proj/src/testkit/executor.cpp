// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "testkit/executor.hpp"

#include <chrono>
#include <optional>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace itb::testkit {

namespace {

using nlohmann::ordered_json;

struct ParsedAction {
    std::string verb;
    std::vector<std::string> positional;
    text::KvPairs named;
};

ParsedAction parse_action(const std::string& action) {
    ParsedAction parsed;
    auto tokens = text::token_parse(action);
    for (const auto& [key, value] : tokens) {
        if (parsed.verb.empty()) {
            if (!value.empty()) {
                throw Error(Status::Usage, "action must start with a verb");
            }
            parsed.verb = key;
        } else if (value.empty()) {
            parsed.positional.push_back(key);
        } else {
            parsed.named.emplace_back(key, value);
        }
    }
    if (parsed.verb.empty()) {
        throw Error(Status::Usage, "empty action");
    }
    return parsed;
}

// What an action produced, alongside whether it matched the outcome the
// step declared. A mismatch fails the step; only exceptions block it.
struct ActionOutcome {
    std::string note;
    std::string fail_text;
};

std::string first_ip_not_in(const std::vector<std::string>& avoid) {
    for (int last = 1; last < 255; ++last) {
        std::string ip = "198.51.100." + std::to_string(last);
        bool listed = false;
        for (const auto& a : avoid) {
            if (a == ip) {
                listed = true;
                break;
            }
        }
        if (!listed) {
            return ip;
        }
    }
    return "192.0.2.1";
}

class CaseRunner {
  public:
    CaseRunner(const TestCase& tc, Environment& env) : tc_(tc), env_(env) {}

    CaseResult run() {
        auto started = std::chrono::steady_clock::now();
        CaseResult result;
        result.case_id = tc_.id;
        bool failed = false;
        bool blocked = false;
        for (const auto& step : tc_.steps) {
            StepResult sr;
            sr.no = step.no;
            sr.desc = step.desc;
            sr.apps = step.apps;
            if (blocked) {
                sr.status = StepStatus::NotRun;
                result.steps.push_back(std::move(sr));
                continue;
            }
            step_start_ = env_.bus().trace().size();
            bool step_failed = false;
            if (!step.action.empty() && step.action != "none") {
                try {
                    ActionOutcome out = dispatch(step.action);
                    sr.action_note = out.note;
                    if (!out.fail_text.empty()) {
                        sr.action_note = out.fail_text;
                        step_failed = true;
                    }
                } catch (const std::exception& e) {
                    sr.status = StepStatus::Blocked;
                    sr.action_note = e.what();
                    result.blocked_reason =
                        "step " + step.no.to_string() + ": " + e.what();
                    blocked = true;
                    result.steps.push_back(std::move(sr));
                    continue;
                }
            }
            for (const auto& a : step.asserts) {
                AssertionResult ar = evaluate(a);
                if (!ar.pass) {
                    step_failed = true;
                }
                sr.checks.push_back(std::move(ar));
            }
            sr.status = step_failed ? StepStatus::Fail : StepStatus::Pass;
            failed = failed || step_failed;
            result.steps.push_back(std::move(sr));
        }
        result.verdict =
            blocked ? Verdict::Blocked : (failed ? Verdict::Fail : Verdict::Pass);
        result.trace_export = env_.bus().export_text();
        result.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - started)
                                .count();
        return result;
    }

  private:
    storefront::CartSession& session() {
        if (!session_) {
            session_ = &env_.ols().new_session(env_.config().session_ip);
        }
        return *session_;
    }

    static std::string named_or(const ParsedAction& a, const std::string& key,
                                const std::string& fallback) {
        return text::kv_or(a.named, key, fallback);
    }

    static std::string named_need(const ParsedAction& a, const std::string& key) {
        auto v = text::kv_get(a.named, key);
        if (!v) {
            throw Error(Status::Usage, a.verb + ": missing " + key + "=");
        }
        return *v;
    }

    static ActionOutcome check_declared(const std::string& declared,
                                        const std::string& actual,
                                        const std::string& note) {
        ActionOutcome out;
        out.note = note;
        if (!declared.empty() && declared != actual) {
            out.fail_text = "declared outcome=" + declared + ", got " + actual +
                            " (" + note + ")";
        }
        return out;
    }

    ActionOutcome dispatch(const std::string& action) {
        ParsedAction a = parse_action(action);
        const auto& verb = a.verb;
        if (verb == "browse") {
            return do_browse(a);
        }
        if (verb == "check_availability") {
            return do_check_availability(a);
        }
        if (verb == "cart_checkout") {
            return do_cart_checkout(a);
        }
        if (verb == "set_addresses") {
            return do_set_addresses(a);
        }
        if (verb == "submit_payment") {
            return do_submit_payment(a, false);
        }
        if (verb == "resubmit_payment") {
            return do_submit_payment(a, true);
        }
        if (verb == "place_order") {
            return do_place_order(a);
        }
        if (verb == "run_fraud_batch") {
            return do_run_fraud_batch(a);
        }
        if (verb == "rtlog_emit") {
            return do_rtlog_emit(a);
        }
        if (verb == "resa_ingest") {
            return do_resa_ingest(a);
        }
        if (verb == "set_fault") {
            return do_set_fault(a);
        }
        if (verb == "advance_clock") {
            return do_advance_clock(a);
        }
        throw Error(Status::Usage, "unknown action '" + verb + "'");
    }

    ActionOutcome do_browse(const ParsedAction& a) {
        if (a.positional.size() != 1) {
            throw Error(Status::Usage, "browse wants one item id");
        }
        bool found = env_.ols().browse(session(), a.positional[0]);
        return check_declared(named_or(a, "outcome", ""), found ? "found" : "missing",
                              found ? "item found" : "item missing");
    }

    ActionOutcome do_check_availability(const ParsedAction& a) {
        if (a.positional.size() != 1) {
            throw Error(Status::Usage, "check_availability wants one item id");
        }
        auto r = env_.ols().check_availability(session(), a.positional[0]);
        std::string actual = text::to_lower(storefront::availability_name(r));
        return check_declared(named_or(a, "outcome", ""), actual,
                              "availability " + storefront::availability_name(r));
    }

    ActionOutcome do_cart_checkout(const ParsedAction& a) {
        if (a.positional.size() != 2) {
            throw Error(Status::Usage, "cart_checkout wants ITEM QTY");
        }
        int64_t qty = 0;
        try {
            qty = std::stoll(a.positional[1]);
        } catch (const std::exception&) {
            throw Error(Status::Usage, "cart_checkout: bad quantity");
        }
        env_.ols().cart_checkout(session(), a.positional[0], qty);
        ActionOutcome out;
        out.note = session().last_message;
        return out;
    }

    ActionOutcome do_set_addresses(const ParsedAction& a) {
        std::optional<storefront::PostalAddress> ship;
        std::optional<storefront::PostalAddress> bill;
        std::string ship_zip = named_or(a, "ship_zip", "");
        std::string bill_zip = named_or(a, "bill_zip", "");
        if (!ship_zip.empty()) {
            ship = storefront::PostalAddress{"1 Main St", "Springfield", "NY", ship_zip};
        }
        if (!bill_zip.empty()) {
            bill = storefront::PostalAddress{"2 Oak Ave", "Springfield", "NY", bill_zip};
        }
        env_.ols().set_addresses(session(), ship, bill);
        ActionOutcome out;
        out.note = "addresses set";
        return out;
    }

    ActionOutcome do_submit_payment(const ParsedAction& a, bool resubmit) {
        storefront::PaymentOutcome r;
        if (resubmit) {
            r = env_.ols().resubmit_payment(session());
        } else {
            domain::CardDetails card{domain::parse_network(named_need(a, "network")),
                                     domain::Pan::parse(named_need(a, "pan")),
                                     domain::parse_expiry(named_need(a, "expiry"))};
            r = env_.ols().submit_payment(session(), card);
        }
        std::string actual;
        switch (r) {
        case storefront::PaymentOutcome::Accepted:
            actual = "accepted";
            break;
        case storefront::PaymentOutcome::Declined:
            actual = "declined";
            break;
        case storefront::PaymentOutcome::GatewayUnavailable:
            actual = "gateway_unavailable";
            break;
        }
        std::string note = "payment " + actual;
        if (r != storefront::PaymentOutcome::Accepted) {
            note += ": " + session().last_error;
        }
        return check_declared(named_or(a, "outcome", ""), actual, note);
    }

    ActionOutcome do_place_order(const ParsedAction& a) {
        storefront::PlaceResult r = env_.ols().place_order(session());
        if (r.placed) {
            current_order_ = r.order_no;
        }
        std::string actual = r.placed ? "ok" : "error";
        std::string note = r.placed ? "placed " + r.order_no : "refused: " + r.error;
        ActionOutcome out = check_declared(named_or(a, "outcome", "ok"), actual, note);
        std::string needle = named_or(a, "error_contains", "");
        if (out.fail_text.empty() && !needle.empty() &&
            r.error.find(needle) == std::string::npos) {
            out.fail_text = "refusal text '" + r.error + "' lacks '" + needle + "'";
        }
        return out;
    }

    ActionOutcome do_run_fraud_batch(const ParsedAction&) {
        backoffice::BatchResult r = env_.oms().run_fraud_batch();
        std::ostringstream note;
        note << "released=" << r.released << " cancelled=" << r.cancelled
             << " deferred=" << r.deferred;
        ActionOutcome out;
        out.note = note.str();
        return out;
    }

    ActionOutcome do_rtlog_emit(const ParsedAction&) {
        backoffice::RtlogFile f = env_.oms().rtlog_emit();
        last_rtlog_ = f.content;
        ActionOutcome out;
        out.note = "emitted " + f.file_id;
        return out;
    }

    ActionOutcome do_resa_ingest(const ParsedAction& a) {
        if (last_rtlog_.empty()) {
            throw Error(Status::Sequence, "resa_ingest: no audit file emitted yet");
        }
        backoffice::AuditResult r = env_.resa().ingest(last_rtlog_);
        std::string actual =
            r.file_rejected ? "rejected" : (r.duplicate ? "duplicate" : "applied");
        std::ostringstream note;
        note << actual << " " << r.file_id << ": read=" << r.records_read
             << " rejected=" << r.records_rejected;
        return check_declared(named_or(a, "outcome", ""), actual, note.str());
    }

    ActionOutcome do_set_fault(const ParsedAction& a) {
        if (a.positional.size() != 2) {
            throw Error(Status::Usage, "set_fault wants SERVICE STATE");
        }
        env_.set_fault(netsim::parse_service(a.positional[0]),
                       netsim::parse_availability(a.positional[1]));
        ActionOutcome out;
        out.note = a.positional[0] + " now " + a.positional[1];
        return out;
    }

    ActionOutcome do_advance_clock(const ParsedAction& a) {
        if (a.positional.size() != 1) {
            throw Error(Status::Usage, "advance_clock wants an ISO-8601 instant");
        }
        env_.clock().advance_to(domain::parse_datetime(a.positional[0]));
        ActionOutcome out;
        out.note = "clock now " + a.positional[0];
        return out;
    }

    // ---- checks -----------------------------------------------------------

    AssertionResult evaluate(const Assertion& a) {
        AssertionResult ar;
        ar.assertion = a;
        ar.expected = assert_kind_tag(a.kind) + " " + a.raw;
        try {
            switch (a.kind) {
            case AssertKind::TraceRequestField:
                eval_trace(a, ar, true);
                break;
            case AssertKind::TraceResponseField:
                eval_trace(a, ar, false);
                break;
            case AssertKind::OrderStatus:
                eval_order_status(a, ar);
                break;
            case AssertKind::RtlogContains:
                eval_rtlog(a, ar);
                break;
            case AssertKind::InventoryEquals:
                eval_inventory(a, ar);
                break;
            case AssertKind::SessionError:
                eval_session(a, ar);
                break;
            case AssertKind::NoEnvelope:
                eval_no_envelope(a, ar);
                break;
            }
        } catch (const std::exception& e) {
            ar.pass = false;
            ar.observed = std::string("bad check: ") + e.what();
        }
        return ar;
    }

    static std::string param_or(const Assertion& a, const std::string& key,
                                const std::string& fallback) {
        return text::kv_or(a.params, key, fallback);
    }

    static bool param_present(const Assertion& a, const std::string& key) {
        return text::kv_get(a.params, key).has_value();
    }

    // equals / contains / matches against an observed value.
    void value_op(const Assertion& a, AssertionResult& ar, const std::string& value) {
        ar.observed = value;
        if (param_present(a, "equals")) {
            ar.pass = value == param_or(a, "equals", "");
            return;
        }
        if (param_present(a, "contains")) {
            ar.pass = value.find(param_or(a, "contains", "")) != std::string::npos;
            return;
        }
        if (param_present(a, "matches")) {
            std::regex re(param_or(a, "matches", ""));
            ar.pass = std::regex_search(value, re);
            return;
        }
        if (param_present(a, "mask_of_entered")) {
            if (!session_ || session_->last_entered_pan.empty()) {
                ar.pass = false;
                ar.observed = "(no account number entered)";
                return;
            }
            ar.pass =
                value ==
                domain::mask_pan(domain::Pan::parse(session_->last_entered_pan)).text;
            return;
        }
        if (param_present(a, "current_order")) {
            ar.pass = !current_order_.empty() && value == current_order_;
            return;
        }
        throw Error(Status::Usage, "check has no comparison parameter");
    }

    netsim::TraceFilter filter_of(const Assertion& a) {
        netsim::TraceFilter f;
        std::string from = param_or(a, "from", "");
        std::string to = param_or(a, "to", "");
        std::string kind = param_or(a, "kind", "");
        if (!from.empty()) {
            f.from = netsim::parse_service(from);
        }
        if (!to.empty()) {
            f.to = netsim::parse_service(to);
        }
        if (!kind.empty()) {
            f.kind = kind;
        }
        return f;
    }

    std::vector<netsim::Envelope> scoped_query(const Assertion& a,
                                               const std::string& default_scope) {
        std::string scope = param_or(a, "scope", default_scope);
        auto all = env_.bus().query(filter_of(a));
        if (scope == "case") {
            return all;
        }
        if (scope != "step") {
            throw Error(Status::Usage, "scope must be step or case");
        }
        // Envelope seq is 1-based and monotonic, so everything this step
        // produced sits past the trace length recorded at step start.
        std::vector<netsim::Envelope> out;
        for (const auto& env : all) {
            if (env.seq > step_start_) {
                out.push_back(env);
            }
        }
        return out;
    }

    static std::string feed_field(const storefront::OrderFeed& feed,
                                  const std::string& field) {
        if (field == "order_no") return feed.order_no;
        if (field == "status") return feed.status;
        if (field == "fraud_check_ind") return feed.fraud_check_ind;
        if (field == "customer_ip") return feed.customer_ip;
        if (field == "tax") return std::to_string(feed.tax);
        if (field == "total") return std::to_string(feed.total);
        if (field == "ship_to") return feed.ship_to;
        if (field == "bill_to") return feed.bill_to;
        if (!feed.lines.empty()) {
            if (field == "item") return feed.lines.front().item_id;
            if (field == "qty") return std::to_string(feed.lines.front().qty);
            if (field == "unit_price") return std::to_string(feed.lines.front().unit_price);
        }
        throw Error(Status::Usage, "unknown feed field '" + field + "'");
    }

    std::string extract_field(const std::string& payload, const std::string& kind,
                              const std::string& field) {
        if (field.empty() || field == "payload") {
            return payload;
        }
        if (!payload.empty() && payload.front() == '<') {
            return feed_field(storefront::parse_feed_xml(payload), field);
        }
        if (kind == netsim::kind::StatusSync) {
            auto [order_no, status] = storefront::parse_status_sync(payload);
            if (field == "order_no") return order_no;
            if (field == "status") return status;
            throw Error(Status::Usage, "unknown status sync field '" + field + "'");
        }
        auto kv = text::kv_parse(payload);
        auto v = text::kv_get(kv, field);
        if (!v) {
            return "(field '" + field + "' missing)";
        }
        return *v;
    }

    void eval_trace(const Assertion& a, AssertionResult& ar, bool request_side) {
        auto matches = scoped_query(a, "case");
        if (param_present(a, "count")) {
            int64_t want = std::stoll(param_or(a, "count", "0"));
            ar.observed = std::to_string(matches.size()) + " envelopes";
            ar.pass = static_cast<int64_t>(matches.size()) == want;
            return;
        }
        if (param_present(a, "absent")) {
            ar.observed = std::to_string(matches.size()) + " envelopes";
            ar.pass = matches.empty();
            return;
        }
        if (matches.empty()) {
            ar.pass = false;
            ar.observed = "no matching envelope";
            return;
        }
        if (param_present(a, "present")) {
            ar.observed = std::to_string(matches.size()) + " envelopes";
            ar.pass = true;
            return;
        }
        std::string index = param_or(a, "index", "last");
        const netsim::Envelope* env = nullptr;
        if (index == "last") {
            env = &matches.back();
        } else if (index == "first") {
            env = &matches.front();
        } else {
            size_t i = static_cast<size_t>(std::stoll(index));
            if (i < 1 || i > matches.size()) {
                ar.pass = false;
                ar.observed = "index " + index + " out of range (" +
                              std::to_string(matches.size()) + " envelopes)";
                return;
            }
            env = &matches[i - 1];
        }
        if (!request_side && param_present(a, "err")) {
            ar.pass = env->transport_error;
            ar.observed = env->transport_error ? "transport error" : env->reply;
            return;
        }
        if (!request_side && env->transport_error) {
            ar.pass = false;
            ar.observed = "transport error";
            return;
        }
        const std::string& payload = request_side ? env->payload : env->reply;
        value_op(a, ar, extract_field(payload, env->kind, param_or(a, "field", "")));
    }

    void eval_no_envelope(const Assertion& a, AssertionResult& ar) {
        auto matches = scoped_query(a, "step");
        ar.observed = std::to_string(matches.size()) + " envelopes";
        ar.pass = matches.empty();
    }

    void eval_order_status(const Assertion& a, AssertionResult& ar) {
        std::string order_no = param_or(a, "order", "current");
        if (order_no == "current") {
            if (current_order_.empty()) {
                ar.pass = false;
                ar.observed = "no order placed yet";
                return;
            }
            order_no = current_order_;
        }
        std::string want = param_or(a, "equals", "");
        if (want.empty()) {
            throw Error(Status::Usage, "order_status wants equals=");
        }
        std::string app = param_or(a, "app", "BOTH");
        auto ols_status = env_.ols().order_status(order_no);
        const backoffice::OmsOrder* oms_order = env_.oms().order(order_no);
        std::string ols_text = ols_status ? *ols_status : "(absent)";
        std::string oms_text =
            oms_order ? backoffice::oms_status_name(oms_order->status) : "(absent)";
        if (app == "OLS") {
            ar.observed = "OLS=" + ols_text;
            ar.pass = ols_text == want;
        } else if (app == "OMS") {
            ar.observed = "OMS=" + oms_text;
            ar.pass = oms_text == want;
        } else if (app == "BOTH") {
            ar.observed = "OLS=" + ols_text + " OMS=" + oms_text;
            ar.pass = ols_text == want && oms_text == want;
        } else {
            throw Error(Status::Usage, "app must be OLS, OMS or BOTH");
        }
    }

    void eval_rtlog(const Assertion& a, AssertionResult& ar) {
        std::string order_no = param_or(a, "order", "current");
        if (order_no == "current") {
            order_no = current_order_;
        }
        std::string tx = param_or(a, "tx", "");
        std::string item = param_or(a, "item", "");
        std::string qty = param_or(a, "qty", "");
        int64_t found = 0;
        for (const auto& line : text::split(env_.oms().rtlog_text(), '\n')) {
            auto fields = text::split(line, '|');
            if (fields.size() != 6 || fields[0] != "TTRAN") {
                continue;
            }
            if (!order_no.empty() && fields[1] != order_no) continue;
            if (!tx.empty() && fields[2] != tx) continue;
            if (!item.empty() && fields[3] != item) continue;
            if (!qty.empty() && fields[4] != qty) continue;
            ++found;
        }
        ar.observed = std::to_string(found) + " matching records";
        if (param_present(a, "count")) {
            ar.pass = found == std::stoll(param_or(a, "count", "0"));
        } else if (param_present(a, "absent")) {
            ar.pass = found == 0;
        } else {
            ar.pass = found > 0;
        }
    }

    void eval_inventory(const Assertion& a, AssertionResult& ar) {
        std::string item = param_or(a, "item", "");
        if (item.empty()) {
            throw Error(Status::Usage, "inventory wants item=");
        }
        auto soh = env_.oms().check_inventory(item);
        if (!soh) {
            ar.pass = false;
            ar.observed = "(unknown item)";
            return;
        }
        if (!param_present(a, "equals")) {
            throw Error(Status::Usage, "inventory wants equals=");
        }
        ar.observed = std::to_string(*soh);
        ar.pass = std::to_string(*soh) == param_or(a, "equals", "");
    }

    void eval_session(const Assertion& a, AssertionResult& ar) {
        if (!session_) {
            ar.pass = false;
            ar.observed = "(no session)";
            return;
        }
        std::string field = param_or(a, "field", "message");
        std::string value;
        if (field == "state") {
            value = storefront::session_state_name(session_->state);
        } else if (field == "message") {
            value = session_->last_message;
        } else if (field == "error") {
            value = session_->last_error;
        } else if (field == "order_no") {
            value = session_->order_no;
        } else {
            throw Error(Status::Usage, "unknown session field '" + field + "'");
        }
        value_op(a, ar, value);
    }

    const TestCase& tc_;
    Environment& env_;
    storefront::CartSession* session_ = nullptr;
    std::string current_order_;
    std::string last_rtlog_;
    size_t step_start_ = 0;
};

}  // namespace

ScenarioConfig resolve_config(const TestCase& tc,
                              const std::vector<ScenarioOverrides>& layers) {
    ScenarioConfig config;
    tc.prereq.apply(config);
    for (const auto& layer : layers) {
        layer.apply(config);
    }
    return config;
}

CaseResult run_case(const TestCase& tc, const std::vector<ScenarioOverrides>& layers) {
    CaseResult result;
    result.case_id = tc.id;
    ScenarioConfig config = resolve_config(tc, layers);
    std::optional<Environment> env;
    try {
        env.emplace(config);
    } catch (const std::exception& e) {
        result.verdict = Verdict::Blocked;
        result.blocked_reason = std::string("environment: ") + e.what();
        for (const auto& step : tc.steps) {
            StepResult sr;
            sr.no = step.no;
            sr.desc = step.desc;
            sr.apps = step.apps;
            sr.status = StepStatus::NotRun;
            result.steps.push_back(std::move(sr));
        }
        return result;
    }
    CaseRunner runner(tc, *env);
    return runner.run();
}

SmokeResult run_smoke(Environment& env) {
    SmokeResult r;
    const std::string item = "SMK-001";
    if (!env.oms().check_inventory(item)) {
        env.oms().seed_stock(item, 5);
    }
    if (!env.ols().price(item)) {
        env.ols().set_price(item, domain::make_money(1999, "USD"));
    }
    int64_t soh_before = *env.oms().check_inventory(item);

    auto& session = env.ols().new_session(first_ip_not_in(env.config().fraud_ips));

    if (env.ols().check_availability(session, item) !=
        storefront::AvailabilityResult::Available) {
        r.failed_boundary = "availability";
        r.detail = session.last_error.empty() ? session.last_message
                                              : session.last_error;
        return r;
    }
    try {
        env.ols().cart_checkout(session, item, 1);
        env.ols().set_addresses(session, std::nullopt, std::nullopt);
        domain::CardDetails card{domain::CardNetwork::Visa,
                                 domain::Pan::parse("4111111111111111"),
                                 domain::parse_expiry("12/2099")};
        if (env.ols().submit_payment(session, card) !=
            storefront::PaymentOutcome::Accepted) {
            r.failed_boundary = "payment";
            r.detail = session.last_error;
            return r;
        }
        storefront::PlaceResult placed = env.ols().place_order(session);
        if (!placed.placed) {
            r.failed_boundary = "placement";
            r.detail = placed.error;
            return r;
        }
        env.oms().run_fraud_batch();
        const backoffice::OmsOrder* order = env.oms().order(placed.order_no);
        if (!order || order->status != backoffice::OmsStatus::Released) {
            bool still_queued = order && order->status == backoffice::OmsStatus::Created;
            r.failed_boundary = still_queued ? "screening-unavailable" : "screening";
            r.detail = "order " + placed.order_no + " is " +
                       (order ? backoffice::oms_status_name(order->status) : "absent");
            return r;
        }
        backoffice::RtlogFile file = env.oms().rtlog_emit();
        if (file.content.find("|" + placed.order_no + "|ORDF|") == std::string::npos) {
            r.failed_boundary = "audit-log";
            r.detail = "no fulfilment record for " + placed.order_no;
            return r;
        }
        backoffice::AuditResult audit = env.resa().ingest(file.content);
        int64_t soh_after = *env.oms().check_inventory(item);
        if (audit.file_rejected || audit.records_rejected > 0 ||
            soh_after != soh_before - 1) {
            r.failed_boundary = "audit-apply";
            std::ostringstream detail;
            detail << "stock " << soh_before << " -> " << soh_after;
            if (!audit.error.empty()) {
                detail << "; " << audit.error;
            }
            r.detail = detail.str();
            return r;
        }
    } catch (const std::exception& e) {
        r.failed_boundary = "drive";
        r.detail = e.what();
        return r;
    }
    r.pass = true;
    return r;
}

SmokeResult run_smoke(const ScenarioConfig& config) {
    try {
        Environment env(config);
        return run_smoke(env);
    } catch (const std::exception& e) {
        SmokeResult r;
        r.failed_boundary = "environment";
        r.detail = e.what();
        return r;
    }
}

std::string render_text(const CaseResult& result) {
    std::ostringstream out;
    out << "case " << result.case_id << "\n";
    for (const auto& step : result.steps) {
        out << "step " << step.no.to_string() << " | " << step_status_name(step.status)
            << " | " << (step.apps.empty() ? "-" : step.apps) << " | " << step.desc
            << "\n";
        if (!step.action_note.empty()) {
            out << "  note: " << step.action_note << "\n";
        }
        for (const auto& check : step.checks) {
            out << "  [" << (check.pass ? "ok" : "FAIL") << "] " << check.expected
                << "\n";
            out << "       observed: " << check.observed << "\n";
        }
    }
    if (!result.blocked_reason.empty()) {
        out << "blocked: " << result.blocked_reason << "\n";
    }
    out << "verdict " << verdict_name(result.verdict) << "\n";
    return out.str();
}

std::string render_structured(const CaseResult& result) {
    std::ostringstream out;
    ordered_json head;
    head["type"] = "case";
    head["id"] = result.case_id;
    out << head.dump() << "\n";
    for (const auto& step : result.steps) {
        ordered_json j;
        j["type"] = "step";
        j["no"] = step.no.to_string();
        j["status"] = step_status_name(step.status);
        j["apps"] = step.apps;
        j["desc"] = step.desc;
        if (!step.action_note.empty()) {
            j["note"] = step.action_note;
        }
        ordered_json checks = ordered_json::array();
        for (const auto& check : step.checks) {
            ordered_json c;
            c["check"] = assert_kind_tag(check.assertion.kind);
            c["pass"] = check.pass;
            c["expected"] = check.expected;
            c["observed"] = check.observed;
            checks.push_back(c);
        }
        j["checks"] = checks;
        out << j.dump() << "\n";
    }
    ordered_json tail;
    tail["type"] = "verdict";
    tail["verdict"] = verdict_name(result.verdict);
    if (!result.blocked_reason.empty()) {
        tail["blocked_reason"] = result.blocked_reason;
    }
    out << tail.dump() << "\n";
    return out.str();
}

}  // namespace itb::testkit
