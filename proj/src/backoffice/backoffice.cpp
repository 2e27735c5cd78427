// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "backoffice/backoffice.hpp"

#include <algorithm>
#include <sstream>

#include "storefront/messages.hpp"
#include "util/text.hpp"

namespace itb::backoffice {

using netsim::Bus;
using netsim::Envelope;
using netsim::Reply;
using netsim::ServiceId;

namespace {

// In-band error replies ride the k=v codec, which reserves ';' and '='.
std::string sanitize_reason(std::string reason) {
    for (char& c : reason) {
        if (c == ';' || c == '=') {
            c = ',';
        }
    }
    return reason;
}

std::string error_reply(const std::string& reason) {
    return text::kv_build({{"error", sanitize_reason(reason)}});
}

}  // namespace

std::string fraud_cleared_name(FraudCleared f) {
    switch (f) {
    case FraudCleared::Unset:
        return "Unset";
    case FraudCleared::Y:
        return "Y";
    case FraudCleared::N:
        return "N";
    }
    return "Unset";
}

std::string oms_status_name(OmsStatus s) {
    switch (s) {
    case OmsStatus::Created:
        return "Created";
    case OmsStatus::Cancelled:
        return "Cancelled";
    case OmsStatus::Released:
        return "Released";
    }
    return "Created";
}

std::string rtlog_tx_name(RtlogTx tx) {
    return tx == RtlogTx::Ordc ? "ORDC" : "ORDF";
}

Oms::Oms(Bus* bus, const domain::SimClock* clock) : bus_(bus), clock_(clock) {}

void Oms::seed_stock(const std::string& item_id, int64_t qty) {
    if (qty < 0) {
        throw Error(Status::Usage, "stock for " + item_id + " cannot be negative");
    }
    inventory_[item_id] = qty;
}

std::optional<int64_t> Oms::check_inventory(const std::string& item_id) const {
    auto it = inventory_.find(item_id);
    if (it == inventory_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const OmsOrder* Oms::order(const std::string& order_no) const {
    auto it = orders_.find(order_no);
    return it == orders_.end() ? nullptr : &it->second;
}

void Oms::attach(Bus& bus) {
    bus.register_handler(ServiceId::OMS, [this](const Envelope& env) {
        if (env.kind == netsim::kind::InvCheck) {
            return handle_inv_check(env.payload);
        }
        if (env.kind == netsim::kind::OrderFeed) {
            return handle_order_feed(env.payload);
        }
        if (env.kind == netsim::kind::InvApply) {
            return handle_inv_apply(env.payload);
        }
        throw Error(Status::Usage, "order management: unexpected kind " + env.kind);
    });
}

std::string Oms::handle_inv_check(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    std::string item = text::kv_need(kv, "item");
    auto soh = check_inventory(item);
    if (!soh) {
        return error_reply("unknown-item");
    }
    return text::kv_build({{"item", item},
                           {"soh", std::to_string(*soh)},
                           {"availability", *soh > 0 ? "Available" : "Unavailable"}});
}

std::string Oms::handle_order_feed(const std::string& payload) {
    storefront::OrderFeed feed;
    try {
        feed = storefront::parse_feed_xml(payload);
    } catch (const Error& e) {
        return error_reply(e.what());
    }
    if (orders_.count(feed.order_no)) {
        return error_reply("duplicate-order");
    }
    OmsOrder order;
    order.order_no = feed.order_no;
    order.status = OmsStatus::Created;
    order.fraud_check_ind = feed.fraud_check_ind;
    order.fraud_cleared =
        feed.fraud_check_ind == "Y" ? FraudCleared::Y : FraudCleared::Unset;
    order.customer_ip = feed.customer_ip;
    order.lines = feed.lines;
    order.tax = feed.tax;
    order.total = feed.total;
    orders_[order.order_no] = std::move(order);
    arrival_.push_back(feed.order_no);
    if (feed.fraud_check_ind == "N") {
        queue_.push_back(feed.order_no);
    }
    return text::kv_build({{"ok", "1"}, {"order", feed.order_no}});
}

std::string Oms::handle_inv_apply(const std::string& payload) {
    auto kv = text::kv_parse(payload);
    std::string item = text::kv_need(kv, "item");
    int64_t delta = 0;
    try {
        delta = std::stoll(text::kv_need(kv, "delta"));
    } catch (const std::exception&) {
        return error_reply("bad-delta");
    }
    // This channel only carries fulfilment decrements; a positive delta
    // means a corrupted audit record.
    if (delta > 0) {
        return error_reply("bad-delta");
    }
    auto it = inventory_.find(item);
    if (it == inventory_.end()) {
        return error_reply("unknown-item");
    }
    if (it->second + delta < 0) {
        return error_reply("insufficient-stock");
    }
    it->second += delta;
    return text::kv_build({{"ok", "1"}, {"soh", std::to_string(it->second)}});
}

void Oms::finish_order(OmsOrder& order, bool cleared) {
    order.fraud_cleared = cleared ? FraudCleared::Y : FraudCleared::N;
    order.status = cleared ? OmsStatus::Released : OmsStatus::Cancelled;
    std::string ts = domain::format_datetime(clock_->now());
    for (const auto& line : order.lines) {
        pending_.push_back(RtlogRecord{order.order_no,
                                       cleared ? RtlogTx::Ordf : RtlogTx::Ordc,
                                       line.item_id, line.qty, ts});
    }
    bus_->send(ServiceId::OMS, ServiceId::OLS, netsim::kind::StatusSync,
               storefront::status_sync_payload(order.order_no,
                                               oms_status_name(order.status)));
}

BatchResult Oms::run_fraud_batch() {
    BatchResult result;
    std::vector<std::string> remaining;
    bool fraud_unreachable = false;
    for (size_t i = 0; i < queue_.size(); ++i) {
        const std::string& order_no = queue_[i];
        auto it = orders_.find(order_no);
        if (it == orders_.end()) {
            continue;
        }
        if (fraud_unreachable) {
            remaining.push_back(order_no);
            ++result.deferred;
            result.outcomes.push_back(BatchOutcome{order_no, "Deferred"});
            continue;
        }
        storefront::ScreenRequest req{order_no, it->second.customer_ip};
        Reply r = bus_->send(ServiceId::OMS, ServiceId::FRAUD,
                             netsim::kind::FraudScreen, req.to_payload());
        if (r.transport_error) {
            fraud_unreachable = true;
            remaining.push_back(order_no);
            ++result.deferred;
            result.outcomes.push_back(BatchOutcome{order_no, "Deferred"});
            continue;
        }
        storefront::ScreenResult sr = storefront::ScreenResult::from_payload(r.payload);
        finish_order(it->second, sr.cleared);
        if (sr.cleared) {
            ++result.released;
            result.outcomes.push_back(BatchOutcome{order_no, "Released"});
        } else {
            ++result.cancelled;
            result.outcomes.push_back(BatchOutcome{order_no, "Cancelled"});
        }
    }
    queue_ = std::move(remaining);

    // Orders the storefront cleared inline arrive already marked Y and
    // never enter the queue; the batch run releases them here.
    for (const auto& order_no : arrival_) {
        auto it = orders_.find(order_no);
        if (it == orders_.end()) {
            continue;
        }
        OmsOrder& order = it->second;
        if (order.status == OmsStatus::Created && order.fraud_cleared == FraudCleared::Y) {
            finish_order(order, true);
            ++result.released;
            result.outcomes.push_back(BatchOutcome{order_no, "Released"});
        }
    }
    return result;
}

RtlogFile Oms::rtlog_emit() {
    ++file_counter_;
    RtlogFile file;
    file.file_id = "RTLOG-" + text::pad_int(file_counter_, 6);
    std::ostringstream out;
    out << "FHEAD|" << file.file_id << "|" << domain::format_datetime(clock_->now())
        << "\n";
    for (const auto& rec : pending_) {
        out << "TTRAN|" << rec.order_no << "|" << rtlog_tx_name(rec.tx) << "|"
            << rec.item_id << "|" << rec.qty << "|" << rec.ts << "\n";
    }
    out << "FTAIL|" << pending_.size() << "\n";
    file.content = out.str();
    pending_.clear();
    emitted_.push_back(file);
    return file;
}

std::string Oms::rtlog_text() const {
    std::string all;
    for (const auto& f : emitted_) {
        all += f.content;
    }
    return all;
}

AuditResult Resa::ingest(const std::string& file_text) {
    AuditResult result;
    std::vector<std::string> lines;
    for (auto& line : text::split(file_text, '\n')) {
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    if (lines.size() < 2) {
        result.file_rejected = true;
        result.error = "framing: missing header or trailer";
        return result;
    }
    auto head = text::split(lines.front(), '|');
    if (head.size() != 3 || head[0] != "FHEAD") {
        result.file_rejected = true;
        result.error = "framing: bad header";
        return result;
    }
    result.file_id = head[1];
    auto tail = text::split(lines.back(), '|');
    if (tail.size() != 2 || tail[0] != "FTAIL") {
        result.file_rejected = true;
        result.error = "framing: bad trailer";
        return result;
    }
    std::vector<std::vector<std::string>> records;
    for (size_t i = 1; i + 1 < lines.size(); ++i) {
        auto fields = text::split(lines[i], '|');
        if (fields.empty() || fields[0] != "TTRAN") {
            result.file_rejected = true;
            result.error = "framing: unexpected line " + std::to_string(i + 1);
            return result;
        }
        records.push_back(std::move(fields));
    }
    int64_t declared = -1;
    try {
        declared = std::stoll(tail[1]);
    } catch (const std::exception&) {
        declared = -1;
    }
    if (declared != static_cast<int64_t>(records.size())) {
        // A short or long file means truncation or corruption; nothing in
        // it can be trusted, so no record is applied.
        result.file_rejected = true;
        result.error = "framing: trailer count " + tail[1] + " does not match " +
                       std::to_string(records.size()) + " records";
        return result;
    }
    result.records_read = static_cast<int64_t>(records.size());
    if (ingested_.count(result.file_id)) {
        result.duplicate = true;
        return result;
    }
    ingested_.insert(result.file_id);

    for (size_t i = 0; i < records.size(); ++i) {
        const auto& fields = records[i];
        int line_no = static_cast<int>(i) + 2;
        if (fields.size() != 6) {
            ++result.records_rejected;
            result.issues.push_back(AuditRecordIssue{line_no, "bad field count"});
            continue;
        }
        const std::string& tx = fields[2];
        if (tx == "ORDC") {
            continue;  // cancelled order, no stock effect
        }
        if (tx != "ORDF") {
            ++result.records_rejected;
            result.issues.push_back(AuditRecordIssue{line_no, "unknown tx " + tx});
            continue;
        }
        int64_t qty = 0;
        try {
            qty = std::stoll(fields[4]);
        } catch (const std::exception&) {
            qty = -1;
        }
        if (qty < 0) {
            ++result.records_rejected;
            result.issues.push_back(AuditRecordIssue{line_no, "bad quantity"});
            continue;
        }
        const std::string& item = fields[3];
        Reply r = bus_->send(ServiceId::RESA, ServiceId::OMS, netsim::kind::InvApply,
                             text::kv_build({{"item", item},
                                             {"delta", std::to_string(-qty)}}));
        if (r.transport_error) {
            ++result.records_rejected;
            result.issues.push_back(
                AuditRecordIssue{line_no, "order management unreachable"});
            continue;
        }
        auto kv = text::kv_parse(r.payload);
        std::string err = text::kv_or(kv, "error", "");
        if (!err.empty()) {
            ++result.records_rejected;
            result.issues.push_back(AuditRecordIssue{line_no, err});
            continue;
        }
        result.deltas[item] += -qty;
    }
    return result;
}

}  // namespace itb::backoffice
