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
#include "storefront/order_feed.hpp"

namespace itb::backoffice {

enum class FraudCleared { Unset, Y, N };
enum class OmsStatus { Created, Cancelled, Released };

std::string fraud_cleared_name(FraudCleared f);
std::string oms_status_name(OmsStatus s);

struct OmsOrder {
    std::string order_no;
    OmsStatus status = OmsStatus::Created;
    std::string fraud_check_ind;  // Y or N, from the feed
    FraudCleared fraud_cleared = FraudCleared::Unset;
    std::string customer_ip;
    std::vector<storefront::FeedLine> lines;
    int64_t tax = 0;
    int64_t total = 0;
};

enum class RtlogTx { Ordc, Ordf };

std::string rtlog_tx_name(RtlogTx tx);

// One sales-audit transaction line. ORDC marks a cancelled order (no
// inventory effect downstream), ORDF a fulfilled one.
struct RtlogRecord {
    std::string order_no;
    RtlogTx tx = RtlogTx::Ordf;
    std::string item_id;
    int64_t qty = 0;
    std::string ts;
};

struct RtlogFile {
    std::string file_id;
    std::string content;
};

struct BatchOutcome {
    std::string order_no;
    std::string result;  // Released, Cancelled, Deferred
};

struct BatchResult {
    int64_t released = 0;
    int64_t cancelled = 0;
    int64_t deferred = 0;
    std::vector<BatchOutcome> outcomes;
};

// Order management. Holds stock on hand, the authoritative order store,
// the deferred-screening queue and the pending sales-audit records.
class Oms {
  public:
    Oms(netsim::Bus* bus, const domain::SimClock* clock);

    void seed_stock(const std::string& item_id, int64_t qty);
    std::optional<int64_t> check_inventory(const std::string& item_id) const;
    const std::map<std::string, int64_t>& inventory() const { return inventory_; }

    const OmsOrder* order(const std::string& order_no) const;
    const std::map<std::string, OmsOrder>& orders() const { return orders_; }
    const std::vector<std::string>& screening_queue() const { return queue_; }

    // Screens every queued order through the fraud engine, then promotes
    // orders the storefront already cleared inline. A fraud transport
    // failure leaves the remaining queue untouched for the next run.
    BatchResult run_fraud_batch();

    // Frames all pending audit records into one file and clears them.
    RtlogFile rtlog_emit();
    const std::vector<RtlogFile>& emitted_files() const { return emitted_; }
    const std::vector<RtlogRecord>& pending_rtlog() const { return pending_; }
    // Every emitted file concatenated, for containment checks.
    std::string rtlog_text() const;

    void attach(netsim::Bus& bus);

  private:
    std::string handle_inv_check(const std::string& payload);
    std::string handle_order_feed(const std::string& payload);
    std::string handle_inv_apply(const std::string& payload);
    void finish_order(OmsOrder& order, bool cleared);

    netsim::Bus* bus_;
    const domain::SimClock* clock_;
    std::map<std::string, int64_t> inventory_;
    std::map<std::string, OmsOrder> orders_;
    std::vector<std::string> arrival_;  // feed arrival order, for determinism
    std::vector<std::string> queue_;    // deferred screening, FIFO
    std::vector<RtlogRecord> pending_;
    std::vector<RtlogFile> emitted_;
    int64_t file_counter_ = 0;
};

struct AuditRecordIssue {
    int line = 0;
    std::string reason;
};

struct AuditResult {
    std::string file_id;
    bool file_rejected = false;
    bool duplicate = false;
    std::string error;
    int64_t records_read = 0;
    int64_t records_rejected = 0;
    std::vector<AuditRecordIssue> issues;
    std::map<std::string, int64_t> deltas;  // item -> applied delta (negative)
};

// Sales audit. Ingests emitted files, keeps a ledger of seen file ids so
// a replayed file never applies twice, and pushes fulfilment deltas back
// into order management stock.
class Resa {
  public:
    explicit Resa(netsim::Bus* bus) : bus_(bus) {}

    AuditResult ingest(const std::string& file_text);
    const std::set<std::string>& ingested_ids() const { return ingested_; }

  private:
    netsim::Bus* bus_;
    std::set<std::string> ingested_;
};

}  // namespace itb::backoffice
