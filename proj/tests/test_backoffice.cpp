// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "doctest.h"
#include "environment.hpp"

using namespace itb;
using namespace itb::backoffice;
using itb::netsim::Availability;
using itb::netsim::ServiceId;

namespace {

ScenarioConfig batch_config() {
    ScenarioConfig config;
    config.clock_start = "2012-01-01T09:00:00";
    config.stock["ITEM-1"] = 10;
    config.prices["ITEM-1"] = domain::make_money(4999, "USD");
    config.faults.emplace_back(ServiceId::FRAUD, Availability::Offline);
    return config;
}

// Walks one session to a placed order and returns its number.
std::string place_one(Environment& env, const std::string& ip, int64_t qty = 1) {
    auto& s = env.ols().new_session(ip);
    env.ols().cart_checkout(s, "ITEM-1", qty);
    env.ols().set_addresses(s, std::nullopt, std::nullopt);
    domain::CardDetails card{domain::CardNetwork::Visa,
                             domain::Pan::parse("4111111111111111"),
                             domain::parse_expiry("12/2099")};
    REQUIRE(env.ols().submit_payment(s, card) == storefront::PaymentOutcome::Accepted);
    auto r = env.ols().place_order(s);
    REQUIRE(r.placed);
    return r.order_no;
}

}  // namespace

TEST_CASE("inventory checks answer from stock on hand") {
    Environment env(batch_config());
    auto reply = env.bus().send(ServiceId::OLS, ServiceId::OMS, netsim::kind::InvCheck,
                                text::kv_build({{"item", "ITEM-1"}}));
    REQUIRE(reply.ok());
    auto kv = text::kv_parse(reply.payload);
    CHECK(text::kv_need(kv, "soh") == "10");
    CHECK(text::kv_need(kv, "availability") == "Available");

    auto missing = env.bus().send(ServiceId::OLS, ServiceId::OMS, netsim::kind::InvCheck,
                                  text::kv_build({{"item", "NOPE"}}));
    CHECK(text::kv_or(text::kv_parse(missing.payload), "error", "") == "unknown-item");
}

TEST_CASE("feeds with indicator N queue for screening, Y do not") {
    auto config = batch_config();
    config.faults.clear();  // fraud engine UP, inline screening marks Y
    Environment env(config);
    auto cleared = place_one(env, "198.51.100.7");
    CHECK(env.oms().screening_queue().empty());
    const auto* order = env.oms().order(cleared);
    REQUIRE(order != nullptr);
    CHECK(order->fraud_check_ind == "Y");
    CHECK(order->fraud_cleared == FraudCleared::Y);
    CHECK(order->status == OmsStatus::Created);
}

TEST_CASE("duplicate order numbers are refused at the feed boundary") {
    Environment env(batch_config());
    auto order_no = place_one(env, "198.51.100.7");
    const auto* order = env.oms().order(order_no);
    REQUIRE(order != nullptr);

    storefront::OrderFeed feed;
    feed.order_no = order_no;
    feed.status = "Created";
    feed.fraud_check_ind = "N";
    feed.customer_ip = "198.51.100.7";
    feed.lines.push_back({"ITEM-1", 1, 4999});
    feed.tax = 400;
    feed.total = 5399;
    auto reply = env.bus().send(ServiceId::OLS, ServiceId::OMS, netsim::kind::OrderFeed,
                                storefront::feed_to_xml(feed));
    REQUIRE(reply.ok());
    CHECK(text::kv_or(text::kv_parse(reply.payload), "error", "") == "duplicate-order");
}

TEST_CASE("malformed feeds come back as sanitized in-band schema errors") {
    Environment env(batch_config());
    auto reply = env.bus().send(ServiceId::OLS, ServiceId::OMS, netsim::kind::OrderFeed,
                                "<Order><OrderNo>W1</OrderNo>");
    REQUIRE(reply.ok());
    auto kv = text::kv_parse(reply.payload);
    std::string err = text::kv_need(kv, "error");
    CHECK(err.rfind("schema", 0) == 0);
    CHECK(err.find(';') == std::string::npos);
    CHECK(err.find('=') == std::string::npos);
}

TEST_CASE("deferred batch releases clean orders and cancels listed ones") {
    auto config = batch_config();
    config.fraud_ips.push_back("198.51.100.66");
    Environment env(config);

    auto good = place_one(env, "198.51.100.7", 2);
    auto bad = place_one(env, "198.51.100.66", 1);
    CHECK(env.oms().screening_queue() == std::vector<std::string>{good, bad});

    auto batch = env.oms().run_fraud_batch();
    CHECK(batch.released == 1);
    CHECK(batch.cancelled == 1);
    CHECK(batch.deferred == 0);
    REQUIRE(batch.outcomes.size() == 2);
    CHECK(batch.outcomes[0].order_no == good);
    CHECK(batch.outcomes[0].result == "Released");
    CHECK(batch.outcomes[1].result == "Cancelled");

    CHECK(env.oms().order(good)->status == OmsStatus::Released);
    CHECK(env.oms().order(bad)->status == OmsStatus::Cancelled);
    CHECK(env.oms().screening_queue().empty());

    // The storefront heard both outcomes.
    CHECK(env.ols().order_status(good) == std::optional<std::string>("Released"));
    CHECK(env.ols().order_status(bad) == std::optional<std::string>("Cancelled"));

    // Release does not touch stock; that happens through the audit flow.
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(10));

    // Pending audit records: ORDF for the release, ORDC for the cancel.
    REQUIRE(env.oms().pending_rtlog().size() == 2);
    CHECK(env.oms().pending_rtlog()[0].tx == RtlogTx::Ordf);
    CHECK(env.oms().pending_rtlog()[0].qty == 2);
    CHECK(env.oms().pending_rtlog()[1].tx == RtlogTx::Ordc);
}

TEST_CASE("a fraud transport failure defers the rest of the queue") {
    Environment env(batch_config());
    auto first = place_one(env, "198.51.100.7");
    auto second = place_one(env, "198.51.100.8");

    env.set_fault(ServiceId::FRAUD, Availability::Down);
    auto batch = env.oms().run_fraud_batch();
    CHECK(batch.released == 0);
    CHECK(batch.cancelled == 0);
    CHECK(batch.deferred == 2);
    CHECK(env.oms().screening_queue() == std::vector<std::string>{first, second});
    CHECK(env.oms().order(first)->status == OmsStatus::Created);

    // Exactly one screen attempt went out; the second was never sent.
    netsim::TraceFilter f;
    f.kind = netsim::kind::FraudScreen;
    CHECK(env.bus().query(f).size() == 1);

    env.set_fault(ServiceId::FRAUD, Availability::Offline);
    auto retry = env.oms().run_fraud_batch();
    CHECK(retry.released == 2);
    CHECK(env.oms().screening_queue().empty());
}

TEST_CASE("the batch promotes orders the storefront already cleared inline") {
    auto config = batch_config();
    config.faults.clear();
    Environment env(config);
    auto order_no = place_one(env, "198.51.100.7");
    CHECK(env.oms().order(order_no)->status == OmsStatus::Created);

    // The storefront screened inline at placement; that is the only
    // screen request in the trace, the batch adds none.
    netsim::TraceFilter f;
    f.kind = netsim::kind::FraudScreen;
    auto screens_before = env.bus().query(f).size();
    CHECK(screens_before == 1);

    auto batch = env.oms().run_fraud_batch();
    CHECK(batch.released == 1);
    CHECK(env.oms().order(order_no)->status == OmsStatus::Released);
    CHECK(env.ols().order_status(order_no) == std::optional<std::string>("Released"));
    CHECK(env.bus().query(f).size() == screens_before);
}

TEST_CASE("audit files are framed, numbered, and drained on emit") {
    Environment env(batch_config());
    auto order_no = place_one(env, "198.51.100.7", 3);
    env.oms().run_fraud_batch();
    REQUIRE(env.oms().pending_rtlog().size() == 1);

    auto file = env.oms().rtlog_emit();
    CHECK(file.file_id == "RTLOG-000001");
    CHECK(env.oms().pending_rtlog().empty());

    auto lines = text::split(text::trim(file.content), '\n');
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "FHEAD|RTLOG-000001|2012-01-01T09:00:00");
    CHECK(lines[1] == "TTRAN|" + order_no + "|ORDF|ITEM-1|3|2012-01-01T09:00:00");
    CHECK(lines[2] == "FTAIL|1");
    CHECK(file.content.back() == '\n');

    auto empty = env.oms().rtlog_emit();
    CHECK(empty.file_id == "RTLOG-000002");
    auto empty_lines = text::split(text::trim(empty.content), '\n');
    REQUIRE(empty_lines.size() == 2);
    CHECK(empty_lines[1] == "FTAIL|0");
}

TEST_CASE("sales audit applies fulfilments once and skips cancellations") {
    auto config = batch_config();
    config.fraud_ips.push_back("198.51.100.66");
    Environment env(config);
    auto good = place_one(env, "198.51.100.7", 2);
    auto bad = place_one(env, "198.51.100.66", 5);
    env.oms().run_fraud_batch();
    auto file = env.oms().rtlog_emit();

    auto result = env.resa().ingest(file.content);
    CHECK_FALSE(result.file_rejected);
    CHECK_FALSE(result.duplicate);
    CHECK(result.records_read == 2);
    CHECK(result.records_rejected == 0);
    CHECK(result.deltas == std::map<std::string, int64_t>{{"ITEM-1", -2}});
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(8));

    // Replaying the same file is flagged and applies nothing.
    auto replay = env.resa().ingest(file.content);
    CHECK(replay.duplicate);
    CHECK(replay.deltas.empty());
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(8));
    CHECK(env.resa().ingested_ids().count("RTLOG-000001") == 1);
}

TEST_CASE("a tampered trailer count rejects the whole file") {
    Environment env(batch_config());
    place_one(env, "198.51.100.7");
    env.oms().run_fraud_batch();
    auto file = env.oms().rtlog_emit();

    auto broken = file.content;
    auto pos = broken.find("FTAIL|1");
    REQUIRE(pos != std::string::npos);
    broken.replace(pos, 7, "FTAIL|9");
    auto result = env.resa().ingest(broken);
    CHECK(result.file_rejected);
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(10));
    // A rejected file is not remembered as ingested.
    CHECK(env.resa().ingested_ids().empty());
}

TEST_CASE("framing requires head and tail") {
    Environment env(batch_config());
    CHECK(env.resa().ingest("TTRAN|W1|ORDF|ITEM-1|1|t\n").file_rejected);
    CHECK(env.resa().ingest("").file_rejected);
    CHECK(env.resa().ingest("FHEAD|RTLOG-000009|t\n").file_rejected);
}

TEST_CASE("bad records are rejected line by line, good ones still apply") {
    Environment env(batch_config());
    auto good = place_one(env, "198.51.100.7", 1);
    env.oms().run_fraud_batch();
    auto file = env.oms().rtlog_emit();

    // Splice a malformed record in front of the good one and fix the count.
    auto lines = text::split(text::trim(file.content), '\n');
    REQUIRE(lines.size() == 3);
    std::string doctored = lines[0] + "\n" +
                           "TTRAN|W000000099|ORDX|ITEM-1|1|ts\n" +
                           "TTRAN|W000000098|ORDF|ITEM-1|oops|ts\n" +
                           lines[1] + "\n" + "FTAIL|3\n";
    auto result = env.resa().ingest(doctored);
    CHECK_FALSE(result.file_rejected);
    CHECK(result.records_read == 3);
    CHECK(result.records_rejected == 2);
    REQUIRE(result.issues.size() == 2);
    CHECK(result.issues[0].line == 2);
    CHECK(result.issues[1].line == 3);
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(9));
}

TEST_CASE("inventory application refuses bad deltas in-band") {
    Environment env(batch_config());
    auto send_apply = [&](const std::string& item, const std::string& delta) {
        auto reply = env.bus().send(ServiceId::RESA, ServiceId::OMS,
                                    netsim::kind::InvApply,
                                    text::kv_build({{"item", item}, {"delta", delta}}));
        REQUIRE(reply.ok());
        return text::kv_parse(reply.payload);
    };

    auto ok = send_apply("ITEM-1", "-4");
    CHECK(text::kv_need(ok, "ok") == "1");
    CHECK(text::kv_need(ok, "soh") == "6");

    CHECK(text::kv_need(send_apply("NOPE", "-1"), "error") == "unknown-item");
    CHECK(text::kv_need(send_apply("ITEM-1", "-7"), "error") == "insufficient-stock");
    CHECK(text::kv_need(send_apply("ITEM-1", "1"), "error") == "bad-delta");
    CHECK(text::kv_need(send_apply("ITEM-1", "zero"), "error") == "bad-delta");
    CHECK(env.oms().check_inventory("ITEM-1") == std::optional<int64_t>(6));
}
