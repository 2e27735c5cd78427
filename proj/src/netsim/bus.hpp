// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "util/text.hpp"

namespace itb::netsim {

enum class ServiceId { OLS, WEBSVC, MERCHANT, FRAUD, OMS, RESA, TAX };

std::string service_name(ServiceId s);
ServiceId parse_service(const std::string& name);  // throws Error(Usage)
const std::vector<ServiceId>& all_services();

// UP: requests are delivered. DOWN: transport failure, handler never runs.
// OFFLINE: deliverable, but callers that screen inline must not consult the
// service at checkout; it is only valid for FRAUD (deferred batch screening).
enum class Availability { Up, Down, Offline };

std::string availability_name(Availability a);
Availability parse_availability(const std::string& name);  // throws Error(Usage)

// Message kinds on the bus. Kept as plain strings in envelopes; the named
// constants below are the complete set the simulator emits.
namespace kind {
inline constexpr const char* InvCheck = "INV_CHECK";
inline constexpr const char* Pay = "PAY";
inline constexpr const char* Auth = "AUTH";
inline constexpr const char* TaxQuote = "TAX_QUOTE";
inline constexpr const char* FraudScreen = "FRAUD_SCREEN";
inline constexpr const char* OrderFeed = "ORDER_FEED";
inline constexpr const char* StatusSync = "STATUS_SYNC";
inline constexpr const char* InvApply = "INV_APPLY";
}  // namespace kind

struct Envelope {
    std::uint64_t seq = 0;
    ServiceId from;
    ServiceId to;
    std::string kind;
    std::string payload;
    bool transport_error = false;  // marker; reply is empty when set
    std::string reply;
};

struct Reply {
    bool transport_error = false;
    std::string payload;

    bool ok() const { return !transport_error; }
};

struct TraceFilter {
    std::optional<ServiceId> from;
    std::optional<ServiceId> to;
    std::optional<std::string> kind;

    bool matches(const Envelope& e) const;
};

// Synchronous in-process request/reply bus with a complete boundary trace.
// One bus per simulation environment; the whole environment runs on one
// logical event loop, so no locking is needed here.
class Bus {
public:
    using Handler = std::function<std::string(const Envelope&)>;

    void register_handler(ServiceId svc, Handler h);

    // OFFLINE is rejected for everything but FRAUD.
    void set_availability(ServiceId svc, Availability a);
    Availability availability(ServiceId svc) const;

    // Appends the envelope to the trace either way. While the target is DOWN
    // its handler never runs and the reply is a transport-error marker.
    Reply send(ServiceId from, ServiceId to, const std::string& kind,
               const std::string& payload);

    const std::vector<Envelope>& trace() const { return trace_; }
    std::vector<Envelope> query(const TraceFilter& f) const;

    // seq|from|to|kind|payload-hex|reply-hex-or-ERR, one line per envelope
    std::string export_text() const;

    std::uint64_t handler_invocations(ServiceId svc) const;

private:
    std::map<ServiceId, Handler> handlers_;
    std::map<ServiceId, Availability> availability_;
    std::map<ServiceId, std::uint64_t> invocations_;
    std::vector<Envelope> trace_;
    std::uint64_t next_seq_ = 1;
};

std::string export_envelope(const Envelope& e);

}  // namespace itb::netsim
