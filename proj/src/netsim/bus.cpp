// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "netsim/bus.hpp"

#include <sstream>

namespace itb::netsim {

std::string service_name(ServiceId s) {
    switch (s) {
        case ServiceId::OLS: return "OLS";
        case ServiceId::WEBSVC: return "WEBSVC";
        case ServiceId::MERCHANT: return "MERCHANT";
        case ServiceId::FRAUD: return "FRAUD";
        case ServiceId::OMS: return "OMS";
        case ServiceId::RESA: return "RESA";
        case ServiceId::TAX: return "TAX";
    }
    return "?";
}

ServiceId parse_service(const std::string& name) {
    for (ServiceId s : all_services())
        if (service_name(s) == name) return s;
    throw Error(Status::Usage, "unknown service: '" + name + "'");
}

const std::vector<ServiceId>& all_services() {
    static const std::vector<ServiceId> all = {
        ServiceId::OLS,  ServiceId::WEBSVC, ServiceId::MERCHANT, ServiceId::FRAUD,
        ServiceId::OMS,  ServiceId::RESA,   ServiceId::TAX,
    };
    return all;
}

std::string availability_name(Availability a) {
    switch (a) {
        case Availability::Up: return "UP";
        case Availability::Down: return "DOWN";
        case Availability::Offline: return "OFFLINE";
    }
    return "?";
}

Availability parse_availability(const std::string& name) {
    if (name == "UP") return Availability::Up;
    if (name == "DOWN") return Availability::Down;
    if (name == "OFFLINE") return Availability::Offline;
    throw Error(Status::Usage, "unknown availability state: '" + name + "'");
}

bool TraceFilter::matches(const Envelope& e) const {
    if (from && *from != e.from) return false;
    if (to && *to != e.to) return false;
    if (kind && *kind != e.kind) return false;
    return true;
}

void Bus::register_handler(ServiceId svc, Handler h) {
    handlers_[svc] = std::move(h);
}

void Bus::set_availability(ServiceId svc, Availability a) {
    if (a == Availability::Offline && svc != ServiceId::FRAUD)
        throw Error(Status::Usage,
                    "OFFLINE is only valid for FRAUD, not " + service_name(svc));
    availability_[svc] = a;
}

Availability Bus::availability(ServiceId svc) const {
    auto it = availability_.find(svc);
    return it == availability_.end() ? Availability::Up : it->second;
}

Reply Bus::send(ServiceId from, ServiceId to, const std::string& kind,
                const std::string& payload) {
    Envelope e;
    e.seq = next_seq_++;
    e.from = from;
    e.to = to;
    e.kind = kind;
    e.payload = payload;

    if (availability(to) == Availability::Down) {
        e.transport_error = true;
        trace_.push_back(e);
        return {true, {}};
    }
    auto it = handlers_.find(to);
    if (it == handlers_.end())
        throw Error(Status::Usage, "no handler registered for " + service_name(to));
    ++invocations_[to];
    e.reply = it->second(e);
    trace_.push_back(e);
    return {false, e.reply};
}

std::vector<Envelope> Bus::query(const TraceFilter& f) const {
    std::vector<Envelope> out;
    for (const auto& e : trace_)
        if (f.matches(e)) out.push_back(e);
    return out;
}

std::string export_envelope(const Envelope& e) {
    std::ostringstream os;
    os << e.seq << '|' << service_name(e.from) << '|' << service_name(e.to) << '|'
       << e.kind << '|' << text::hex_encode(e.payload) << '|'
       << (e.transport_error ? "ERR" : text::hex_encode(e.reply));
    return os.str();
}

std::string Bus::export_text() const {
    std::string out;
    for (const auto& e : trace_) {
        out += export_envelope(e);
        out += '\n';
    }
    return out;
}

std::uint64_t Bus::handler_invocations(ServiceId svc) const {
    auto it = invocations_.find(svc);
    return it == invocations_.end() ? 0 : it->second;
}

}  // namespace itb::netsim
