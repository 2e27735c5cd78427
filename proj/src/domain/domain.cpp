// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "domain/domain.hpp"

#include <sstream>

namespace itb::domain {

using text::pad_int;

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return days[month - 1];
}

static int parse_int_field(const std::string& s, const std::string& what) {
    if (!text::all_digits(s))
        throw Error(Status::Usage, "bad " + what + " in date/time: '" + s + "'");
    return std::stoi(s);
}

DateTime parse_datetime(const std::string& iso) {
    std::string date_part = iso;
    std::string time_part;
    auto t = iso.find('T');
    if (t != std::string::npos) {
        date_part = iso.substr(0, t);
        time_part = iso.substr(t + 1);
    }
    auto d = text::split(date_part, '-');
    if (d.size() != 3)
        throw Error(Status::Usage, "bad ISO-8601 date: '" + iso + "'");
    DateTime out;
    out.date.year = parse_int_field(d[0], "year");
    out.date.month = parse_int_field(d[1], "month");
    out.date.day = parse_int_field(d[2], "day");
    if (out.date.month < 1 || out.date.month > 12)
        throw Error(Status::Usage, "month out of range: '" + iso + "'");
    if (out.date.day < 1 || out.date.day > days_in_month(out.date.year, out.date.month))
        throw Error(Status::Usage, "day out of range: '" + iso + "'");
    if (!time_part.empty()) {
        auto hms = text::split(time_part, ':');
        if (hms.size() != 3)
            throw Error(Status::Usage, "bad ISO-8601 time: '" + iso + "'");
        out.hour = parse_int_field(hms[0], "hour");
        out.minute = parse_int_field(hms[1], "minute");
        out.second = parse_int_field(hms[2], "second");
        if (out.hour > 23 || out.minute > 59 || out.second > 59)
            throw Error(Status::Usage, "time out of range: '" + iso + "'");
    }
    return out;
}

std::string format_datetime(const DateTime& t) {
    std::ostringstream os;
    os << pad_int(t.date.year, 4) << '-' << pad_int(t.date.month, 2) << '-'
       << pad_int(t.date.day, 2) << 'T' << pad_int(t.hour, 2) << ':'
       << pad_int(t.minute, 2) << ':' << pad_int(t.second, 2);
    return os.str();
}

YearMonth parse_expiry(const std::string& s) {
    std::vector<std::string> parts;
    bool month_first = false;
    if (s.find('/') != std::string::npos) {
        parts = text::split(s, '/');  // MM/YYYY
        month_first = true;
    } else {
        parts = text::split(s, '-');  // YYYY-MM
    }
    if (parts.size() != 2 || !text::all_digits(parts[0]) || !text::all_digits(parts[1]))
        throw Error(Status::Usage, "bad expiry '" + s + "', want MM/YYYY or YYYY-MM");
    YearMonth ym;
    ym.month = std::stoi(month_first ? parts[0] : parts[1]);
    ym.year = std::stoi(month_first ? parts[1] : parts[0]);
    if (ym.month < 1 || ym.month > 12)
        throw Error(Status::Usage, "expiry month out of range: '" + s + "'");
    return ym;
}

std::string format_expiry(const YearMonth& ym) {
    return pad_int(ym.year, 4) + "-" + pad_int(ym.month, 2);
}

void SimClock::advance_to(const DateTime& t) {
    if (t < now_)
        throw Error(Status::Usage,
                    "clock may not move backwards (now " + format_datetime(now_) +
                        ", requested " + format_datetime(t) + ")");
    now_ = t;
}

Pan Pan::parse(const std::string& digits) {
    if (digits.size() < 12 || digits.size() > 19)
        throw Error(Status::Usage,
                    "card number must be 12-19 digits, got " + std::to_string(digits.size()));
    if (!text::all_digits(digits))
        throw Error(Status::Usage, "card number must be decimal digits only");
    return Pan(digits);
}

MaskedPan mask_pan(const Pan& pan) {
    std::string out(pan.length() - 4, '*');
    out += pan.last4();
    return {out};
}

std::string network_name(CardNetwork n) {
    switch (n) {
        case CardNetwork::Visa: return "VISA";
    }
    return "?";
}

CardNetwork parse_network(const std::string& name) {
    if (name == "VISA") return CardNetwork::Visa;
    throw Error(Status::Usage, "unknown card network: '" + name + "'");
}

BinTable BinTable::defaults() {
    BinTable t;
    t.add_prefix(CardNetwork::Visa, "4");
    return t;
}

void BinTable::add_prefix(CardNetwork network, const std::string& prefix) {
    if (!text::all_digits(prefix) || prefix.size() > kMaxPrefixLen)
        throw Error(Status::Usage,
                    "BIN prefix must be 1-" + std::to_string(kMaxPrefixLen) +
                        " digits, got '" + prefix + "'");
    prefixes_[network].push_back(prefix);
}

bool BinTable::has_network(CardNetwork network) const {
    return prefixes_.count(network) > 0;
}

const std::vector<std::string>& BinTable::prefixes(CardNetwork network) const {
    auto it = prefixes_.find(network);
    if (it == prefixes_.end())
        throw Error(Status::Usage, "network not configured: " + network_name(network));
    return it->second;
}

bool BinTable::fragment_in_network(const std::string& digits, CardNetwork network) const {
    for (const auto& p : prefixes(network))
        if (digits.size() >= p.size() && digits.compare(0, p.size(), p) == 0) return true;
    return false;
}

bool bin_in_network(const Pan& pan, CardNetwork network, const BinTable& table) {
    return table.fragment_in_network(pan.digits(), network);
}

bool is_expired(const YearMonth& expiry, const Date& today) {
    return expiry.last_day() < today;
}

bool is_expired(const CardDetails& card, const SimClock& clock) {
    return is_expired(card.expiry, clock.now().date);
}

Money make_money(std::int64_t cents, const std::string& currency) {
    if (cents < 0) throw Error(Status::Usage, "negative amount");
    bool well_formed = currency.size() == 3;
    for (char c : currency)
        well_formed = well_formed && c >= 'A' && c <= 'Z';
    if (!well_formed)
        throw Error(Status::Usage,
                    "currency must be a 3-letter uppercase code, got '" + currency + "'");
    return {cents, currency};
}

std::int64_t apply_rate_bp(std::int64_t cents, std::int64_t basis_points) {
    return (cents * basis_points + 5000) / 10000;
}

}  // namespace itb::domain
