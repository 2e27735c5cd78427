// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "util/text.hpp"

namespace itb::domain {

// ---- calendar -------------------------------------------------------------

struct Date {
    int year = 2012;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

struct DateTime {
    Date date;
    int hour = 0;
    int minute = 0;
    int second = 0;

    auto operator<=>(const DateTime&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

// "YYYY-MM-DDThh:mm:ss"; the date-only form "YYYY-MM-DD" is accepted too.
DateTime parse_datetime(const std::string& iso);
std::string format_datetime(const DateTime& t);

struct YearMonth {
    int year = 2012;
    int month = 1;

    Date last_day() const { return {year, month, days_in_month(year, month)}; }
    auto operator<=>(const YearMonth&) const = default;
};

YearMonth parse_expiry(const std::string& s);  // "MM/YYYY" or "YYYY-MM"
std::string format_expiry(const YearMonth& ym);  // "YYYY-MM"

// Simulated wall clock. Every timestamp in the artifact comes from here so
// that two runs with the same scenario script are byte-identical.
class SimClock {
public:
    explicit SimClock(DateTime start) : now_(start) {}

    const DateTime& now() const { return now_; }

    // Monotone within a run; moving backwards is a scenario error.
    void advance_to(const DateTime& t);

private:
    DateTime now_;
};

inline constexpr const char* kDefaultClock = "2012-01-01T00:00:00";

// ---- cards ----------------------------------------------------------------

// Primary account number: 12 to 19 decimal digits.
class Pan {
public:
    static Pan parse(const std::string& digits);  // throws Error(Usage)

    const std::string& digits() const { return digits_; }
    std::string last4() const { return digits_.substr(digits_.size() - 4); }
    std::string prefix(size_t n) const { return digits_.substr(0, std::min(n, digits_.size())); }
    size_t length() const { return digits_.size(); }

    bool operator==(const Pan&) const = default;

private:
    explicit Pan(std::string digits) : digits_(std::move(digits)) {}
    std::string digits_;
};

struct MaskedPan {
    std::string text;
};

// All but the last four digits replaced by '*'; length preserved.
MaskedPan mask_pan(const Pan& pan);

enum class CardNetwork { Visa };

std::string network_name(CardNetwork n);
CardNetwork parse_network(const std::string& name);  // throws Error(Usage)

struct CardDetails {
    CardNetwork network = CardNetwork::Visa;
    Pan pan;
    YearMonth expiry;
};

// Leading-digit table deciding which account ranges belong to a network.
// Prefixes are capped at four digits because only a four-digit fragment of
// the account number ever crosses the wire (see AuthRequest wire form).
class BinTable {
public:
    static BinTable defaults();  // VISA -> "4"

    void add_prefix(CardNetwork network, const std::string& prefix);
    bool has_network(CardNetwork network) const;
    const std::vector<std::string>& prefixes(CardNetwork network) const;

    // True iff some configured prefix of `network` starts `digits`.
    bool fragment_in_network(const std::string& digits, CardNetwork network) const;

    static constexpr size_t kMaxPrefixLen = 4;

private:
    std::map<CardNetwork, std::vector<std::string>> prefixes_;
};

bool bin_in_network(const Pan& pan, CardNetwork network, const BinTable& table);

// A card stays valid through the last day of its expiry month.
bool is_expired(const YearMonth& expiry, const Date& today);
bool is_expired(const CardDetails& card, const SimClock& clock);

// ---- money and stock ------------------------------------------------------

struct Money {
    std::int64_t cents = 0;  // minor units, never negative in this artifact
    std::string currency = "USD";

    bool operator==(const Money&) const = default;
};

Money make_money(std::int64_t cents, const std::string& currency);  // validates

// round(amount * bp / 10000), half up, used for tax quotes.
std::int64_t apply_rate_bp(std::int64_t cents, std::int64_t basis_points);

struct StockOnHand {
    std::string item_id;
    std::int64_t quantity = 0;  // >= 0
};

}  // namespace itb::domain
