// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include "doctest.h"
#include "domain/domain.hpp"

using namespace itb;
using namespace itb::domain;

TEST_CASE("calendar basics") {
    CHECK(is_leap_year(2012));
    CHECK_FALSE(is_leap_year(2013));
    CHECK(is_leap_year(2000));
    CHECK_FALSE(is_leap_year(1900));
    CHECK(days_in_month(2012, 2) == 29);
    CHECK(days_in_month(2013, 2) == 28);
    CHECK(days_in_month(2012, 4) == 30);
    CHECK(days_in_month(2012, 12) == 31);
}

TEST_CASE("datetime parse and format round-trip") {
    auto t = parse_datetime("2012-05-17T13:45:09");
    CHECK(t.date.year == 2012);
    CHECK(t.date.month == 5);
    CHECK(t.date.day == 17);
    CHECK(t.hour == 13);
    CHECK(format_datetime(t) == "2012-05-17T13:45:09");

    auto d = parse_datetime("2012-05-17");
    CHECK(d.hour == 0);
    CHECK(format_datetime(d) == "2012-05-17T00:00:00");

    CHECK_THROWS_AS(parse_datetime("2012-13-01"), Error);
    CHECK_THROWS_AS(parse_datetime("2012-02-30"), Error);
    CHECK_THROWS_AS(parse_datetime("not a date"), Error);
    CHECK_THROWS_AS(parse_datetime("2012-05-17T25:00:00"), Error);
}

TEST_CASE("datetime round-trips over random instants") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> year(1990, 2040);
    std::uniform_int_distribution<int> month(1, 12);
    std::uniform_int_distribution<int> hms(0, 59);
    for (int i = 0; i < 500; ++i) {
        DateTime t;
        t.date.year = year(rng);
        t.date.month = month(rng);
        std::uniform_int_distribution<int> day(1, days_in_month(t.date.year, t.date.month));
        t.date.day = day(rng);
        t.hour = hms(rng) % 24;
        t.minute = hms(rng);
        t.second = hms(rng);
        CHECK(parse_datetime(format_datetime(t)) == t);
    }
}

TEST_CASE("sim clock only moves forward") {
    SimClock clock(parse_datetime("2012-01-01T09:00:00"));
    clock.advance_to(parse_datetime("2012-01-01T09:00:00"));
    clock.advance_to(parse_datetime("2012-01-02T00:00:00"));
    CHECK(format_datetime(clock.now()) == "2012-01-02T00:00:00");
    CHECK_THROWS_AS(clock.advance_to(parse_datetime("2012-01-01T23:59:59")), Error);
}

TEST_CASE("expiry accepts both written forms") {
    auto a = parse_expiry("05/2012");
    auto b = parse_expiry("2012-05");
    CHECK(a == b);
    CHECK(format_expiry(a) == "2012-05");
    CHECK(a.last_day() == Date{2012, 5, 31});
    CHECK(parse_expiry("02/2012").last_day() == Date{2012, 2, 29});
    CHECK_THROWS_AS(parse_expiry("13/2012"), Error);
    CHECK_THROWS_AS(parse_expiry("052012"), Error);
}

TEST_CASE("card validity runs through the last day of the expiry month") {
    YearMonth expiry{2012, 5};
    CHECK_FALSE(is_expired(expiry, Date{2012, 5, 31}));
    CHECK(is_expired(expiry, Date{2012, 6, 1}));
    CHECK_FALSE(is_expired(expiry, Date{2011, 12, 31}));
}

TEST_CASE("pan parsing and masking") {
    auto pan = Pan::parse("4213238767854345");
    CHECK(pan.last4() == "4345");
    CHECK(pan.prefix(6) == "421323");
    CHECK(mask_pan(pan).text == "************4345");

    auto short_pan = Pan::parse("421323876785");  // 12 digits, the minimum
    CHECK(mask_pan(short_pan).text == "********6785");

    CHECK_THROWS_AS(Pan::parse("12345678901"), Error);        // 11 digits
    CHECK_THROWS_AS(Pan::parse("12345678901234567890"), Error);  // 20 digits
    CHECK_THROWS_AS(Pan::parse("4213-2387-6785"), Error);
}

TEST_CASE("masking preserves length and hides everything but the tail") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(12, 19);
    std::uniform_int_distribution<int> digit(0, 9);
    for (int i = 0; i < 200; ++i) {
        std::string digits;
        int n = len(rng);
        for (int j = 0; j < n; ++j) {
            digits.push_back(static_cast<char>('0' + digit(rng)));
        }
        auto masked = mask_pan(Pan::parse(digits)).text;
        REQUIRE(masked.size() == digits.size());
        CHECK(masked.substr(masked.size() - 4) == digits.substr(digits.size() - 4));
        for (size_t j = 0; j + 4 < masked.size(); ++j) {
            CHECK(masked[j] == '*');
        }
    }
}

TEST_CASE("bin table decides by configured prefixes") {
    auto table = BinTable::defaults();
    CHECK(table.fragment_in_network("4213", CardNetwork::Visa));
    CHECK_FALSE(table.fragment_in_network("7978", CardNetwork::Visa));

    table.add_prefix(CardNetwork::Visa, "7978");
    CHECK(table.fragment_in_network("7978", CardNetwork::Visa));
    CHECK_FALSE(table.fragment_in_network("79", CardNetwork::Visa));

    CHECK_THROWS_AS(table.add_prefix(CardNetwork::Visa, "79789"), Error);
    CHECK_THROWS_AS(table.add_prefix(CardNetwork::Visa, "79a"), Error);
    CHECK_THROWS_AS(table.add_prefix(CardNetwork::Visa, ""), Error);

    CHECK(bin_in_network(Pan::parse("4213238767854345"), CardNetwork::Visa, table));
    CHECK(bin_in_network(Pan::parse("7978998767854345"), CardNetwork::Visa, table));
    CHECK_FALSE(bin_in_network(Pan::parse("5213238767854345"), CardNetwork::Visa, table));
}

TEST_CASE("money validates currency and sign") {
    auto m = make_money(4999, "USD");
    CHECK(m.cents == 4999);
    CHECK_THROWS_AS(make_money(-1, "USD"), Error);
    CHECK_THROWS_AS(make_money(100, "usd"), Error);
    CHECK_THROWS_AS(make_money(100, "DOLLARS"), Error);
}

TEST_CASE("rate application rounds half up") {
    CHECK(apply_rate_bp(4999, 800) == 400);   // 399.92 rounds up
    CHECK(apply_rate_bp(10000, 800) == 800);  // exact
    CHECK(apply_rate_bp(1, 800) == 0);        // 0.08 rounds down
    CHECK(apply_rate_bp(7, 800) == 1);        // 0.56 rounds up
    CHECK(apply_rate_bp(0, 800) == 0);
    CHECK(apply_rate_bp(12345, 0) == 0);
}

TEST_CASE("rate application agrees with a wide-arithmetic oracle") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::int64_t> cents(0, 10'000'000);
    std::uniform_int_distribution<std::int64_t> bp(0, 10'000);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t c = cents(rng);
        std::int64_t r = bp(rng);
        // Half-up rounding spelled out digit by digit.
        __int128 num = static_cast<__int128>(c) * r;
        std::int64_t quotient = static_cast<std::int64_t>(num / 10000);
        std::int64_t rem = static_cast<std::int64_t>(num % 10000);
        std::int64_t expected = quotient + (rem * 2 >= 10000 ? 1 : 0);
        CHECK(apply_rate_bp(c, r) == expected);
    }
}
