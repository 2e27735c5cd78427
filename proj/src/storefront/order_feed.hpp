// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace itb::storefront {

struct FeedLine {
    std::string item_id;
    std::int64_t qty = 0;
    std::int64_t unit_price = 0;  // minor units
};

// The order document sent OLS -> OMS. Serialized as canonical XML with a
// fixed element order; the parser below enforces exactly that order.
struct OrderFeed {
    std::string order_no;
    std::string status;           // "Created" at emission
    std::string fraud_check_ind;  // "Y" or "N"
    std::string customer_ip;
    std::vector<FeedLine> lines;
    std::int64_t tax = 0;
    std::int64_t total = 0;
    std::string ship_to;
    std::string bill_to;
};

std::string feed_to_xml(const OrderFeed& feed);

// Strict schema parse. Throws Error(Status::Usage) naming the offending
// element, e.g. "schema: expected <OrderNo>".
OrderFeed parse_feed_xml(const std::string& xml);

}  // namespace itb::storefront
