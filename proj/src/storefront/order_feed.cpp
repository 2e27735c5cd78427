// Copyright 2026 the itb authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "storefront/order_feed.hpp"

#include <sstream>

#include "util/text.hpp"

namespace itb::storefront {

std::string feed_to_xml(const OrderFeed& feed) {
    std::ostringstream os;
    os << "<Order>"
       << "<OrderNo>" << feed.order_no << "</OrderNo>"
       << "<Status>" << feed.status << "</Status>"
       << "<FraudCheckInd>" << feed.fraud_check_ind << "</FraudCheckInd>"
       << "<CustomerIP>" << feed.customer_ip << "</CustomerIP>"
       << "<Lines>";
    for (const auto& line : feed.lines) {
        os << "<Line itemId=\"" << line.item_id << "\" qty=\"" << line.qty
           << "\" unitPrice=\"" << line.unit_price << "\"/>";
    }
    os << "</Lines>"
       << "<Tax>" << feed.tax << "</Tax>"
       << "<Total>" << feed.total << "</Total>"
       << "<ShipTo>" << feed.ship_to << "</ShipTo>"
       << "<BillTo>" << feed.bill_to << "</BillTo>"
       << "</Order>";
    return os.str();
}

namespace {

// Cursor over the canonical serialization. The feed has exactly one producer
// in this artifact, so the parse insists on the canonical element order and
// reports the first deviation.
class XmlCursor {
public:
    explicit XmlCursor(const std::string& s) : s_(s) {}

    bool peek_literal(const std::string& lit) const {
        return s_.compare(pos_, lit.size(), lit) == 0;
    }

    void expect_literal(const std::string& lit, const std::string& what) {
        if (!peek_literal(lit))
            throw Error(Status::Usage, "schema: expected " + what);
        pos_ += lit.size();
    }

    std::string element_text(const std::string& name) {
        expect_literal("<" + name + ">", "<" + name + ">");
        auto close = "</" + name + ">";
        auto end = s_.find(close, pos_);
        if (end == std::string::npos)
            throw Error(Status::Usage, "schema: unterminated <" + name + ">");
        std::string content = s_.substr(pos_, end - pos_);
        if (content.find('<') != std::string::npos)
            throw Error(Status::Usage, "schema: unexpected markup inside <" + name + ">");
        pos_ = end + close.size();
        return content;
    }

    std::string attribute(const std::string& name) {
        expect_literal(name + "=\"", "attribute " + name);
        auto end = s_.find('"', pos_);
        if (end == std::string::npos)
            throw Error(Status::Usage, "schema: unterminated attribute " + name);
        std::string value = s_.substr(pos_, end - pos_);
        pos_ = end + 1;
        return value;
    }

    void skip_spaces() {
        while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
    }

    bool at_end() const { return pos_ == s_.size(); }

private:
    const std::string& s_;
    size_t pos_ = 0;
};

std::int64_t parse_count(const std::string& s, const std::string& what) {
    if (!text::all_digits(s))
        throw Error(Status::Usage, "schema: " + what + " must be a non-negative integer");
    return std::stoll(s);
}

}  // namespace

OrderFeed parse_feed_xml(const std::string& xml) {
    XmlCursor cur(xml);
    OrderFeed feed;
    cur.expect_literal("<Order>", "<Order>");
    feed.order_no = cur.element_text("OrderNo");
    if (feed.order_no.empty())
        throw Error(Status::Usage, "schema: empty <OrderNo>");
    feed.status = cur.element_text("Status");
    feed.fraud_check_ind = cur.element_text("FraudCheckInd");
    if (feed.fraud_check_ind != "Y" && feed.fraud_check_ind != "N")
        throw Error(Status::Usage, "schema: FraudCheckInd must be Y or N");
    feed.customer_ip = cur.element_text("CustomerIP");
    cur.expect_literal("<Lines>", "<Lines>");
    while (cur.peek_literal("<Line ")) {
        cur.expect_literal("<Line ", "<Line>");
        FeedLine line;
        line.item_id = cur.attribute("itemId");
        cur.skip_spaces();
        line.qty = parse_count(cur.attribute("qty"), "qty");
        cur.skip_spaces();
        line.unit_price = parse_count(cur.attribute("unitPrice"), "unitPrice");
        cur.expect_literal("/>", "self-closing <Line>");
        feed.lines.push_back(std::move(line));
    }
    if (feed.lines.empty())
        throw Error(Status::Usage, "schema: <Lines> must contain at least one <Line>");
    cur.expect_literal("</Lines>", "</Lines>");
    feed.tax = parse_count(cur.element_text("Tax"), "Tax");
    feed.total = parse_count(cur.element_text("Total"), "Total");
    feed.ship_to = cur.element_text("ShipTo");
    feed.bill_to = cur.element_text("BillTo");
    cur.expect_literal("</Order>", "</Order>");
    if (!cur.at_end())
        throw Error(Status::Usage, "schema: trailing content after </Order>");
    return feed;
}

}  // namespace itb::storefront
