#pragma once

// Small in-memory dataset builders shared by the unit tests.

#include <string>
#include <vector>

#include "huffkit/types.hpp"

namespace huffkit::testfix {

inline CustomerProfile customer(std::string id, double lat, double lon) {
    CustomerProfile c;
    c.customer_id = std::move(id);
    c.age = 35;
    c.gender = "F";
    c.marital_status = "married";
    c.education_level = "university";
    c.work_status = "employed";
    c.income = 250000;
    c.home = {lat, lon};
    return c;
}

inline MerchantProfile merchant(std::string id, std::string category, std::string district,
                                double lat, double lon) {
    MerchantProfile m;
    m.merchant_id = std::move(id);
    m.category_id = std::move(category);
    m.district_id = std::move(district);
    m.location = {lat, lon};
    return m;
}

inline TransactionRecord tx(std::string customer, std::string merchant_id, Money amount,
                            std::string category, std::int64_t timestamp = 1000) {
    TransactionRecord t;
    t.customer_id = std::move(customer);
    t.merchant_id = std::move(merchant_id);
    t.amount = amount;
    t.timestamp = timestamp;
    t.category_id = std::move(category);
    return t;
}

}  // namespace huffkit::testfix
