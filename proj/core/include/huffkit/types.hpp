#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace huffkit {

// Currency in minor units (cents). Aggregation stays exact in int64;
// 9.2e16 cents of headroom is plenty for any realistic ledger.
using Money = std::int64_t;

// Parses "123", "123.4", "123.45". Rejects sign-only/empty strings, more
// than two decimals, and anything with stray characters.
std::optional<Money> parse_money(std::string_view text);
std::string format_money(Money amount);

double money_to_major(Money amount);

struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;
};

bool geo_point_valid(const GeoPoint& p);

// Seconds since the Unix epoch, UTC. Accepts "YYYY-MM-DDTHH:MM:SS" with an
// optional trailing "Z" or a bare "YYYY-MM-DD" (midnight).
std::optional<std::int64_t> parse_timestamp(std::string_view text);
std::string format_timestamp(std::int64_t epoch_seconds);

// Half-open [start, end) observation window.
struct DateRange {
    std::int64_t start = 0;
    std::int64_t end = 0;

    bool contains(std::int64_t t) const { return t >= start && t < end; }
};

struct TransactionRecord {
    std::string customer_id;
    std::string merchant_id;
    Money amount = 0;
    std::int64_t timestamp = 0;
    std::string category_id;
};

struct CustomerProfile {
    std::string customer_id;
    int age = 0;
    std::string gender;
    std::string marital_status;
    std::string education_level;
    std::string work_status;
    Money income = 0;
    GeoPoint home;
    std::optional<GeoPoint> work;
};

struct MerchantProfile {
    std::string merchant_id;
    std::string category_id;
    std::string district_id;
    GeoPoint location;
    Money revenue = 0;  // filled after ingest from the retained transactions
};

struct DatasetSummary {
    std::int64_t period_start = 0;
    std::int64_t period_end = 0;
    std::size_t transaction_count = 0;
    std::size_t customer_count = 0;
    std::size_t merchant_count = 0;
    double avg_transactions_per_customer = 0.0;
};

// Fully cross-validated study data: every transaction references a known
// customer and merchant, every customer has a home district.
struct Dataset {
    std::vector<TransactionRecord> transactions;
    std::vector<CustomerProfile> customers;
    std::vector<MerchantProfile> merchants;
    std::unordered_map<std::string, std::size_t> customer_index;
    std::unordered_map<std::string, std::size_t> merchant_index;
    // customer row -> home district id (same order as `customers`)
    std::vector<std::string> customer_district;

    void rebuild_indexes();
};

// "d2" < "d10"; falls back to lexicographic for equal numeric runs.
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
    bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

}  // namespace huffkit
