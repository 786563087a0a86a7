#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "huffkit/types.hpp"

namespace huffkit {

struct Rejection {
    std::size_t row_number = 0;  // 1-based data row in the source file
    std::string reason;
};

struct TransactionIngest {
    std::vector<TransactionRecord> records;
    std::vector<Rejection> rejections;
};

struct CustomerIngest {
    std::vector<CustomerProfile> customers;
    std::vector<Rejection> rejections;
};

struct MerchantIngest {
    std::vector<MerchantProfile> merchants;
    std::vector<Rejection> rejections;
};

// Cross-reference tables for transaction validation. Null maps skip the
// corresponding check (used by unit fixtures; the pipeline always sets them).
struct TransactionContext {
    const std::unordered_map<std::string, std::size_t>* customers = nullptr;
    const std::unordered_map<std::string, std::size_t>* merchants = nullptr;
    const std::vector<MerchantProfile>* merchant_rows = nullptr;  // category cross-check
    std::optional<DateRange> window;
};

// Readers validate row by row; bad rows land in the rejection report with a
// stable reason string, never silently dropped. A missing required column
// throws SchemaError.
TransactionIngest ingest_transactions(std::istream& in, const TransactionContext& ctx);
CustomerIngest ingest_customers(std::istream& in);
MerchantIngest ingest_merchants(std::istream& in);

// Keeps exactly the records of customers with >= min_count transactions.
std::vector<TransactionRecord> filter_active_customers(std::vector<TransactionRecord> records,
                                                       std::size_t min_count);

// Counts + average over the retained records. Throws DegenerateError when
// there are no customers to average over.
DatasetSummary summarize(std::span<const TransactionRecord> records, const DateRange& window);

// Home-district assignment: explicit label beats point-in-box lookup.
struct DistrictBox {
    std::string district_id;
    double lat_lo = 0, lon_lo = 0, lat_hi = 0, lon_hi = 0;

    bool contains(const GeoPoint& p) const {
        return p.latitude >= lat_lo && p.latitude <= lat_hi && p.longitude >= lon_lo &&
               p.longitude <= lon_hi;
    }
};

struct DistrictTable {
    std::vector<DistrictBox> boxes;
    std::unordered_map<std::string, std::string> explicit_labels;  // customer_id -> district

    std::optional<std::string> district_of(const std::string& customer_id,
                                           const GeoPoint& home) const;
};

std::vector<DistrictBox> ingest_district_boxes(std::istream& in);
std::unordered_map<std::string, std::string> ingest_customer_districts(std::istream& in);

// Fills Dataset::customer_district; returns ids of customers with no
// resolvable district (kept in the dataset, excluded from district stats).
std::vector<std::string> assign_home_districts(Dataset& dataset, const DistrictTable& table);

}  // namespace huffkit
