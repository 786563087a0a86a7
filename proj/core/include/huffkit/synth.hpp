#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "huffkit/geo.hpp"
#include "huffkit/huff.hpp"
#include "huffkit/ingest.hpp"
#include "huffkit/types.hpp"

namespace huffkit {

struct CategorySpec {
    std::string category_id;
    std::size_t merchants_per_district = 20;
    HuffParams true_params;
};

// A rectangular-grid city whose residents patronize their home district's
// merchants exactly according to the gravity model. Defaults give 17
// districts x 4 categories at interesting truth parameters.
struct CityConfig {
    std::size_t n_districts = 17;
    std::size_t grid_columns = 5;
    double origin_lat = 40.0;
    double origin_lon = 29.0;
    double box_height_deg = 0.06;
    double box_width_deg = 0.07;

    std::size_t customers_per_district = 500;
    std::size_t visits_per_customer = 50;  // per category
    std::vector<CategorySpec> categories;  // empty -> standard four

    double revenue_mu_log = 13.1;   // ln cents, ~ 4,900 major units
    double revenue_sigma_log = 0.6;
    double amount_mu_log = 7.6;     // ln cents, ~ 20 major units
    double amount_sigma_log = 0.4;
    double income_mu_log = 14.9;    // ln cents
    double income_sigma_log = 0.7;
    double zero_income_rate = 0.10;
    double work_location_rate = 0.30;

    // Share of visits redirected to a uniformly random merchant of the
    // category anywhere in the city (hedonic long-distance behavior).
    double noise_rate = 0.0;

    // When set, per-visit amounts are rescaled so each merchant's derived
    // revenue equals its drawn attractiveness exactly (clean-oracle mode).
    bool clamp_revenue_to_truth = false;

    DistancePolicy distance_policy;  // the behavioral distance when sampling
    DateRange window{1735689600, 1767225600};  // [2025-01-01, 2026-01-01)
    std::uint64_t seed = 1;

    static std::vector<CategorySpec> standard_categories();
};

// True choice structure of one district x category cell, rows in natural
// customer-id order, columns in generated merchant order.
struct CellTruth {
    std::string district_id;
    std::string category_id;
    HuffParams params;
    std::vector<std::string> customer_ids;
    std::vector<std::string> merchant_ids;
    std::vector<double> probabilities;  // row-major customers x merchants

    double at(std::size_t customer, std::size_t merchant) const {
        return probabilities[customer * merchant_ids.size() + merchant];
    }
};

struct GeneratedCity {
    Dataset dataset;
    std::vector<DistrictBox> boxes;
    std::unordered_map<std::string, std::string> home_districts;  // explicit labels
    std::unordered_map<std::string, double> true_attractiveness;  // merchant -> A_j (cents)
    std::vector<CellTruth> truths;  // district-major, config category order
    DateRange window;
};

// Deterministic under config.seed; district k draws from substreams
// "synth.district.<id>.merchants" / ".customers" so districts can generate
// in parallel without perturbing each other.
GeneratedCity generate_city(const CityConfig& config);

struct MobilityMatrix {
    std::vector<std::string> districts;  // natural order; rows = origins
    std::vector<double> values;          // row-major, defined rows sum to 1
    std::vector<bool> row_defined;       // false: no resident transactions

    double at(std::size_t i, std::size_t j) const { return values[i * districts.size() + j]; }
};

// Share of transactions by residents of district i at merchants of
// district j. Customers without an assigned district are skipped.
MobilityMatrix mobility_pattern_matrix(const Dataset& dataset);

// CSV emitters matching the ingestion schemas exactly.
void write_transactions_csv(std::ostream& out, std::span<const TransactionRecord> records);
void write_customers_csv(std::ostream& out, std::span<const CustomerProfile> customers);
void write_merchants_csv(std::ostream& out, std::span<const MerchantProfile> merchants);
void write_districts_csv(std::ostream& out, std::span<const DistrictBox> boxes);
void write_customer_districts_csv(
    std::ostream& out, const std::vector<std::pair<std::string, std::string>>& labels);

// Ground-truth sidecar: per-category params, per-merchant attractiveness,
// and the full per-cell probability matrices.
void write_truth_json(std::ostream& out, const GeneratedCity& city, const CityConfig& config);

}  // namespace huffkit
