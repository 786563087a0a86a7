#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "huffkit/types.hpp"

namespace huffkit {

// -sum p_k ln p_k in nats. Throws DegenerateError when no positive count.
double shannon_entropy(std::span<const std::int64_t> counts);

enum class DemographicAttribute { kGender, kMaritalStatus, kEducationLevel, kWorkStatus };

std::string attribute_name(DemographicAttribute a);

// Entropy of destination districts over all transactions made by residents
// of `district_id` (a destination is the merchant's district).
double mobility_diversity(const Dataset& dataset, const std::string& district_id);

// Entropy of one demographic attribute among the district's residents;
// rows with the attribute missing are skipped (count via out param).
double demographic_diversity(const Dataset& dataset, const std::string& district_id,
                             DemographicAttribute attribute,
                             std::size_t* missing_excluded = nullptr);

// Entropy of the merchant-category mix among the district's merchants.
double merchant_diversity(const Dataset& dataset, const std::string& district_id);

// Share of district transaction volume captured by its top-5 merchants by
// revenue (ties: merchant_id ascending). 1.0 when the district has <= 5.
double merchant_share_bias(const Dataset& dataset, const std::string& district_id);

// Gini over positive incomes (zero incomes filtered first). Throws
// DegenerateError when fewer than 2 positive incomes remain.
double gini(std::span<const Money> incomes, std::size_t* n_used = nullptr);

struct DistrictIndicators {
    std::string district_id;
    std::optional<double> mobility_diversity;
    std::optional<double> gender_diversity;
    std::optional<double> marital_diversity;
    std::optional<double> education_diversity;
    std::optional<double> job_diversity;
    std::optional<double> merchant_diversity;
    std::optional<double> merchant_share_bias;
    std::optional<double> income_gini;
    std::size_t n_customers_income = 0;      // incomes entering gini after the zero filter
    std::size_t demographic_exclusions = 0;  // missing attribute values across all four tallies
    std::vector<std::string> undefined_reasons;
};

// One row per district (natural id order). Undefined indicators are left
// empty with a reason instead of failing the batch. Districts must have
// been assigned (Dataset::customer_district filled).
std::vector<DistrictIndicators> compute_district_indicators(
    const Dataset& dataset, std::span<const std::string> districts);

}  // namespace huffkit
