#pragma once

#include <span>
#include <string>
#include <vector>

#include "huffkit/errors.hpp"
#include "huffkit/types.hpp"

namespace huffkit {

inline constexpr double kEarthRadiusKm = 6371.0088;

// Great-circle distance in kilometres. Throws ValidationError on
// coordinates outside [-90,90] x [-180,180].
double haversine_km(const GeoPoint& a, const GeoPoint& b);

enum class DistanceAnchor { kHomeOnly, kWorkOnly, kMinHomeWork };

struct DistancePolicy {
    DistanceAnchor anchor = DistanceAnchor::kMinHomeWork;
    double floor_km = 0.05;  // distances are clamped up to this
};

// Anchor distance under `policy`, never below policy.floor_km. kWorkOnly
// with no work location throws DegenerateError; kMinHomeWork falls back to
// home when work is absent.
double customer_merchant_distance(const CustomerProfile& customer,
                                  const MerchantProfile& merchant,
                                  const DistancePolicy& policy);

struct DistanceHistogram {
    double bin_width_km = 1.0;
    std::vector<double> bin_edges;   // size bins+1, starts at 0
    std::vector<double> weights;     // visit-weighted mass per bin
    double mean_km = 0.0;            // visit-weighted mean distance
    double total_weight = 0.0;
};

// Weighted histogram of the given distances; weights are visit counts.
DistanceHistogram distance_distribution(std::span<const double> distances_km,
                                        std::span<const double> weights,
                                        double bin_width_km);

std::string anchor_name(DistanceAnchor anchor);
DistanceAnchor parse_anchor(std::string_view name);  // throws ValidationError

}  // namespace huffkit
