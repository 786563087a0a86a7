#include "huffkit/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace huffkit {

namespace {
constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    if (!geo_point_valid(a) || !geo_point_valid(b))
        throw ValidationError("haversine: coordinates outside [-90,90] x [-180,180]");
    const double lat1 = deg2rad(a.latitude), lat2 = deg2rad(b.latitude);
    const double dlat = lat2 - lat1;
    const double dlon = deg2rad(b.longitude - a.longitude);
    const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double customer_merchant_distance(const CustomerProfile& customer,
                                  const MerchantProfile& merchant,
                                  const DistancePolicy& policy) {
    double d;
    switch (policy.anchor) {
        case DistanceAnchor::kHomeOnly:
            d = haversine_km(customer.home, merchant.location);
            break;
        case DistanceAnchor::kWorkOnly:
            if (!customer.work)
                throw DegenerateError("distance anchor is work-only but customer " +
                                      customer.customer_id + " has no work location");
            d = haversine_km(*customer.work, merchant.location);
            break;
        case DistanceAnchor::kMinHomeWork: {
            d = haversine_km(customer.home, merchant.location);
            if (customer.work)
                d = std::min(d, haversine_km(*customer.work, merchant.location));
            break;
        }
        default:
            throw ValidationError("unknown distance anchor");
    }
    return std::max(d, policy.floor_km);
}

DistanceHistogram distance_distribution(std::span<const double> distances_km,
                                        std::span<const double> weights,
                                        double bin_width_km) {
    if (distances_km.size() != weights.size())
        throw ValidationError("distance_distribution: distances and weights differ in length");
    if (!(bin_width_km > 0.0))
        throw ValidationError("distance_distribution: bin width must be positive");
    if (distances_km.empty())
        throw InsufficientSampleError("distance_distribution: no observations");

    DistanceHistogram h;
    h.bin_width_km = bin_width_km;
    double max_d = 0.0;
    for (double d : distances_km) max_d = std::max(max_d, d);
    const std::size_t bins = static_cast<std::size_t>(std::floor(max_d / bin_width_km)) + 1;
    h.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = bin_width_km * static_cast<double>(i);
    h.weights.assign(bins, 0.0);

    double wsum = 0.0, dsum = 0.0;
    for (std::size_t i = 0; i < distances_km.size(); ++i) {
        const double w = weights[i];
        if (w < 0.0) throw ValidationError("distance_distribution: negative weight");
        if (w == 0.0) continue;
        std::size_t bin = static_cast<std::size_t>(distances_km[i] / bin_width_km);
        if (bin >= bins) bin = bins - 1;
        h.weights[bin] += w;
        wsum += w;
        dsum += w * distances_km[i];
    }
    if (wsum <= 0.0) throw DegenerateError("distance_distribution: total weight is zero");
    h.total_weight = wsum;
    h.mean_km = dsum / wsum;
    return h;
}

std::string anchor_name(DistanceAnchor anchor) {
    switch (anchor) {
        case DistanceAnchor::kHomeOnly: return "home";
        case DistanceAnchor::kWorkOnly: return "work";
        case DistanceAnchor::kMinHomeWork: return "min";
    }
    return "min";
}

DistanceAnchor parse_anchor(std::string_view name) {
    if (name == "home") return DistanceAnchor::kHomeOnly;
    if (name == "work") return DistanceAnchor::kWorkOnly;
    if (name == "min") return DistanceAnchor::kMinHomeWork;
    throw ValidationError("unknown distance anchor '" + std::string(name) +
                          "' (expected home, work or min)");
}

}  // namespace huffkit
