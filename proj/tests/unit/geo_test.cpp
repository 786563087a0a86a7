#include <doctest.h>

#include <cmath>
#include <vector>

#include "huffkit/errors.hpp"
#include "huffkit/geo.hpp"

using namespace huffkit;

TEST_SUITE("geo") {

TEST_CASE("haversine matches independent references") {
    // two points ~8.2 km apart on the same latitude band
    const GeoPoint a{40.9831, 29.0331}, b{41.0431, 28.9762};
    CHECK(std::fabs(haversine_km(a, b) - 8.203880357875782) < 1e-8);

    const GeoPoint nyc{40.7128, -74.0060}, london{51.5074, -0.1278};
    CHECK(std::fabs(haversine_km(nyc, london) - 5570.229873656523) < 1e-6);

    // antipodal points: half the circumference, pi * R
    const GeoPoint n{90.0, 0.0}, s{-90.0, 0.0};
    CHECK(haversine_km(n, s) == doctest::Approx(20015.114442035923).epsilon(1e-12));
}

TEST_CASE("haversine is symmetric, non-negative, zero at identity") {
    const GeoPoint a{40.0, 29.0}, b{40.5, 29.5};
    CHECK(haversine_km(a, b) == doctest::Approx(haversine_km(b, a)));
    CHECK(haversine_km(a, a) == 0.0);
    CHECK(haversine_km(a, b) > 0.0);
}

TEST_CASE("haversine triangle inequality holds on a sample") {
    const GeoPoint a{40.0, 29.0}, b{40.3, 29.2}, c{40.1, 29.6};
    CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
}

TEST_CASE("invalid coordinates are rejected") {
    CHECK_THROWS_AS(haversine_km({91.0, 0.0}, {0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(haversine_km({0.0, 0.0}, {0.0, 181.0}), ValidationError);
}

TEST_CASE("anchor policy selects home, work, or their minimum") {
    CustomerProfile cust;
    cust.customer_id = "c1";
    cust.home = {40.0, 29.0};
    cust.work = GeoPoint{40.2, 29.0};
    MerchantProfile near_work;
    near_work.location = {40.21, 29.0};

    const double via_home = haversine_km(cust.home, near_work.location);
    const double via_work = haversine_km(*cust.work, near_work.location);
    REQUIRE(via_work < via_home);

    CHECK(customer_merchant_distance(cust, near_work, {DistanceAnchor::kHomeOnly, 0.0}) ==
          doctest::Approx(via_home));
    CHECK(customer_merchant_distance(cust, near_work, {DistanceAnchor::kWorkOnly, 0.0}) ==
          doctest::Approx(via_work));
    CHECK(customer_merchant_distance(cust, near_work, {DistanceAnchor::kMinHomeWork, 0.0}) ==
          doctest::Approx(via_work));

    cust.work.reset();
    CHECK(customer_merchant_distance(cust, near_work, {DistanceAnchor::kMinHomeWork, 0.0}) ==
          doctest::Approx(via_home));
    CHECK_THROWS_AS(customer_merchant_distance(cust, near_work, {DistanceAnchor::kWorkOnly, 0.0}),
                    DegenerateError);
}

TEST_CASE("distance floor clamps short hops") {
    CustomerProfile cust;
    cust.home = {40.0, 29.0};
    MerchantProfile m;
    m.location = {40.0, 29.0};
    CHECK(customer_merchant_distance(cust, m, {DistanceAnchor::kHomeOnly, 0.05}) == 0.05);
}

TEST_CASE("anchor names round-trip and bad names throw") {
    for (auto a : {DistanceAnchor::kHomeOnly, DistanceAnchor::kWorkOnly,
                   DistanceAnchor::kMinHomeWork}) {
        CHECK(parse_anchor(anchor_name(a)) == a);
    }
    CHECK_THROWS_AS(parse_anchor("midpoint"), ValidationError);
}

TEST_CASE("distance histogram bins visit weights") {
    const std::vector<double> d{0.4, 1.2, 1.8, 5.1};
    const std::vector<double> w{2, 1, 1, 4};
    const auto h = distance_distribution(d, w, 1.0);
    REQUIRE(h.weights.size() == 6);
    CHECK(h.weights[0] == 2);
    CHECK(h.weights[1] == 2);
    CHECK(h.weights[5] == 4);
    CHECK(h.total_weight == 8);
    CHECK(h.mean_km == doctest::Approx((0.4 * 2 + 1.2 + 1.8 + 5.1 * 4) / 8.0));
    CHECK(h.bin_edges.front() == 0.0);
    CHECK(h.bin_edges.back() == doctest::Approx(6.0));
}

TEST_CASE("distance histogram contract violations") {
    const std::vector<double> d{1.0};
    const std::vector<double> w0{0.0};
    const std::vector<double> wn{-1.0};
    CHECK_THROWS_AS(distance_distribution(d, w0, 1.0), DegenerateError);
    CHECK_THROWS_AS(distance_distribution(d, wn, 1.0), ValidationError);
    CHECK_THROWS_AS(distance_distribution(d, w0, 0.0), ValidationError);
    CHECK_THROWS_AS(distance_distribution({}, {}, 1.0), InsufficientSampleError);
}

}  // TEST_SUITE
