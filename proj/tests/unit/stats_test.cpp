#include <doctest.h>

#include <cmath>
#include <vector>

#include "huffkit/errors.hpp"
#include "huffkit/stats.hpp"

using namespace huffkit;

namespace {
// reference values below were computed independently with scipy.stats
constexpr double kTol = 1e-8;
}

TEST_SUITE("stats") {

TEST_CASE("mean / variance basics") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(mean(x) == doctest::Approx(2.5));
    CHECK(sample_variance(x) == doctest::Approx(5.0 / 3.0));
    CHECK_THROWS_AS(mean(std::vector<double>{}), InsufficientSampleError);
    CHECK_THROWS_AS(sample_variance(std::vector<double>{1.0}), InsufficientSampleError);
}

TEST_CASE("pearson r and two-sided p match the reference") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 1, 4, 3, 6};
    const auto res = pearson(x, y);
    CHECK(std::fabs(res.r - 0.8219949365267865) < kTol);
    CHECK(std::fabs(res.p_value - 0.08770664700806553) < kTol);
    CHECK(res.n == 5);
}

TEST_CASE("pearson is symmetric and sign-preserving") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 1, 4, 3, 6};
    CHECK(pearson(x, y).r == doctest::Approx(pearson(y, x).r));
    std::vector<double> neg;
    for (double v : y) neg.push_back(-v);
    CHECK(pearson(x, neg).r == doctest::Approx(-pearson(x, y).r));
    CHECK(pearson(x, neg).p_value == doctest::Approx(pearson(x, y).p_value));
}

TEST_CASE("pearson of a perfect line has r=1, p=0") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    const auto res = pearson(x, y);
    CHECK(res.r == doctest::Approx(1.0));
    CHECK(res.p_value == 0.0);
}

TEST_CASE("pearson contract violations throw") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> c{5, 5, 5};
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(pearson(x, c), DegenerateError);
    CHECK_THROWS_AS(pearson(c, x), DegenerateError);
    CHECK_THROWS_AS(pearson(two, two), InsufficientSampleError);
    const std::vector<double> longer{1, 2, 3, 4};
    CHECK_THROWS_AS(pearson(x, longer), ValidationError);
}

TEST_CASE("student t survival function matches scipy to 1e-8") {
    struct Row { double t, dof, two_sided; };
    const Row rows[] = {
        {2.228, 10, 0.050011771817111327},
        {1.0, 3, 0.39100221895577053},
        {2.5, 7, 0.040992218585752874},
        {0.5, 30, 0.6207230048851273},
        {3.2, 2, 0.08534087923995286},
        {1.96, 1e7, 0.04999581802531422},
    };
    for (const auto& row : rows) {
        CHECK(std::fabs(student_t_two_sided_p(row.t, row.dof) - row.two_sided) < kTol);
    }
    // far tail: relative agreement
    const double far = student_t_two_sided_p(11.7, 40);
    CHECK(std::fabs(far - 1.7299066912949032e-14) / 1.7299066912949032e-14 < 1e-6);

    CHECK(student_t_sf(0.0, 5) == doctest::Approx(0.5));
    CHECK(student_t_sf(-2.0, 5) == doctest::Approx(1.0 - student_t_sf(2.0, 5)));
    CHECK_THROWS_AS(student_t_sf(1.0, 0.0), ValidationError);
}

TEST_CASE("student t quantile matches scipy to 1e-8") {
    CHECK(std::fabs(student_t_quantile(0.975, 8) - 2.306004135204166) < kTol);
    CHECK(std::fabs(student_t_quantile(0.975, 5) - 2.570581835636314) < kTol);
    CHECK(std::fabs(student_t_quantile(0.975, 59) - 2.0009953780882674) < kTol);
    CHECK(student_t_quantile(0.5, 12) == 0.0);
    CHECK(student_t_quantile(0.025, 8) == doctest::Approx(-2.306004135204166));
    CHECK_THROWS_AS(student_t_quantile(0.0, 8), ValidationError);
    CHECK_THROWS_AS(student_t_quantile(1.0, 8), ValidationError);
}

TEST_CASE("quantile inverts the survival function") {
    for (double p : {0.6, 0.9, 0.975, 0.999}) {
        for (double dof : {1.0, 4.0, 30.0, 200.0}) {
            const double q = student_t_quantile(p, dof);
            CHECK(student_t_sf(q, dof) == doctest::Approx(1.0 - p).epsilon(1e-9));
        }
    }
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    const double lhs = regularized_incomplete_beta(2.5, 1.5, 0.3);
    const double rhs = 1.0 - regularized_incomplete_beta(1.5, 2.5, 0.7);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    // I_x(1,1) = x
    CHECK(regularized_incomplete_beta(1, 1, 0.42) == doctest::Approx(0.42).epsilon(1e-12));
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), ValidationError);
}

}  // TEST_SUITE
