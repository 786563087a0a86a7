#pragma once

#include <cstddef>
#include <span>

namespace huffkit {

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // n-1 denominator
double sample_stddev(std::span<const double> x);

struct PearsonResult {
    double r = 0.0;
    double p_value = 1.0;  // two-sided, t distribution with n-2 dof
    std::size_t n = 0;
};

// Throws InsufficientSampleError for n < 3 and DegenerateError when either
// series is constant.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Upper-tail survival P(T > t) for Student's t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);
double student_t_two_sided_p(double t, double dof);

// Inverse of the two-sided relationship: quantile q with P(T <= q) = p.
double student_t_quantile(double p, double dof);

}  // namespace huffkit
