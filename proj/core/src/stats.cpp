#include "huffkit/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "huffkit/errors.hpp"

namespace huffkit {

double mean(std::span<const double> x) {
    if (x.empty()) throw InsufficientSampleError("mean of empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw InsufficientSampleError("sample variance needs n >= 2");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sample_stddev(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;  // converged to machine precision for all realistic dof
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double dof) {
    if (!(dof > 0.0)) throw ValidationError("student t: dof must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t > 0.0 ? tail : 1.0 - tail;
}

double student_t_two_sided_p(double t, double dof) {
    double p = 2.0 * student_t_sf(std::fabs(t), dof);
    return p > 1.0 ? 1.0 : p;
}

double student_t_quantile(double p, double dof) {
    if (!(dof > 0.0)) throw ValidationError("student t: dof must be positive");
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("student t quantile: p outside (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(1.0 - p, dof);

    const double target = 1.0 - p;  // upper-tail mass at the quantile
    double lo = 0.0, hi = 1.0;
    while (student_t_sf(hi, dof) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (student_t_sf(mid, dof) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: series lengths differ (" + std::to_string(x.size()) +
                              " vs " + std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 3) throw InsufficientSampleError("pearson: needs at least 3 observations");

    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw DegenerateError("pearson: first series is constant");
    if (syy == 0.0) throw DegenerateError("pearson: second series is constant");

    double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;

    PearsonResult out;
    out.r = r;
    out.n = n;
    const double denom = 1.0 - r * r;
    if (denom <= 0.0) {
        out.p_value = 0.0;
    } else {
        const double dof = static_cast<double>(n - 2);
        const double t = r * std::sqrt(dof / denom);
        out.p_value = student_t_two_sided_p(t, dof);
    }
    return out;
}

}  // namespace huffkit
