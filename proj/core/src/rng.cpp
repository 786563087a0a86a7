#include "huffkit/rng.hpp"

#include <cmath>
#include <numbers>

#include "huffkit/errors.hpp"

namespace huffkit {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t raw_seed) : engine_(raw_seed) {}

RandomStream::RandomStream(std::uint64_t master_seed, std::string_view substream)
    : engine_(derive_seed(master_seed, substream)) {}

std::uint64_t RandomStream::derive_seed(std::uint64_t master_seed, std::string_view substream) {
    return splitmix64(master_seed ^ fnv1a64(substream));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    if (!(lo <= hi)) throw ValidationError("uniform: lo must be <= hi");
    return lo + uniform01() * (hi - lo);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
    if (n == 0) throw ValidationError("below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

bool RandomStream::bernoulli(double p) { return uniform01() < p; }

double RandomStream::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_normal_;
    }
    // Box-Muller; u is bumped off 0 so log stays finite.
    double u = uniform01();
    double v = uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
}

double RandomStream::lognormal(double mu, double sigma) {
    return std::exp(normal(mu, sigma));
}

std::size_t RandomStream::categorical(std::span<const double> cumulative) {
    if (cumulative.empty()) throw ValidationError("categorical: empty distribution");
    const double total = cumulative.back();
    if (!(total > 0.0)) throw DegenerateError("categorical: total mass is zero");
    const double u = uniform01() * total;
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cumulative[mid] <= u) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

std::vector<double> cumulative_sums(std::span<const double> weights) {
    std::vector<double> cum(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw ValidationError("cumulative_sums: negative weight");
        acc += weights[i];
        cum[i] = acc;
    }
    return cum;
}

std::vector<std::int64_t> multinomial(RandomStream& rng, std::int64_t n,
                                      std::span<const double> probabilities) {
    if (n < 0) throw ValidationError("multinomial: negative count");
    auto cum = cumulative_sums(probabilities);
    std::vector<std::int64_t> counts(probabilities.size(), 0);
    for (std::int64_t k = 0; k < n; ++k) ++counts[rng.categorical(cum)];
    return counts;
}

}  // namespace huffkit
