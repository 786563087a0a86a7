#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace huffkit {

// Deterministic random stream. The engine is mt19937_64 but every draw is
// derived here from raw 64-bit words, never through std:: distributions,
// so a fixed seed reproduces byte-identical output on any platform.
//
// Independent substreams come from a (master seed, name) pair; by
// convention names look like "fit.cell.<district>.<category>" or
// "synth.district.<id>".
class RandomStream {
public:
    explicit RandomStream(std::uint64_t raw_seed);
    RandomStream(std::uint64_t master_seed, std::string_view substream);

    static std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view substream);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);

    // Unbiased integer in [0, n), n > 0 (rejection sampling).
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p);

    double normal(double mean = 0.0, double stddev = 1.0);
    double lognormal(double mu, double sigma);

    // Index drawn from the distribution whose cumulative sums are
    // `cumulative` (last element is the total mass).
    std::size_t categorical(std::span<const double> cumulative);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::vector<double> cumulative_sums(std::span<const double> weights);

// n independent categorical draws tallied into counts (deterministic given
// the stream state).
std::vector<std::int64_t> multinomial(RandomStream& rng, std::int64_t n,
                                      std::span<const double> probabilities);

}  // namespace huffkit
