#include "huffkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "huffkit/errors.hpp"
#include "huffkit/rng.hpp"

namespace huffkit {

void SwarmConfig::validate() const {
    if (swarm_size < 2) throw ValidationError("swarm_size must be >= 2");
    if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (bounds.empty()) throw ValidationError("bounds must name at least one dimension");
    for (const auto& b : bounds)
        if (!(b[0] < b[1]))
            throw ValidationError("each bound must satisfy lo < hi (got [" +
                                  std::to_string(b[0]) + ", " + std::to_string(b[1]) + "])");
    if (!(inertia > 0.0 && inertia < 1.0)) throw ValidationError("inertia must lie in (0,1)");
    if (cognitive < 0.0 || social < 0.0)
        throw ValidationError("cognitive/social weights must be non-negative");
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (stall_iterations < 1) throw ValidationError("stall_iterations must be >= 1");
    for (const auto& g : initial_guesses)
        if (g.size() != bounds.size())
            throw ValidationError("each initial guess must match the bound dimensionality");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// NaN and -inf are both failure sentinels.
double sanitize(double v) { return std::isnan(v) ? kNegInf : v; }

void evaluate_swarm(const Objective& objective, const std::vector<double>& positions,
                    std::size_t n_particles, std::size_t dims, std::size_t threads,
                    std::vector<double>& values) {
    values.resize(n_particles);
    auto eval_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            std::span<const double> point(&positions[k * dims], dims);
            values[k] = sanitize(objective(point));
        }
    };
    if (threads <= 1 || n_particles < 2) {
        eval_range(0, n_particles);
        return;
    }
    const std::size_t n_workers = std::min(threads, n_particles);
    const std::size_t chunk = (n_particles + n_workers - 1) / n_workers;
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(begin + chunk, n_particles);
        if (begin >= end) break;
        pool.emplace_back(eval_range, begin, end);
    }
    for (auto& t : pool) t.join();
}

}  // namespace

OptimizationResult maximize(const Objective& objective, const SwarmConfig& config,
                            std::uint64_t seed, std::vector<IterationTraceRow>* trace) {
    config.validate();
    const std::size_t n = config.swarm_size;
    const std::size_t dims = config.bounds.size();
    RandomStream rng(seed);

    std::vector<double> positions(n * dims), velocities(n * dims);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t d = 0; d < dims; ++d) {
            const auto [lo, hi] = config.bounds[d];
            positions[k * dims + d] = lo + rng.uniform01() * (hi - lo);
        }
        for (std::size_t d = 0; d < dims; ++d) {
            const auto [lo, hi] = config.bounds[d];
            velocities[k * dims + d] = (rng.uniform01() * 2.0 - 1.0) * (hi - lo) / 4.0;
        }
    }
    // warm starts overwrite positions after all draws, keeping the stream layout fixed
    for (std::size_t k = 0; k < std::min(n, config.initial_guesses.size()); ++k)
        for (std::size_t d = 0; d < dims; ++d) {
            const auto [lo, hi] = config.bounds[d];
            positions[k * dims + d] = std::clamp(config.initial_guesses[k][d], lo, hi);
        }

    std::vector<double> values;
    evaluate_swarm(objective, positions, n, dims, config.eval_threads, values);
    std::size_t evaluations = n;

    std::vector<double> pbest = positions;
    std::vector<double> pbest_value = values;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (values[k] > values[best_k]) best_k = k;
    if (values[best_k] == kNegInf)
        throw Error("optimizer initialization failure: objective non-finite at every particle");

    std::vector<double> gbest(positions.begin() + best_k * dims,
                              positions.begin() + (best_k + 1) * dims);
    double gbest_value = values[best_k];

    if (trace) trace->push_back({0, gbest_value, gbest});

    OptimizationResult out;
    std::size_t stall = 0;
    std::size_t iteration = 0;
    for (iteration = 1; iteration <= config.max_iterations; ++iteration) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t d = 0; d < dims; ++d) {
                const auto [lo, hi] = config.bounds[d];
                const std::size_t idx = k * dims + d;
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                velocities[idx] = config.inertia * velocities[idx] +
                                  config.cognitive * r1 * (pbest[idx] - positions[idx]) +
                                  config.social * r2 * (gbest[d] - positions[idx]);
                positions[idx] += velocities[idx];
                if (positions[idx] < lo) {
                    positions[idx] = lo;
                    velocities[idx] = 0.0;
                } else if (positions[idx] > hi) {
                    positions[idx] = hi;
                    velocities[idx] = 0.0;
                }
            }
        }

        evaluate_swarm(objective, positions, n, dims, config.eval_threads, values);
        evaluations += n;

        const double previous_best = gbest_value;
        for (std::size_t k = 0; k < n; ++k) {
            if (values[k] > pbest_value[k]) {
                pbest_value[k] = values[k];
                std::copy(positions.begin() + k * dims, positions.begin() + (k + 1) * dims,
                          pbest.begin() + k * dims);
            }
            if (values[k] > gbest_value) {
                gbest_value = values[k];
                gbest.assign(positions.begin() + k * dims, positions.begin() + (k + 1) * dims);
            }
        }

        if (trace) trace->push_back({iteration, gbest_value, gbest});

        if (gbest_value - previous_best < config.tolerance) {
            if (++stall >= config.stall_iterations) {
                out.converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }

    out.best_point = gbest;
    out.best_value = gbest_value;
    out.iterations_used = std::min(iteration, config.max_iterations);
    out.evaluations = evaluations;
    out.hit_bounds.resize(dims);
    for (std::size_t d = 0; d < dims; ++d)
        out.hit_bounds[d] = gbest[d] == config.bounds[d][0] || gbest[d] == config.bounds[d][1];
    return out;
}

}  // namespace huffkit
