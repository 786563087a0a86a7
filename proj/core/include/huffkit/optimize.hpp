#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace huffkit {

struct SwarmConfig {
    std::size_t swarm_size = 40;
    std::size_t max_iterations = 200;
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    double tolerance = 1e-6;          // minimum improvement that resets the stall counter
    std::size_t stall_iterations = 25;
    std::vector<std::array<double, 2>> bounds;  // per-dimension [lo, hi]
    std::size_t eval_threads = 1;     // parallel objective evaluation; results identical to serial

    // Warm starts: each guess replaces one particle's initial position
    // (clamped to bounds); the guarded initial evaluation makes the result
    // at least as good as the best guess. Guesses beyond swarm_size are
    // ignored. The stream of random draws is unchanged, so runs with and
    // without guesses stay individually deterministic.
    std::vector<std::vector<double>> initial_guesses;

    void validate() const;  // throws ValidationError
};

struct OptimizationResult {
    std::vector<double> best_point;
    double best_value = 0.0;
    std::size_t iterations_used = 0;
    std::size_t evaluations = 0;
    std::vector<bool> hit_bounds;  // best_point component rests on lo or hi
    bool converged = false;        // stopped via stall, not iteration cap
};

// Objective may return NaN/-inf as a failure sentinel; such points never
// become incumbent.
using Objective = std::function<double(std::span<const double>)>;

struct IterationTraceRow {
    std::size_t iteration;
    double best_value;
    std::vector<double> best_point;
};

// Global-best PSO over the configured box. Deterministic for a fixed
// (objective, config, seed); parallel evaluation cannot change the result
// because every random draw happens in the serial update step and the
// best-of-swarm reduction runs in particle-index order.
OptimizationResult maximize(const Objective& objective, const SwarmConfig& config,
                            std::uint64_t seed,
                            std::vector<IterationTraceRow>* trace = nullptr);

}  // namespace huffkit
