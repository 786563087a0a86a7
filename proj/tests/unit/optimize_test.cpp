#include <doctest.h>

#include <atomic>
#include <cmath>

#include "huffkit/errors.hpp"
#include "huffkit/optimize.hpp"

using namespace huffkit;

namespace {

SwarmConfig box2(double lo, double hi) {
    SwarmConfig cfg;
    cfg.bounds = {{lo, hi}, {lo, hi}};
    return cfg;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("finds the peak of a concave bowl on [0,100]^2") {
    const Objective obj = [](std::span<const double> x) {
        return -((x[0] - 3.0) * (x[0] - 3.0) + (x[1] - 5.0) * (x[1] - 5.0));
    };
    const auto res = maximize(obj, box2(0, 100), 0);
    CHECK(std::fabs(res.best_point[0] - 3.0) < 1e-3);
    CHECK(std::fabs(res.best_point[1] - 5.0) < 1e-3);
    CHECK(res.best_value > -1e-5);
    CHECK_FALSE(res.hit_bounds[0]);
    CHECK_FALSE(res.hit_bounds[1]);

    // single swarms can wall-stick near a low-coordinate optimum (the price
    // of clamp + zero-velocity bounds); a large majority of seeds must land
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = maximize(obj, box2(0, 100), seed);
        if (std::fabs(r.best_point[0] - 3.0) < 1e-3 && std::fabs(r.best_point[1] - 5.0) < 1e-3)
            ++hits;
    }
    CHECK(hits >= 8);
}

TEST_CASE("negative rosenbrock on [-5,10]^2 reaches the optimum on >= 8 of 10 seeds") {
    const Objective rosen = [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return -(a * a + 100.0 * b * b);
    };
    SwarmConfig cfg = box2(-5, 10);
    cfg.max_iterations = 400;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto res = maximize(rosen, cfg, seed);
        if (res.best_value >= -1e-4) ++hits;
    }
    CHECK(hits >= 8);
}

TEST_CASE("constant objective converges via stall") {
    const Objective obj = [](std::span<const double>) { return 7.5; };
    const auto res = maximize(obj, box2(0, 1), 3);
    CHECK(res.converged);
    CHECK(res.best_value == 7.5);
    CHECK(res.iterations_used < 200);
}

TEST_CASE("identical seeds give identical trajectories, different seeds differ") {
    const Objective obj = [](std::span<const double> x) {
        return -(std::sin(x[0]) * x[0] + x[1] * x[1] * 0.1);
    };
    std::vector<IterationTraceRow> t1, t2;
    const auto r1 = maximize(obj, box2(0, 10), 42, &t1);
    const auto r2 = maximize(obj, box2(0, 10), 42, &t2);
    CHECK(r1.best_value == r2.best_value);
    CHECK(r1.best_point == r2.best_point);
    CHECK(r1.iterations_used == r2.iterations_used);
    CHECK(r1.evaluations == r2.evaluations);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].best_value == t2[i].best_value);
        CHECK(t1[i].best_point == t2[i].best_point);
    }

    const auto r3 = maximize(obj, box2(0, 10), 43);
    CHECK((r3.evaluations != r1.evaluations || r3.best_point != r1.best_point));
}

TEST_CASE("parallel evaluation returns exactly the serial result") {
    const Objective obj = [](std::span<const double> x) {
        return -((x[0] - 42.0) * (x[0] - 42.0) + (x[1] - 17.0) * (x[1] - 17.0)) +
               std::sin(x[0] * x[1]);
    };
    SwarmConfig serial = box2(0, 100);
    SwarmConfig parallel = box2(0, 100);
    parallel.eval_threads = 4;
    const auto rs = maximize(obj, serial, 11);
    const auto rp = maximize(obj, parallel, 11);
    CHECK(rs.best_value == rp.best_value);
    CHECK(rs.best_point == rp.best_point);
    CHECK(rs.iterations_used == rp.iterations_used);
}

TEST_CASE("every evaluated point stays inside the box") {
    std::atomic<bool> violated{false};
    const Objective obj = [&violated](std::span<const double> x) {
        if (x[0] < 2.0 || x[0] > 9.0 || x[1] < 2.0 || x[1] > 9.0) violated = true;
        return -(x[0] + x[1]);
    };
    (void)maximize(obj, box2(2, 9), 5);
    CHECK_FALSE(violated.load());
}

TEST_CASE("incumbent trace is monotone non-decreasing") {
    const Objective obj = [](std::span<const double> x) {
        return std::sin(x[0] * 3.0) * std::cos(x[1] * 2.0) + 0.01 * x[0];
    };
    std::vector<IterationTraceRow> trace;
    (void)maximize(obj, box2(0, 10), 9, &trace);
    REQUIRE(trace.size() > 1);
    for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i].best_value >= trace[i - 1].best_value);
}

TEST_CASE("optimum on the boundary is reachable and flagged") {
    const Objective obj = [](std::span<const double> x) { return x[0] - x[1]; };
    const auto res = maximize(obj, box2(0, 100), 2);
    CHECK(res.best_point[0] == 100.0);
    CHECK(res.best_point[1] == 0.0);
    CHECK(res.hit_bounds[0]);
    CHECK(res.hit_bounds[1]);
}

TEST_CASE("failure sentinels never become incumbent") {
    // objective is NaN outside a small disc around (5,5)
    const Objective obj = [](std::span<const double> x) {
        const double d2 = (x[0] - 5.0) * (x[0] - 5.0) + (x[1] - 5.0) * (x[1] - 5.0);
        if (d2 > 9.0) return std::nan("");
        return -d2;
    };
    const auto res = maximize(obj, box2(0, 10), 7);
    CHECK(std::isfinite(res.best_value));
    CHECK(res.best_value <= 0.0);
    CHECK(res.best_value > -9.0 - 1e-9);
}

TEST_CASE("all-sentinel initialization throws") {
    const Objective obj = [](std::span<const double>) { return std::nan(""); };
    CHECK_THROWS_AS(maximize(obj, box2(0, 1), 1), Error);
}

TEST_CASE("initial guesses join the first swarm and floor the result") {
    // objective <= 0 with its only maximum at the guess; one iteration is
    // enough because the guess is evaluated before any movement
    const Objective obj = [](std::span<const double> x) {
        return -((x[0] - 3.0) * (x[0] - 3.0) + (x[1] - 7.0) * (x[1] - 7.0));
    };
    SwarmConfig cfg = box2(0, 10);
    cfg.max_iterations = 1;
    cfg.initial_guesses = {{3.0, 7.0}};
    const auto res = maximize(obj, cfg, 11);
    CHECK(res.best_value == 0.0);
    CHECK(res.best_point[0] == 3.0);
    CHECK(res.best_point[1] == 7.0);
}

TEST_CASE("out-of-box guesses are clamped, mismatched ones rejected") {
    const Objective obj = [](std::span<const double> x) { return -(x[0] + x[1]); };
    SwarmConfig cfg = box2(1, 2);
    cfg.max_iterations = 1;
    cfg.initial_guesses = {{-50.0, 99.0}};  // clamps to (1, 2)
    const auto res = maximize(obj, cfg, 3);
    CHECK(res.best_value >= -(2.0 + 2.0));

    cfg.initial_guesses = {{1.0}};
    CHECK_THROWS_AS(maximize(obj, cfg, 3), ValidationError);
}

TEST_CASE("config validation rejects bad settings") {
    const Objective obj = [](std::span<const double>) { return 0.0; };
    SwarmConfig cfg = box2(0, 1);
    cfg.swarm_size = 1;
    CHECK_THROWS_AS(maximize(obj, cfg, 1), ValidationError);
    cfg = box2(0, 1);
    cfg.bounds[0] = {2.0, 1.0};
    CHECK_THROWS_AS(maximize(obj, cfg, 1), ValidationError);
    cfg = box2(0, 1);
    cfg.inertia = 1.5;
    CHECK_THROWS_AS(maximize(obj, cfg, 1), ValidationError);
    cfg = box2(0, 1);
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(maximize(obj, cfg, 1), ValidationError);
    cfg = box2(0, 1);
    cfg.bounds.clear();
    CHECK_THROWS_AS(maximize(obj, cfg, 1), ValidationError);
}

}  // TEST_SUITE
