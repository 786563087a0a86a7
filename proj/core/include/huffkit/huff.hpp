#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "huffkit/geo.hpp"
#include "huffkit/optimize.hpp"
#include "huffkit/partition.hpp"
#include "huffkit/stats.hpp"
#include "huffkit/types.hpp"

namespace huffkit {

struct HuffParams {
    double alpha = 0.0;  // attractiveness exponent
    double beta = 0.0;   // distance-decay exponent
};

// Everything a cell fit needs, flattened for the optimizer's hot loop.
// Merchants with non-positive attractiveness are dropped at build time
// (zero utility for alpha > 0, undefined 0^0 at alpha = 0).
struct CellModelInputs {
    std::string district_id;
    std::string category_id;
    std::vector<std::string> customer_ids;        // size n
    std::vector<std::string> merchant_ids;        // size m, candidates only
    std::vector<double> attractiveness;           // size m, all > 0
    std::vector<double> log_attractiveness;       // size m
    std::vector<double> distances_km;             // n*m row-major, all >= floor > 0
    std::vector<double> log_distances;            // n*m row-major
    std::vector<double> visit_weights;            // n*m row-major
    std::vector<double> row_totals;               // size n (N_i)
    std::vector<double> actual_totals;            // size m (column sums)
    std::size_t n_customers = 0;
    std::size_t n_merchants = 0;
    std::vector<std::string> dropped_merchants;   // zero-attractiveness exclusions

    double total_visits() const;
};

// Assembles model inputs for one cell. `attractiveness_override` (merchant
// id -> value) replaces derived revenue, e.g. with generator ground truth;
// candidates are selected on the chosen source.
CellModelInputs build_cell_inputs(
    const Dataset& dataset, const StudyCell& cell, const VisitMatrix& visits,
    const DistancePolicy& policy,
    const std::unordered_map<std::string, double>* attractiveness_override = nullptr);

// A^alpha / D^beta with the x^0 = 1 convention. Throws ValidationError on
// non-positive A or D.
double utility(double attractiveness, double distance_km, const HuffParams& params);

// P_ij over the cell's merchants for one customer row; sums to 1 within
// 1e-12 (computed in log space, stable for alpha/beta up to the box edge).
std::vector<double> choice_probabilities(const CellModelInputs& inputs, const HuffParams& params,
                                         std::size_t customer_row);

// Same share computation on raw log vectors (one customer against m
// merchants); the generator uses this so its truth matches the model bit
// for bit.
std::vector<double> huff_shares(std::span<const double> log_attractiveness,
                                std::span<const double> log_distances, const HuffParams& params);

// Full n x m row-stochastic matrix of choice probabilities.
std::vector<double> probability_matrix(const CellModelInputs& inputs, const HuffParams& params);

// E_j = sum_i N_i * P_ij; conserves total observed visits.
std::vector<double> expected_visit_distribution(const CellModelInputs& inputs,
                                                const HuffParams& params);

// Pearson r between expected and actual per-merchant totals; the PSO
// objective. Throws InsufficientSampleError (< 3 merchants) and
// DegenerateError (constant series).
double cell_score(const CellModelInputs& inputs, const HuffParams& params);

// r together with its two-sided p-value at the same parameters.
PearsonResult cell_score_detail(const CellModelInputs& inputs, const HuffParams& params);

enum class Estimator { kPso, kLogLinear };

std::string estimator_name(Estimator e);

struct HuffFitResult {
    std::string district_id;
    std::string category_id;
    HuffParams params;
    double score = 0.0;            // Pearson r at params
    double p_value = 1.0;
    double avg_distance_km = 0.0;  // visit-weighted
    Estimator estimator = Estimator::kPso;
    bool alpha_at_bound = false;
    bool beta_at_bound = false;
    bool degenerate = false;       // score/p are NaN when set
    std::string degenerate_reason;
    std::size_t evaluations = 0;
    std::size_t n_customers = 0;
    std::size_t n_merchants = 0;
    double total_visits = 0.0;
};

struct FitOptions {
    SwarmConfig swarm;          // bounds default to [0,100] x [0,100]
    std::size_t restarts = 4;   // independent swarms; best result wins

    FitOptions();
};

// Nakanishi-Cooper style log-linear baseline: within-customer centered
// log-share regression, zero shares smoothed to 0.5/N_i, estimates clamped
// into the swarm box.
HuffFitResult fit_loglinear(const CellModelInputs& inputs, const FitOptions& options);

// PSO fit, deterministic per (inputs, options, seed). Restart k draws its
// seed from substream "restart.<k>".
HuffFitResult fit_cell(const CellModelInputs& inputs, const FitOptions& options,
                       std::uint64_t seed);

}  // namespace huffkit
