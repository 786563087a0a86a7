#include "huffkit/huff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "huffkit/errors.hpp"
#include "huffkit/rng.hpp"

namespace huffkit {

double CellModelInputs::total_visits() const {
    double s = 0.0;
    for (double v : row_totals) s += v;
    return s;
}

CellModelInputs build_cell_inputs(
    const Dataset& dataset, const StudyCell& cell, const VisitMatrix& visits,
    const DistancePolicy& policy,
    const std::unordered_map<std::string, double>* attractiveness_override) {
    if (visits.rows != cell.customer_rows.size() || visits.cols != cell.merchant_rows.size())
        throw IntegrityError("cell inputs: visit matrix dimensions do not match the cell");
    if (!(policy.floor_km > 0.0))
        throw ValidationError("cell inputs: distance floor must be positive");

    CellModelInputs in;
    in.district_id = cell.district_id;
    in.category_id = cell.category_id;

    // pick candidate merchants: positive attractiveness under the chosen source
    std::vector<std::size_t> kept_cols;
    for (std::size_t j = 0; j < cell.merchant_rows.size(); ++j) {
        const auto& m = dataset.merchants[cell.merchant_rows[j]];
        double a;
        if (attractiveness_override) {
            const auto it = attractiveness_override->find(m.merchant_id);
            if (it == attractiveness_override->end())
                throw IntegrityError("cell inputs: no attractiveness override for merchant " +
                                     m.merchant_id);
            a = it->second;
        } else {
            a = money_to_major(m.revenue);
        }
        if (a > 0.0) {
            kept_cols.push_back(j);
            in.merchant_ids.push_back(m.merchant_id);
            in.attractiveness.push_back(a);
            in.log_attractiveness.push_back(std::log(a));
        } else {
            in.dropped_merchants.push_back(m.merchant_id);
        }
    }

    in.n_merchants = kept_cols.size();
    in.n_customers = cell.customer_rows.size();
    in.customer_ids.reserve(in.n_customers);
    for (std::size_t r : cell.customer_rows)
        in.customer_ids.push_back(dataset.customers[r].customer_id);

    in.distances_km.resize(in.n_customers * in.n_merchants);
    in.log_distances.resize(in.n_customers * in.n_merchants);
    in.visit_weights.resize(in.n_customers * in.n_merchants);
    in.row_totals.assign(in.n_customers, 0.0);
    in.actual_totals.assign(in.n_merchants, 0.0);

    for (std::size_t i = 0; i < in.n_customers; ++i) {
        const auto& customer = dataset.customers[cell.customer_rows[i]];
        for (std::size_t jj = 0; jj < kept_cols.size(); ++jj) {
            const std::size_t j = kept_cols[jj];
            const auto& merchant = dataset.merchants[cell.merchant_rows[j]];
            const double d = customer_merchant_distance(customer, merchant, policy);
            const std::size_t idx = i * in.n_merchants + jj;
            in.distances_km[idx] = d;
            in.log_distances[idx] = std::log(d);
            const double w = visits.at(i, j);
            in.visit_weights[idx] = w;
            in.row_totals[i] += w;
            in.actual_totals[jj] += w;
        }
    }
    return in;
}

double utility(double attractiveness, double distance_km, const HuffParams& params) {
    if (!(attractiveness > 0.0)) throw ValidationError("utility: attractiveness must be > 0");
    if (!(distance_km > 0.0)) throw ValidationError("utility: distance must be > 0");
    return std::pow(attractiveness, params.alpha) / std::pow(distance_km, params.beta);
}

namespace {

// One customer's unnormalized log-utilities -> probabilities, written into
// out[0..m). Log-space softmax: exact for the Eq. (2) ratio and immune to
// overflow at box-edge exponents.
void share_kernel(const double* la, const double* ld, std::size_t m, const HuffParams& p,
                  double* out) {
    double max_s = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const double s = p.alpha * la[j] - p.beta * ld[j];
        out[j] = s;
        if (s > max_s) max_s = s;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = std::exp(out[j] - max_s);
        total += out[j];
    }
    for (std::size_t j = 0; j < m; ++j) out[j] /= total;
}

void softmax_row(const CellModelInputs& in, const HuffParams& p, std::size_t i, double* out) {
    const std::size_t m = in.n_merchants;
    share_kernel(in.log_attractiveness.data(), &in.log_distances[i * m], m, p, out);
}

void validate_params(const HuffParams& p) {
    if (!(p.alpha >= 0.0) || !(p.beta >= 0.0))
        throw ValidationError("huff params: alpha and beta must be >= 0");
}

}  // namespace

std::vector<double> choice_probabilities(const CellModelInputs& inputs, const HuffParams& params,
                                         std::size_t customer_row) {
    validate_params(params);
    if (inputs.n_merchants == 0) throw DegenerateError("choice probabilities: empty merchant set");
    if (customer_row >= inputs.n_customers)
        throw ValidationError("choice probabilities: customer row out of range");
    std::vector<double> out(inputs.n_merchants);
    softmax_row(inputs, params, customer_row, out.data());
    return out;
}

std::vector<double> huff_shares(std::span<const double> log_attractiveness,
                                std::span<const double> log_distances,
                                const HuffParams& params) {
    validate_params(params);
    if (log_attractiveness.empty())
        throw DegenerateError("huff shares: empty merchant set");
    if (log_distances.size() != log_attractiveness.size())
        throw ValidationError("huff shares: length mismatch");
    std::vector<double> out(log_attractiveness.size());
    share_kernel(log_attractiveness.data(), log_distances.data(), out.size(), params, out.data());
    return out;
}

std::vector<double> probability_matrix(const CellModelInputs& inputs, const HuffParams& params) {
    validate_params(params);
    if (inputs.n_merchants == 0) throw DegenerateError("probability matrix: empty merchant set");
    std::vector<double> out(inputs.n_customers * inputs.n_merchants);
    for (std::size_t i = 0; i < inputs.n_customers; ++i)
        softmax_row(inputs, params, i, &out[i * inputs.n_merchants]);
    return out;
}

std::vector<double> expected_visit_distribution(const CellModelInputs& inputs,
                                                const HuffParams& params) {
    validate_params(params);
    if (inputs.n_merchants == 0) throw DegenerateError("expected visits: empty merchant set");
    const std::size_t m = inputs.n_merchants;
    std::vector<double> expected(m, 0.0);
    std::vector<double> row(m);
    for (std::size_t i = 0; i < inputs.n_customers; ++i) {
        softmax_row(inputs, params, i, row.data());
        const double n_i = inputs.row_totals[i];
        for (std::size_t j = 0; j < m; ++j) expected[j] += n_i * row[j];
    }
    return expected;
}

PearsonResult cell_score_detail(const CellModelInputs& inputs, const HuffParams& params) {
    if (inputs.n_merchants < 3)
        throw InsufficientSampleError("cell score: needs at least 3 candidate merchants, have " +
                                      std::to_string(inputs.n_merchants));
    const auto expected = expected_visit_distribution(inputs, params);
    return pearson(expected, inputs.actual_totals);
}

double cell_score(const CellModelInputs& inputs, const HuffParams& params) {
    return cell_score_detail(inputs, params).r;
}

std::string estimator_name(Estimator e) {
    return e == Estimator::kPso ? "pso" : "loglinear";
}

FitOptions::FitOptions() { swarm.bounds = {{0.0, 100.0}, {0.0, 100.0}}; }

namespace {

double clamp_to(double v, const std::array<double, 2>& b) {
    return std::min(std::max(v, b[0]), b[1]);
}

double weighted_avg_distance(const CellModelInputs& in) {
    double num = 0.0, den = 0.0;
    for (std::size_t idx = 0; idx < in.visit_weights.size(); ++idx) {
        num += in.visit_weights[idx] * in.distances_km[idx];
        den += in.visit_weights[idx];
    }
    return den > 0.0 ? num / den : 0.0;
}

HuffFitResult make_result(const CellModelInputs& in, Estimator est, const HuffParams& p,
                          const SwarmConfig& swarm) {
    HuffFitResult r;
    r.district_id = in.district_id;
    r.category_id = in.category_id;
    r.params = p;
    r.estimator = est;
    r.avg_distance_km = weighted_avg_distance(in);
    r.n_customers = in.n_customers;
    r.n_merchants = in.n_merchants;
    r.total_visits = in.total_visits();
    r.alpha_at_bound = p.alpha == swarm.bounds[0][0] || p.alpha == swarm.bounds[0][1];
    r.beta_at_bound = p.beta == swarm.bounds[1][0] || p.beta == swarm.bounds[1][1];
    try {
        const auto sc = cell_score_detail(in, p);
        r.score = sc.r;
        r.p_value = sc.p_value;
    } catch (const DegenerateError& e) {
        r.degenerate = true;
        r.degenerate_reason = e.what();
        r.score = std::numeric_limits<double>::quiet_NaN();
        r.p_value = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace

HuffFitResult fit_loglinear(const CellModelInputs& inputs, const FitOptions& options) {
    if (options.swarm.bounds.size() != 2)
        throw ValidationError("fit: swarm bounds must cover exactly (alpha, beta)");
    if (inputs.n_merchants < 3)
        throw InsufficientSampleError("loglinear fit: needs at least 3 candidate merchants");

    const std::size_t n = inputs.n_customers, m = inputs.n_merchants;
    // y_ij = log(share), x1 = log A_j, x2 = log D_ij, all centered within customer
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, s1y = 0.0, s2y = 0.0;
    std::vector<double> ly(m), lx1(m), lx2(m);
    for (std::size_t i = 0; i < n; ++i) {
        const double n_i = inputs.row_totals[i];
        if (n_i <= 0.0) continue;
        const double smooth = 0.5 / n_i;
        double my = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t idx = i * m + j;
            const double share = inputs.visit_weights[idx] > 0.0
                                     ? inputs.visit_weights[idx] / n_i
                                     : smooth;
            ly[j] = std::log(share);
            lx1[j] = inputs.log_attractiveness[j];
            lx2[j] = inputs.log_distances[idx];
            my += ly[j];
            m1 += lx1[j];
            m2 += lx2[j];
        }
        my /= static_cast<double>(m);
        m1 /= static_cast<double>(m);
        m2 /= static_cast<double>(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double cy = ly[j] - my, c1 = lx1[j] - m1, c2 = lx2[j] - m2;
            s11 += c1 * c1;
            s12 += c1 * c2;
            s22 += c2 * c2;
            s1y += c1 * cy;
            s2y += c2 * cy;
        }
    }

    const double det = s11 * s22 - s12 * s12;
    const double scale = std::max(s11, s22);
    if (!(scale > 0.0) || std::fabs(det) <= 1e-12 * scale * scale)
        throw SingularDesignError(
            "loglinear fit: attractiveness/distance regressors lack independent variation in cell " +
            inputs.district_id + "/" + inputs.category_id);

    const double coef_a = (s1y * s22 - s2y * s12) / det;
    const double coef_d = (s2y * s11 - s1y * s12) / det;

    HuffParams p;
    p.alpha = clamp_to(coef_a, options.swarm.bounds[0]);
    p.beta = clamp_to(-coef_d, options.swarm.bounds[1]);

    auto result = make_result(inputs, Estimator::kLogLinear, p, options.swarm);
    result.evaluations = 1;
    return result;
}

HuffFitResult fit_cell(const CellModelInputs& inputs, const FitOptions& options,
                       std::uint64_t seed) {
    if (options.swarm.bounds.size() != 2)
        throw ValidationError("fit: swarm bounds must cover exactly (alpha, beta)");
    if (options.restarts < 1) throw ValidationError("fit: restarts must be >= 1");
    if (inputs.n_merchants < 3)
        throw InsufficientSampleError("cell fit: needs at least 3 candidate merchants, cell " +
                                      inputs.district_id + "/" + inputs.category_id);
    {
        // constant actual distribution can never score; reject before searching
        const double first = inputs.actual_totals.front();
        bool constant = true;
        for (double v : inputs.actual_totals)
            if (v != first) {
                constant = false;
                break;
            }
        if (constant)
            throw DegenerateError("cell fit: actual visit distribution is constant in cell " +
                                  inputs.district_id + "/" + inputs.category_id);
    }

    const Objective objective = [&inputs](std::span<const double> x) -> double {
        try {
            return cell_score(inputs, {x[0], x[1]});
        } catch (const DegenerateError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    // The r surface is often flat along a high-exponent ridge while the
    // informative peak occupies a sliver of the box, so uniform swarms can
    // settle on the ridge. Seeding one particle at the closed-form estimate
    // guarantees the search never finishes below the baseline.
    SwarmConfig swarm = options.swarm;
    try {
        const HuffFitResult baseline = fit_loglinear(inputs, options);
        swarm.initial_guesses.push_back({baseline.params.alpha, baseline.params.beta});
    } catch (const Error&) {
        // no usable baseline (e.g. singular design); plain uniform start
    }

    OptimizationResult best;
    bool have_best = false;
    std::size_t total_evaluations = 0;
    for (std::size_t k = 0; k < options.restarts; ++k) {
        const std::uint64_t restart_seed =
            RandomStream::derive_seed(seed, "restart." + std::to_string(k));
        auto res = maximize(objective, swarm, restart_seed);
        total_evaluations += res.evaluations;
        if (!have_best || res.best_value > best.best_value) {
            best = std::move(res);
            have_best = true;
        }
    }

    auto result = make_result(inputs, Estimator::kPso,
                              {best.best_point[0], best.best_point[1]}, options.swarm);
    result.evaluations = total_evaluations;
    return result;
}

}  // namespace huffkit
