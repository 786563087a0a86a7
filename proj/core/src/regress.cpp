#include "huffkit/regress.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "huffkit/errors.hpp"
#include "huffkit/stats.hpp"

namespace huffkit {

std::vector<double> zscore(std::span<const double> values) {
    const double m = mean(values);
    const double sd = sample_stddev(values);
    double scale = std::fabs(m);
    for (double v : values) scale = std::max(scale, std::fabs(v));
    // relative guard: all-equal inputs can leave sd ~1e-17 of mean round-off
    if (sd <= 1e-12 * std::max(scale, 1e-300))
        throw DegenerateError("zscore: zero variance");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - m) / sd;
    return out;
}

RegressionReport ols_fit(std::span<const double> design, std::size_t n_rows, std::size_t n_cols,
                         std::span<const double> response, std::span<const std::string> names,
                         bool intercept) {
    if (n_rows == 0 || n_cols == 0) throw ValidationError("ols_fit: empty design");
    if (design.size() != n_rows * n_cols) throw ValidationError("ols_fit: design size mismatch");
    if (response.size() != n_rows) throw ValidationError("ols_fit: response length mismatch");
    if (names.size() != n_cols) throw ValidationError("ols_fit: name count mismatch");
    for (double v : design)
        if (!std::isfinite(v)) throw ValidationError("ols_fit: non-finite design value");
    for (double v : response)
        if (!std::isfinite(v)) throw ValidationError("ols_fit: non-finite response value");

    const std::size_t p = n_cols + (intercept ? 1 : 0);
    if (n_rows <= p) throw InsufficientSampleError("ols_fit: need more rows than coefficients");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_rows));
    for (std::size_t i = 0; i < n_rows; ++i) {
        std::size_t col = 0;
        if (intercept) x(static_cast<Eigen::Index>(i), 0) = 1.0, col = 1;
        for (std::size_t j = 0; j < n_cols; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col + j)) =
                design[i * n_cols + j];
        y(static_cast<Eigen::Index>(i)) = response[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p) {
        // permutation puts the dependent columns last
        const auto& perm = qr.colsPermutation().indices();
        std::string culprits;
        for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
            std::size_t orig = static_cast<std::size_t>(perm(k));
            std::string name =
                intercept ? (orig == 0 ? std::string("const") : std::string(names[orig - 1]))
                          : std::string(names[orig]);
            if (!culprits.empty()) culprits += ", ";
            culprits += name;
        }
        throw SingularDesignError("ols_fit: rank-deficient design; dependent columns: " + culprits);
    }

    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - x * beta;
    const double rss = resid.squaredNorm();
    const double ybar = y.mean();
    double tss = 0.0;
    if (intercept) {
        tss = (y.array() - ybar).matrix().squaredNorm();
    } else {
        tss = y.squaredNorm();
    }

    RegressionReport report;
    report.n_obs = n_rows;
    report.dof_residual = n_rows - p;
    const double dof = static_cast<double>(report.dof_residual);

    const bool y_constant = tss <= 0.0;
    report.degenerate_y = y_constant;
    report.r_squared = y_constant ? 0.0 : 1.0 - rss / tss;
    const double n_adj = intercept ? static_cast<double>(n_rows) - 1.0
                                   : static_cast<double>(n_rows);
    report.adjusted_r_squared =
        y_constant ? 0.0 : 1.0 - (1.0 - report.r_squared) * n_adj / dof;

    const double s2 = rss / dof;
    Eigen::MatrixXd xtx_inv =
        (x.transpose() * x).ldlt().solve(Eigen::MatrixXd::Identity(
            static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
    const double t_crit = student_t_quantile(0.975, dof);

    report.coefficients.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        CoefficientEstimate c;
        c.name = intercept ? (j == 0 ? std::string("const") : std::string(names[j - 1]))
                           : std::string(names[j]);
        c.beta = beta(static_cast<Eigen::Index>(j));
        const double var = s2 * xtx_inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        c.std_error = var > 0.0 ? std::sqrt(var) : 0.0;
        if (y_constant || c.std_error <= 0.0) {
            c.t_stat = 0.0;
            c.p_value = 1.0;
            c.ci95_lo = c.beta;
            c.ci95_hi = c.beta;
        } else {
            c.t_stat = c.beta / c.std_error;
            c.p_value = student_t_two_sided_p(c.t_stat, dof);
            c.ci95_lo = c.beta - t_crit * c.std_error;
            c.ci95_hi = c.beta + t_crit * c.std_error;
        }
        c.significant_05 = c.p_value < 0.05;
        c.significant_01 = c.p_value < 0.01;
        report.coefficients.push_back(std::move(c));
    }
    return report;
}

namespace {

struct IndicatorColumn {
    const char* name;
    std::optional<double> DistrictIndicators::* field;
};

constexpr IndicatorColumn kColumns[] = {
    {"mobility_diversity", &DistrictIndicators::mobility_diversity},
    {"merchant_diversity", &DistrictIndicators::merchant_diversity},
    {"merchant_share_bias", &DistrictIndicators::merchant_share_bias},
    {"gender_diversity", &DistrictIndicators::gender_diversity},
    {"marital_diversity", &DistrictIndicators::marital_diversity},
    {"education_diversity", &DistrictIndicators::education_diversity},
    {"job_diversity", &DistrictIndicators::job_diversity},
    {"income_gini", &DistrictIndicators::income_gini},
};

}  // namespace

RegressionDataset build_regression_dataset(std::span<const HuffFitResult> fits,
                                           std::span<const DistrictIndicators> indicators,
                                           const std::string& category_filter) {
    std::map<std::string, const DistrictIndicators*> by_district;
    for (const auto& row : indicators) by_district[row.district_id] = &row;

    RegressionDataset ds;
    ds.scope = category_filter.empty() ? "pooled" : category_filter;

    std::vector<const HuffFitResult*> retained;
    std::vector<std::string> orphans;
    for (const auto& fit : fits) {
        if (!category_filter.empty() && fit.category_id != category_filter) continue;
        const std::string label = fit.district_id + "/" + fit.category_id;
        if (fit.degenerate) {
            ds.excluded_rows.emplace_back(
                label, "degenerate fit: " + (fit.degenerate_reason.empty()
                                                 ? std::string("no score")
                                                 : fit.degenerate_reason));
            continue;
        }
        auto it = by_district.find(fit.district_id);
        if (it == by_district.end()) {
            orphans.push_back(label);
            continue;
        }
        const DistrictIndicators& ind = *it->second;
        std::string missing;
        for (const auto& col : kColumns) {
            if (!(ind.*(col.field)).has_value()) {
                if (!missing.empty()) missing += ", ";
                missing += col.name;
            }
        }
        if (!missing.empty()) {
            ds.excluded_rows.emplace_back(label, "undefined indicators: " + missing);
            continue;
        }
        retained.push_back(&fit);
    }
    if (!orphans.empty()) {
        std::string joined;
        for (const auto& o : orphans) {
            if (!joined.empty()) joined += ", ";
            joined += o;
        }
        throw IntegrityError("build_regression_dataset: fits without district indicators: " +
                             joined);
    }

    const std::size_t n = retained.size();
    if (n < 3) throw InsufficientSampleError("build_regression_dataset: fewer than 3 usable rows");

    // raw columns, then standardize; zero-variance columns get dropped
    std::vector<std::vector<double>> raw;
    std::vector<std::string> raw_names;
    for (const auto& col : kColumns) {
        std::vector<double> v;
        v.reserve(n);
        for (const auto* fit : retained)
            v.push_back((by_district.at(fit->district_id)->*(col.field)).value());
        raw.push_back(std::move(v));
        raw_names.emplace_back(col.name);
    }

    std::vector<std::vector<double>> standardized;
    for (std::size_t j = 0; j < raw.size(); ++j) {
        try {
            standardized.push_back(zscore(raw[j]));
            ds.column_names.push_back(raw_names[j]);
        } catch (const DegenerateError&) {
            ds.dropped_columns.push_back(raw_names[j]);
        }
    }
    if (ds.column_names.empty())
        throw DegenerateError("build_regression_dataset: every indicator column is constant");

    std::vector<double> scores;
    scores.reserve(n);
    for (const auto* fit : retained) scores.push_back(fit->score);
    try {
        ds.y = zscore(scores);
    } catch (const DegenerateError&) {
        ds.y = std::move(scores);
        ds.y_constant = true;
    }

    ds.row_labels.reserve(n);
    for (const auto* fit : retained)
        ds.row_labels.push_back(fit->district_id + "/" + fit->category_id);
    ds.x.resize(n * ds.column_names.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < ds.column_names.size(); ++j)
            ds.x[i * ds.column_names.size() + j] = standardized[j][i];
    return ds;
}

RegressionReport run_regression(const RegressionDataset& dataset) {
    RegressionReport report = ols_fit(dataset.x, dataset.n_rows(), dataset.n_cols(), dataset.y,
                                      dataset.column_names, /*intercept=*/true);
    report.scope = dataset.scope;
    if (dataset.y_constant) {
        report.degenerate_y = true;
        report.r_squared = 0.0;
        report.adjusted_r_squared = 0.0;
        for (auto& c : report.coefficients) {
            c.t_stat = 0.0;
            c.p_value = 1.0;
            c.ci95_lo = c.beta;
            c.ci95_hi = c.beta;
            c.significant_05 = false;
            c.significant_01 = false;
        }
    }
    return report;
}

}  // namespace huffkit
