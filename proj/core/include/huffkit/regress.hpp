#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "huffkit/huff.hpp"
#include "huffkit/indicators.hpp"

namespace huffkit {

// (x - mean) / sd with the n-1 sample sd. Throws InsufficientSampleError
// (< 2 values) and DegenerateError (zero variance).
std::vector<double> zscore(std::span<const double> values);

struct CoefficientEstimate {
    std::string name;
    double beta = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    bool significant_05 = false;
    bool significant_01 = false;
};

struct RegressionReport {
    std::string scope;  // "pooled" or a category id
    std::vector<CoefficientEstimate> coefficients;  // intercept ("const") first when fitted
    double r_squared = 0.0;
    double adjusted_r_squared = 0.0;  // may be negative
    std::size_t n_obs = 0;
    std::size_t dof_residual = 0;
    bool degenerate_y = false;  // constant response: R^2 = 0, all p = 1
};

// OLS on a row-major n x p design (intercept prepended when requested).
// Inference: s^2 = RSS / dof, two-sided t p-values, 95% CIs. Throws
// SingularDesignError naming the dependent columns, ValidationError on
// shape errors, InsufficientSampleError when dof would be < 1.
RegressionReport ols_fit(std::span<const double> design, std::size_t n_rows, std::size_t n_cols,
                         std::span<const double> response, std::span<const std::string> names,
                         bool intercept = true);

struct RegressionDataset {
    std::string scope;                      // "pooled" or the category filter
    std::vector<std::string> row_labels;    // "<district>/<category>"
    std::vector<std::string> column_names;  // retained indicator columns, fixed order
    std::vector<double> x;                  // row-major n x p, z-scored
    std::vector<double> y;                  // z-scored cell scores
    bool y_constant = false;                // y left raw when it has zero variance
    std::vector<std::string> dropped_columns;  // zero-variance indicators
    std::vector<std::pair<std::string, std::string>> excluded_rows;  // label -> reason

    std::size_t n_rows() const { return y.size(); }
    std::size_t n_cols() const { return column_names.size(); }
};

// Joins cell fits with their district's indicators into a standardized
// design. `category_filter` empty means pooled across categories. Degenerate
// fits and rows with undefined indicators are excluded (with reasons);
// a fit whose district has no indicator row is an IntegrityError.
RegressionDataset build_regression_dataset(std::span<const HuffFitResult> fits,
                                           std::span<const DistrictIndicators> indicators,
                                           const std::string& category_filter = "");

// ols_fit on the dataset's standardized columns, intercept included.
RegressionReport run_regression(const RegressionDataset& dataset);

}  // namespace huffkit
