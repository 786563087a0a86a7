#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "huffkit/geo.hpp"
#include "huffkit/huff.hpp"
#include "huffkit/indicators.hpp"
#include "huffkit/ingest.hpp"
#include "huffkit/partition.hpp"
#include "huffkit/pipeline.hpp"
#include "huffkit/regress.hpp"
#include "huffkit/synth.hpp"

namespace huffkit {

// Key/value dataset summary (period, transaction and customer counts,
// average transactions per customer).
void write_dataset_summary_csv(std::ostream& out, const DatasetSummary& summary);

void write_rejections_csv(std::ostream& out, const SourceRejections& rejections);

void write_cell_exclusions_csv(std::ostream& out, std::span<const CellExclusion> exclusions);

// Master per-cell fit table; floats printed round-trip exact. Degenerate
// rows keep their flag and reason with empty numeric fields.
void write_cell_fits_csv(std::ostream& out, std::span<const HuffFitResult> fits);
std::vector<HuffFitResult> read_cell_fits_csv(std::istream& in);

// Per-category score summary: merchant_category, mean/std/max/min of r.
void write_fit_summary_csv(std::ostream& out, std::span<const CategorySummary> summaries);

// Display-layout per-cell table for one category (fixed precision).
void write_appendix_csv(std::ostream& out, std::span<const HuffFitResult> fits,
                        const std::string& category_id);

// One row per district; undefined indicators are empty fields with the
// reasons collected in the last column. Round-trip exact.
void write_indicators_csv(std::ostream& out, std::span<const DistrictIndicators> rows);
std::vector<DistrictIndicators> read_indicators_csv(std::istream& in);

// Full regression output (intercept row included, lossless floats).
void write_regression_csv(std::ostream& out, const RegressionReport& report);

// Display coefficient table: indicator display names, beta, CI, stars
// (* p<0.05, ** p<0.01). The intercept row is omitted.
void write_coefficient_table_csv(std::ostream& out, const RegressionReport& report);

// scope -> adjusted R^2 rows (three decimals).
void write_adjusted_r2_csv(std::ostream& out,
                           std::span<const RegressionReport> reports);

void write_distance_histogram_csv(std::ostream& out, const DistanceHistogram& histogram);

void write_mobility_matrix_csv(std::ostream& out, const MobilityMatrix& matrix);

// Human-readable label for a regression column name (e.g. income_gini ->
// "Income inequality"); unknown names pass through unchanged.
std::string indicator_display_name(const std::string& column_name);

}  // namespace huffkit
