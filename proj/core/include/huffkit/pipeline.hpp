#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "huffkit/config.hpp"
#include "huffkit/geo.hpp"
#include "huffkit/huff.hpp"
#include "huffkit/indicators.hpp"
#include "huffkit/ingest.hpp"
#include "huffkit/partition.hpp"
#include "huffkit/regress.hpp"
#include "huffkit/synth.hpp"
#include "huffkit/types.hpp"

namespace huffkit {

struct SourceRejections {
    std::vector<Rejection> transactions;
    std::vector<Rejection> customers;
    std::vector<Rejection> merchants;

    std::size_t total() const {
        return transactions.size() + customers.size() + merchants.size();
    }
};

struct LoadResult {
    Dataset dataset;
    std::vector<DistrictBox> boxes;           // empty when no district table given
    DatasetSummary summary;                   // over retained transactions
    SourceRejections rejections;
    std::size_t rows_read = 0;                // data rows across all three sources
    double rejection_fraction = 0.0;          // rejections.total() / rows_read
    std::size_t filtered_inactive = 0;        // transactions dropped by activity filter
    std::vector<std::string> unassigned_customers;  // no label and no containing box
};

// Reads, validates, and assembles the dataset named by the config. Explicit
// customer-district labels win over point-in-box assignment. Throws
// ValidationError/SchemaError on unusable inputs; data-quality findings are
// reported, not thrown.
LoadResult load_dataset(const RunConfig& config);

// Fills config-dependent generator fields (seed, window, distance policy)
// and runs generate_city.
GeneratedCity run_synthesis(const RunConfig& config);

struct CategorySummary {
    std::string category_id;
    std::size_t n_cells = 0;       // non-degenerate fitted cells
    std::size_t n_degenerate = 0;
    double mean_r = 0.0;
    double std_r = 0.0;            // sample std; 0 when n_cells < 2
    double max_r = 0.0;
    double min_r = 0.0;
};

struct FitRunResult {
    std::vector<HuffFitResult> fits;              // cell order: (district, category) natural
    std::vector<CellExclusion> exclusions;        // cells never fitted
    std::vector<CategorySummary> summaries;       // categories with >= 1 fitted cell
    std::map<std::string, DistanceHistogram> distance_histograms;  // by category
};

// Partitions into district x category cells and fits every cell. Each cell
// draws its seed from substream "fit.cell.<district>.<category>" of the
// master seed, so results do not depend on scheduling; `workers` threads
// share the queue, and output order is always the partition's cell order.
// Degenerate cells produce a flagged row instead of aborting the run.
FitRunResult fit_all_cells(const Dataset& dataset, const RunConfig& config);

// Per-category summary rows over the given fits (skips degenerate rows).
std::vector<CategorySummary> summarize_fits(std::span<const HuffFitResult> fits);

}  // namespace huffkit
