#pragma once

#include <span>
#include <string>
#include <vector>

#include "huffkit/types.hpp"

namespace huffkit {

// One district × category study cell. Rows index into the owning Dataset;
// id order is natural (d2 before d10) so reports are stable.
struct StudyCell {
    std::string district_id;
    std::string category_id;
    std::vector<std::size_t> merchant_rows;     // all (district, category) merchants
    std::vector<std::size_t> customer_rows;     // customers with >= 1 in-cell transaction
    std::vector<std::size_t> transaction_rows;  // the in-cell transactions
};

enum class VisitWeighting { kCounts, kSpend };

// customers × merchants weights. Counts mode stores exact visit tallies;
// spend mode stores transaction amounts in major units.
struct VisitMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major

    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    std::vector<double> row_totals() const;
    std::vector<double> col_totals() const;
    double total() const;
};

struct CellExclusion {
    std::string district_id;
    std::string category_id;
    std::string reason;
};

struct PartitionOptions {
    std::vector<std::string> districts;   // empty: every district observed in merchants
    std::vector<std::string> categories;  // empty: every category observed in merchants
    std::size_t min_cell_transactions = 0;
};

struct Partition {
    std::vector<StudyCell> cells;  // sorted by (district, category), natural order
    std::vector<CellExclusion> exclusions;
};

// Splits retained transactions by merchant district × category. A merchant
// whose district is not in the declared district list is an integrity error.
Partition partition_cells(const Dataset& dataset, const PartitionOptions& options);

VisitMatrix build_visit_matrix(const Dataset& dataset, const StudyCell& cell,
                               VisitWeighting weighting);

// Sum of a single merchant's transaction amounts (exact, minor units).
Money merchant_revenue(std::span<const TransactionRecord> records, std::string_view merchant_id);

// One-pass fill of every MerchantProfile::revenue from the retained records.
void compute_merchant_revenues(Dataset& dataset);

}  // namespace huffkit
