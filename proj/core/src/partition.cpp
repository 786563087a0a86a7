#include "huffkit/partition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "huffkit/errors.hpp"

namespace huffkit {

std::vector<double> VisitMatrix::row_totals() const {
    std::vector<double> out(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[i] += at(i, j);
    return out;
}

std::vector<double> VisitMatrix::col_totals() const {
    std::vector<double> out(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[j] += at(i, j);
    return out;
}

double VisitMatrix::total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

Partition partition_cells(const Dataset& dataset, const PartitionOptions& options) {
    const bool declared_districts = !options.districts.empty();
    const bool declared_categories = !options.categories.empty();
    std::unordered_set<std::string> district_set(options.districts.begin(),
                                                 options.districts.end());
    std::unordered_set<std::string> category_set(options.categories.begin(),
                                                 options.categories.end());

    using CellKey = std::pair<std::string, std::string>;  // district, category
    std::map<CellKey, StudyCell, bool (*)(const CellKey&, const CellKey&)> cells(
        [](const CellKey& a, const CellKey& b) {
            if (a.first != b.first) return natural_less(a.first, b.first);
            return natural_less(a.second, b.second);
        });

    for (std::size_t m = 0; m < dataset.merchants.size(); ++m) {
        const auto& merchant = dataset.merchants[m];
        if (declared_districts && !district_set.count(merchant.district_id))
            throw IntegrityError("merchant " + merchant.merchant_id +
                                 " references unknown district '" + merchant.district_id + "'");
        if (declared_categories && !category_set.count(merchant.category_id)) continue;
        auto& cell = cells[{merchant.district_id, merchant.category_id}];
        cell.district_id = merchant.district_id;
        cell.category_id = merchant.category_id;
        cell.merchant_rows.push_back(m);
    }

    for (std::size_t t = 0; t < dataset.transactions.size(); ++t) {
        const auto& tx = dataset.transactions[t];
        const auto mit = dataset.merchant_index.find(tx.merchant_id);
        if (mit == dataset.merchant_index.end())
            throw IntegrityError("transaction references unknown merchant '" + tx.merchant_id +
                                 "'");
        const auto& merchant = dataset.merchants[mit->second];
        const auto cit = cells.find({merchant.district_id, merchant.category_id});
        if (cit == cells.end()) continue;  // category filtered out
        cit->second.transaction_rows.push_back(t);
    }

    Partition out;
    for (auto& [key, cell] : cells) {
        if (cell.transaction_rows.empty()) {
            out.exclusions.push_back({cell.district_id, cell.category_id, "no transactions"});
            continue;
        }
        if (cell.transaction_rows.size() < options.min_cell_transactions) {
            out.exclusions.push_back(
                {cell.district_id, cell.category_id, "below minimum transactions"});
            continue;
        }
        std::sort(cell.merchant_rows.begin(), cell.merchant_rows.end(),
                  [&](std::size_t a, std::size_t b) {
                      return natural_less(dataset.merchants[a].merchant_id,
                                          dataset.merchants[b].merchant_id);
                  });
        std::set<std::string, NaturalLess> customer_ids;
        for (std::size_t t : cell.transaction_rows)
            customer_ids.insert(dataset.transactions[t].customer_id);
        cell.customer_rows.reserve(customer_ids.size());
        for (const auto& id : customer_ids)
            cell.customer_rows.push_back(dataset.customer_index.at(id));
        out.cells.push_back(std::move(cell));
    }

    // log declared pairs that produced no merchants at all
    if (declared_districts && declared_categories) {
        std::set<CellKey> seen;
        for (const auto& c : out.cells) seen.insert({c.district_id, c.category_id});
        for (const auto& e : out.exclusions) seen.insert({e.district_id, e.category_id});
        for (const auto& d : options.districts)
            for (const auto& c : options.categories)
                if (!seen.count({d, c})) out.exclusions.push_back({d, c, "no merchants"});
    }
    return out;
}

VisitMatrix build_visit_matrix(const Dataset& dataset, const StudyCell& cell,
                               VisitWeighting weighting) {
    VisitMatrix vm;
    vm.rows = cell.customer_rows.size();
    vm.cols = cell.merchant_rows.size();
    vm.values.assign(vm.rows * vm.cols, 0.0);

    std::unordered_map<std::size_t, std::size_t> row_of, col_of;
    row_of.reserve(vm.rows);
    col_of.reserve(vm.cols);
    for (std::size_t i = 0; i < cell.customer_rows.size(); ++i)
        row_of.emplace(cell.customer_rows[i], i);
    for (std::size_t j = 0; j < cell.merchant_rows.size(); ++j)
        col_of.emplace(cell.merchant_rows[j], j);

    for (std::size_t t : cell.transaction_rows) {
        const auto& tx = dataset.transactions[t];
        const auto ci = dataset.customer_index.find(tx.customer_id);
        const auto mi = dataset.merchant_index.find(tx.merchant_id);
        if (ci == dataset.customer_index.end() || mi == dataset.merchant_index.end())
            throw IntegrityError("visit matrix: transaction references unknown id");
        const auto ri = row_of.find(ci->second);
        const auto cj = col_of.find(mi->second);
        if (ri == row_of.end() || cj == col_of.end())
            throw IntegrityError("visit matrix: transaction outside its cell");
        vm.at(ri->second, cj->second) +=
            weighting == VisitWeighting::kCounts ? 1.0 : money_to_major(tx.amount);
    }
    return vm;
}

Money merchant_revenue(std::span<const TransactionRecord> records,
                       std::string_view merchant_id) {
    Money total = 0;
    for (const auto& r : records)
        if (r.merchant_id == merchant_id) total += r.amount;
    return total;
}

void compute_merchant_revenues(Dataset& dataset) {
    for (auto& m : dataset.merchants) m.revenue = 0;
    for (const auto& tx : dataset.transactions) {
        const auto it = dataset.merchant_index.find(tx.merchant_id);
        if (it == dataset.merchant_index.end())
            throw IntegrityError("revenue pass: transaction references unknown merchant '" +
                                 tx.merchant_id + "'");
        dataset.merchants[it->second].revenue += tx.amount;
    }
}

}  // namespace huffkit
