#include "huffkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "huffkit/errors.hpp"
#include "huffkit/rng.hpp"

namespace huffkit {

namespace {

std::ifstream open_or_throw(const std::string& path, const char* what) {
    if (path.empty())
        throw ValidationError(std::string("pipeline: no ") + what + " file configured");
    std::ifstream in(path);
    if (!in) throw ValidationError(std::string("pipeline: cannot open ") + what + " file " + path);
    return in;
}

}  // namespace

LoadResult load_dataset(const RunConfig& config) {
    LoadResult result;

    std::ifstream cust_in = open_or_throw(config.customers_path, "customers");
    CustomerIngest ci = ingest_customers(cust_in);
    std::ifstream merch_in = open_or_throw(config.merchants_path, "merchants");
    MerchantIngest mi = ingest_merchants(merch_in);

    result.dataset.customers = std::move(ci.customers);
    result.dataset.merchants = std::move(mi.merchants);
    result.dataset.rebuild_indexes();
    result.rejections.customers = std::move(ci.rejections);
    result.rejections.merchants = std::move(mi.rejections);

    TransactionContext ctx;
    ctx.customers = &result.dataset.customer_index;
    ctx.merchants = &result.dataset.merchant_index;
    ctx.merchant_rows = &result.dataset.merchants;
    if (config.window.start != config.window.end) ctx.window = config.window;
    std::ifstream tx_in = open_or_throw(config.transactions_path, "transactions");
    TransactionIngest ti = ingest_transactions(tx_in, ctx);
    result.rejections.transactions = std::move(ti.rejections);

    const std::size_t tx_accepted = ti.records.size();
    if (config.min_transactions > 1) {
        ti.records = filter_active_customers(std::move(ti.records), config.min_transactions);
        result.filtered_inactive = tx_accepted - ti.records.size();
    }
    result.dataset.transactions = std::move(ti.records);

    result.rows_read = result.dataset.customers.size() + result.rejections.customers.size() +
                       result.dataset.merchants.size() + result.rejections.merchants.size() +
                       tx_accepted + result.rejections.transactions.size();
    result.rejection_fraction =
        result.rows_read == 0
            ? 0.0
            : static_cast<double>(result.rejections.total()) / static_cast<double>(result.rows_read);

    DistrictTable table;
    if (!config.districts_path.empty()) {
        std::ifstream in = open_or_throw(config.districts_path, "districts");
        table.boxes = ingest_district_boxes(in);
    }
    if (!config.customer_districts_path.empty()) {
        std::ifstream in = open_or_throw(config.customer_districts_path, "customer districts");
        table.explicit_labels = ingest_customer_districts(in);
    }
    result.unassigned_customers = assign_home_districts(result.dataset, table);
    result.boxes = std::move(table.boxes);

    compute_merchant_revenues(result.dataset);

    DateRange window = config.window;
    if (window.start == window.end && !result.dataset.transactions.empty()) {
        // derive the observed period when none was configured
        auto [lo, hi] = std::minmax_element(
            result.dataset.transactions.begin(), result.dataset.transactions.end(),
            [](const TransactionRecord& a, const TransactionRecord& b) {
                return a.timestamp < b.timestamp;
            });
        window = {lo->timestamp, hi->timestamp + 1};
    }
    if (!result.dataset.transactions.empty())
        result.summary = summarize(result.dataset.transactions, window);
    else
        result.summary.period_start = window.start, result.summary.period_end = window.end;

    return result;
}

GeneratedCity run_synthesis(const RunConfig& config) {
    if (!config.synth)
        throw ValidationError("pipeline: synth requested but the config has no synth section");
    CityConfig city = *config.synth;
    city.seed = config.seed;
    city.distance_policy = config.distance;
    if (config.window.start != config.window.end) city.window = config.window;
    return generate_city(city);
}

std::vector<CategorySummary> summarize_fits(std::span<const HuffFitResult> fits) {
    // preserve first-appearance order; fits arrive cell-sorted so categories
    // come out in natural order within the partition
    std::vector<CategorySummary> out;
    auto row_for = [&out](const std::string& category) -> CategorySummary& {
        for (auto& row : out)
            if (row.category_id == category) return row;
        out.push_back({});
        out.back().category_id = category;
        return out.back();
    };
    for (const auto& fit : fits) {
        CategorySummary& row = row_for(fit.category_id);
        if (fit.degenerate) {
            ++row.n_degenerate;
            continue;
        }
        const double r = fit.score;
        if (row.n_cells == 0) {
            row.mean_r = row.max_r = row.min_r = r;
            row.std_r = 0.0;
        } else {
            row.max_r = std::max(row.max_r, r);
            row.min_r = std::min(row.min_r, r);
        }
        ++row.n_cells;
    }
    // second pass for mean/std (numerically simple two-pass form)
    for (auto& row : out) {
        if (row.n_cells == 0) continue;
        double sum = 0.0;
        for (const auto& fit : fits)
            if (!fit.degenerate && fit.category_id == row.category_id) sum += fit.score;
        row.mean_r = sum / static_cast<double>(row.n_cells);
        if (row.n_cells >= 2) {
            double ss = 0.0;
            for (const auto& fit : fits)
                if (!fit.degenerate && fit.category_id == row.category_id) {
                    const double d = fit.score - row.mean_r;
                    ss += d * d;
                }
            row.std_r = std::sqrt(ss / static_cast<double>(row.n_cells - 1));
        }
    }
    return out;
}

FitRunResult fit_all_cells(const Dataset& dataset, const RunConfig& config) {
    PartitionOptions opts;
    opts.districts = config.districts;
    opts.categories = config.categories;
    opts.min_cell_transactions = config.min_cell_transactions;
    Partition partition = partition_cells(dataset, opts);

    FitRunResult result;
    result.exclusions = partition.exclusions;
    const std::size_t n_cells = partition.cells.size();
    result.fits.resize(n_cells);

    // distance histograms want every cell's distances, gathered per category
    std::map<std::string, std::vector<double>> distances_by_category;
    std::map<std::string, std::vector<double>> weights_by_category;

    std::vector<CellModelInputs> inputs(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        const StudyCell& cell = partition.cells[c];
        VisitMatrix visits = build_visit_matrix(dataset, cell, VisitWeighting::kCounts);
        inputs[c] = build_cell_inputs(dataset, cell, visits, config.distance);
        auto& dist = distances_by_category[cell.category_id];
        auto& wts = weights_by_category[cell.category_id];
        dist.insert(dist.end(), inputs[c].distances_km.begin(), inputs[c].distances_km.end());
        wts.insert(wts.end(), inputs[c].visit_weights.begin(), inputs[c].visit_weights.end());
    }

    const bool use_loglinear = config.estimator == "loglinear";
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_cells) return;
            const StudyCell& cell = partition.cells[c];
            HuffFitResult fit;
            try {
                const std::uint64_t cell_seed = RandomStream::derive_seed(
                    config.seed, "fit.cell." + cell.district_id + "." + cell.category_id);
                fit = use_loglinear ? fit_loglinear(inputs[c], config.fit)
                                    : fit_cell(inputs[c], config.fit, cell_seed);
            } catch (const DegenerateError& e) {
                fit = HuffFitResult{};
                fit.degenerate = true;
                fit.degenerate_reason = e.what();
                fit.score = std::numeric_limits<double>::quiet_NaN();
                fit.p_value = std::numeric_limits<double>::quiet_NaN();
            } catch (const InsufficientSampleError& e) {
                fit = HuffFitResult{};
                fit.degenerate = true;
                fit.degenerate_reason = e.what();
                fit.score = std::numeric_limits<double>::quiet_NaN();
                fit.p_value = std::numeric_limits<double>::quiet_NaN();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
            fit.district_id = cell.district_id;
            fit.category_id = cell.category_id;
            fit.n_customers = inputs[c].n_customers;
            fit.n_merchants = inputs[c].n_merchants;
            fit.total_visits = inputs[c].total_visits();
            result.fits[c] = std::move(fit);
        }
    };

    const std::size_t n_workers = std::max<std::size_t>(1, std::min(config.workers, n_cells));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.summaries = summarize_fits(result.fits);
    for (const auto& [category, dist] : distances_by_category)
        result.distance_histograms[category] =
            distance_distribution(dist, weights_by_category[category], 1.0);
    return result;
}

}  // namespace huffkit
