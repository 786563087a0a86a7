#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "huffkit/config.hpp"
#include "huffkit/csv.hpp"
#include "huffkit/errors.hpp"
#include "huffkit/pipeline.hpp"
#include "huffkit/reports.hpp"
#include "huffkit/types.hpp"

namespace fs = std::filesystem;
using namespace huffkit;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kDataQualityWarning = 2;

struct Flags {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::vector<std::string> categories;
    std::vector<std::string> districts;
    std::size_t min_transactions = 0;
    std::string anchor;
    double floor_km = 0.0;

    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* category_opt = nullptr;
    CLI::Option* district_opt = nullptr;
    CLI::Option* min_tx_opt = nullptr;
    CLI::Option* anchor_opt = nullptr;
    CLI::Option* floor_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
    flags.out_opt = cmd->add_option("--out", flags.out, "output directory");
    flags.seed_opt = cmd->add_option("--seed", flags.seed, "master random seed");
    flags.workers_opt = cmd->add_option("--workers", flags.workers, "worker threads");
    flags.category_opt =
        cmd->add_option("--category", flags.categories, "restrict to a merchant category");
    flags.district_opt =
        cmd->add_option("--district", flags.districts, "restrict to a district");
    flags.min_tx_opt = cmd->add_option("--min-transactions", flags.min_transactions,
                                       "drop customers with fewer transactions");
    flags.anchor_opt = cmd->add_option("--anchor", flags.anchor, "distance anchor")
                           ->check(CLI::IsMember({"home", "work", "min"}));
    flags.floor_opt = cmd->add_option("--floor-km", flags.floor_km, "minimum distance in km");
}

RunConfig resolve_config(const Flags& flags) {
    RunConfig cfg;
    if (!flags.config_path.empty()) cfg = load_run_config(flags.config_path);
    if (flags.out_opt->count()) cfg.out_dir = flags.out;
    if (flags.seed_opt->count()) {
        cfg.seed = flags.seed;
        cfg.seed_explicit = true;
    }
    if (flags.workers_opt->count()) cfg.workers = flags.workers;
    if (flags.category_opt->count()) cfg.categories = flags.categories;
    if (flags.district_opt->count()) cfg.districts = flags.districts;
    if (flags.min_tx_opt->count()) cfg.min_transactions = flags.min_transactions;
    if (flags.anchor_opt->count()) cfg.distance.anchor = parse_anchor(flags.anchor);
    if (flags.floor_opt->count()) cfg.distance.floor_km = flags.floor_km;
    cfg.validate();
    return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    std::ofstream echo(dir / "effective_config.json", std::ios::binary);
    if (!echo) throw ValidationError("cannot write " + (dir / "effective_config.json").string());
    echo << effective_config_json(cfg);
    return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    body(out);
    if (!out) throw ValidationError("failed while writing " + path.string());
}

void require_seed(const RunConfig& cfg, const char* command) {
    if (!cfg.seed_explicit)
        throw ValidationError(std::string(command) +
                              ": a seed is required (--seed or the config's seed key)");
}

int rejection_verdict(const RunConfig& cfg, const LoadResult& loaded) {
    if (loaded.rejection_fraction > cfg.max_rejection_fraction) {
        std::fprintf(stderr,
                     "warning: rejected %zu of %zu rows (%.4f%%), above the configured %.4f%%\n",
                     loaded.rejections.total(), loaded.rows_read,
                     100.0 * loaded.rejection_fraction, 100.0 * cfg.max_rejection_fraction);
        return kDataQualityWarning;
    }
    return kOk;
}

// district universe for indicator tables: declared boxes win, else labels
std::vector<std::string> district_universe(const RunConfig& cfg, const LoadResult& loaded) {
    if (!cfg.districts.empty()) return cfg.districts;
    std::set<std::string> seen;
    std::vector<std::string> out;
    if (!loaded.boxes.empty()) {
        for (const auto& b : loaded.boxes)
            if (seen.insert(b.district_id).second) out.push_back(b.district_id);
        return out;
    }
    for (const auto& label : loaded.dataset.customer_district)
        if (!label.empty() && seen.insert(label).second) out.push_back(label);
    for (const auto& m : loaded.dataset.merchants)
        if (seen.insert(m.district_id).second) out.push_back(m.district_id);
    return out;
}

void write_fit_outputs(const fs::path& dir, const FitRunResult& result) {
    write_file(dir / "cell_fits.csv",
               [&](std::ostream& out) { write_cell_fits_csv(out, result.fits); });
    write_file(dir / "fit_summary.csv",
               [&](std::ostream& out) { write_fit_summary_csv(out, result.summaries); });
    write_file(dir / "cell_exclusions.csv",
               [&](std::ostream& out) { write_cell_exclusions_csv(out, result.exclusions); });
    for (const auto& [category, histogram] : result.distance_histograms)
        write_file(dir / ("distance_histogram_" + category + ".csv"),
                   [&](std::ostream& out) { write_distance_histogram_csv(out, histogram); });
    for (const auto& s : result.summaries)
        if (s.n_cells == 0)
            std::fprintf(stderr, "warning: category %s: every cell degenerate, omitted from summary\n",
                         s.category_id.c_str());
}

// regression scopes: pooled plus each category present in the fits
std::vector<RegressionReport> run_regressions(const fs::path& dir,
                                              const std::vector<HuffFitResult>& fits,
                                              const std::vector<DistrictIndicators>& indicators) {
    std::vector<std::string> scopes{"pooled"};
    {
        std::set<std::string, NaturalLess> seen;
        for (const auto& f : fits) seen.insert(f.category_id);
        scopes.insert(scopes.end(), seen.begin(), seen.end());
    }
    std::vector<RegressionReport> reports;
    for (const auto& scope : scopes) {
        try {
            RegressionDataset ds =
                build_regression_dataset(fits, indicators, scope == "pooled" ? "" : scope);
            RegressionReport report = run_regression(ds);
            write_file(dir / ("regression_" + scope + ".csv"),
                       [&](std::ostream& out) { write_regression_csv(out, report); });
            write_file(dir / ("coefficients_" + scope + ".csv"),
                       [&](std::ostream& out) { write_coefficient_table_csv(out, report); });
            if (!ds.excluded_rows.empty())
                std::fprintf(stderr, "note: scope %s: %zu cells excluded from regression\n",
                             scope.c_str(), ds.excluded_rows.size());
            reports.push_back(std::move(report));
        } catch (const InsufficientSampleError& e) {
            std::fprintf(stderr, "warning: scope %s skipped: %s\n", scope.c_str(), e.what());
        } catch (const DegenerateError& e) {
            std::fprintf(stderr, "warning: scope %s skipped: %s\n", scope.c_str(), e.what());
        }
    }
    if (reports.empty())
        throw ValidationError("regress: no scope had enough usable cells to fit");
    write_file(dir / "adjusted_r2.csv",
               [&](std::ostream& out) { write_adjusted_r2_csv(out, reports); });
    return reports;
}

int cmd_ingest(const RunConfig& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    LoadResult loaded = load_dataset(cfg);
    write_file(dir / "summary.csv",
               [&](std::ostream& out) { write_dataset_summary_csv(out, loaded.summary); });
    write_file(dir / "rejections.csv",
               [&](std::ostream& out) { write_rejections_csv(out, loaded.rejections); });
    std::printf("ingest: %zu transactions, %zu customers, %zu merchants, %zu rejections\n",
                loaded.dataset.transactions.size(), loaded.dataset.customers.size(),
                loaded.dataset.merchants.size(), loaded.rejections.total());
    return rejection_verdict(cfg, loaded);
}

int cmd_fit(const RunConfig& cfg) {
    require_seed(cfg, "fit");
    const fs::path dir = prepare_out_dir(cfg);
    LoadResult loaded = load_dataset(cfg);
    FitRunResult result = fit_all_cells(loaded.dataset, cfg);
    write_fit_outputs(dir, result);
    std::size_t fitted = 0;
    for (const auto& f : result.fits)
        if (!f.degenerate) ++fitted;
    std::printf("fit: %zu cells fitted, %zu degenerate, %zu excluded\n", fitted,
                result.fits.size() - fitted, result.exclusions.size());
    return rejection_verdict(cfg, loaded);
}

int cmd_indicators(const RunConfig& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    LoadResult loaded = load_dataset(cfg);
    auto rows = compute_district_indicators(loaded.dataset, district_universe(cfg, loaded));
    write_file(dir / "indicators.csv",
               [&](std::ostream& out) { write_indicators_csv(out, rows); });
    std::size_t undefined = 0;
    for (const auto& r : rows) undefined += r.undefined_reasons.size();
    std::printf("indicators: %zu districts, %zu undefined fields\n", rows.size(), undefined);
    return rejection_verdict(cfg, loaded);
}

int cmd_regress(const RunConfig& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    const std::string fits_path =
        cfg.cell_fits_path.empty() ? (dir / "cell_fits.csv").string() : cfg.cell_fits_path;
    const std::string ind_path =
        cfg.indicators_path.empty() ? (dir / "indicators.csv").string() : cfg.indicators_path;
    std::ifstream fits_in(fits_path);
    if (!fits_in) throw ValidationError("regress: cannot open " + fits_path);
    std::ifstream ind_in(ind_path);
    if (!ind_in) throw ValidationError("regress: cannot open " + ind_path);
    auto fits = read_cell_fits_csv(fits_in);
    auto indicators = read_indicators_csv(ind_in);
    auto reports = run_regressions(dir, fits, indicators);
    std::printf("regress: %zu scopes fitted\n", reports.size());
    return kOk;
}

int cmd_synth(const RunConfig& cfg) {
    require_seed(cfg, "synth");
    const fs::path dir = prepare_out_dir(cfg);
    GeneratedCity city = run_synthesis(cfg);
    write_file(dir / "transactions.csv",
               [&](std::ostream& out) { write_transactions_csv(out, city.dataset.transactions); });
    write_file(dir / "customers.csv",
               [&](std::ostream& out) { write_customers_csv(out, city.dataset.customers); });
    write_file(dir / "merchants.csv",
               [&](std::ostream& out) { write_merchants_csv(out, city.dataset.merchants); });
    write_file(dir / "districts.csv",
               [&](std::ostream& out) { write_districts_csv(out, city.boxes); });
    std::vector<std::pair<std::string, std::string>> labels;
    for (std::size_t i = 0; i < city.dataset.customers.size(); ++i)
        labels.emplace_back(city.dataset.customers[i].customer_id,
                            city.dataset.customer_district[i]);
    write_file(dir / "customer_districts.csv",
               [&](std::ostream& out) { write_customer_districts_csv(out, labels); });
    CityConfig resolved = *cfg.synth;
    resolved.seed = cfg.seed;
    resolved.distance_policy = cfg.distance;
    if (cfg.window.start != cfg.window.end) resolved.window = cfg.window;
    write_file(dir / "truth.json",
               [&](std::ostream& out) { write_truth_json(out, city, resolved); });
    std::printf("synth: %zu customers, %zu merchants, %zu transactions, %zu cells\n",
                city.dataset.customers.size(), city.dataset.merchants.size(),
                city.dataset.transactions.size(), city.truths.size());
    return kOk;
}

int cmd_distances(const RunConfig& cfg) {
    const fs::path dir = prepare_out_dir(cfg);
    LoadResult loaded = load_dataset(cfg);
    PartitionOptions opts;
    opts.districts = cfg.districts;
    opts.categories = cfg.categories;
    opts.min_cell_transactions = cfg.min_cell_transactions;
    Partition partition = partition_cells(loaded.dataset, opts);

    std::map<std::string, std::vector<double>> distances, weights;
    for (const auto& cell : partition.cells) {
        VisitMatrix visits = build_visit_matrix(loaded.dataset, cell, VisitWeighting::kCounts);
        try {
            CellModelInputs inputs =
                build_cell_inputs(loaded.dataset, cell, visits, cfg.distance);
            auto& d = distances[cell.category_id];
            auto& w = weights[cell.category_id];
            d.insert(d.end(), inputs.distances_km.begin(), inputs.distances_km.end());
            w.insert(w.end(), inputs.visit_weights.begin(), inputs.visit_weights.end());
        } catch (const DegenerateError& e) {
            std::fprintf(stderr, "warning: cell %s/%s skipped: %s\n", cell.district_id.c_str(),
                         cell.category_id.c_str(), e.what());
        }
    }
    if (distances.empty()) throw ValidationError("distances: no usable cells");

    write_file(dir / "distance_summary.csv", [&](std::ostream& out) {
        CsvWriter w(out);
        w.write_row({"merchant_category", "mean_km", "total_weight"});
        for (const auto& [category, d] : distances) {
            DistanceHistogram h = distance_distribution(d, weights[category], 1.0);
            char mean_buf[32], weight_buf[32];
            std::snprintf(mean_buf, sizeof mean_buf, "%.6f", h.mean_km);
            std::snprintf(weight_buf, sizeof weight_buf, "%.17g", h.total_weight);
            w.write_row({category, mean_buf, weight_buf});
        }
    });
    for (const auto& [category, d] : distances) {
        DistanceHistogram h = distance_distribution(d, weights[category], 1.0);
        write_file(dir / ("distance_histogram_" + category + ".csv"),
                   [&](std::ostream& out) { write_distance_histogram_csv(out, h); });
    }
    std::printf("distances: %zu categories\n", distances.size());
    return rejection_verdict(cfg, loaded);
}

int cmd_report(const RunConfig& cfg) {
    require_seed(cfg, "report");
    const fs::path dir = prepare_out_dir(cfg);
    LoadResult loaded = load_dataset(cfg);

    write_file(dir / "summary.csv",
               [&](std::ostream& out) { write_dataset_summary_csv(out, loaded.summary); });
    write_file(dir / "rejections.csv",
               [&](std::ostream& out) { write_rejections_csv(out, loaded.rejections); });

    FitRunResult fit = fit_all_cells(loaded.dataset, cfg);
    write_fit_outputs(dir, fit);
    {
        std::set<std::string, NaturalLess> categories;
        for (const auto& f : fit.fits) categories.insert(f.category_id);
        for (const auto& category : categories)
            write_file(dir / ("appendix_" + category + ".csv"), [&](std::ostream& out) {
                write_appendix_csv(out, fit.fits, category);
            });
    }

    auto indicators = compute_district_indicators(loaded.dataset, district_universe(cfg, loaded));
    write_file(dir / "indicators.csv",
               [&](std::ostream& out) { write_indicators_csv(out, indicators); });
    MobilityMatrix mobility = mobility_pattern_matrix(loaded.dataset);
    write_file(dir / "mobility_matrix.csv",
               [&](std::ostream& out) { write_mobility_matrix_csv(out, mobility); });

    auto reports = run_regressions(dir, fit.fits, indicators);
    std::printf("report: %zu cells, %zu districts, %zu regression scopes\n", fit.fits.size(),
                indicators.size(), reports.size());
    return rejection_verdict(cfg, loaded);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Huff gravity market-share toolkit"};
    app.require_subcommand(1);
    Flags flags;

    CLI::App* ingest = app.add_subcommand("ingest", "validate inputs and summarize the dataset");
    CLI::App* fit = app.add_subcommand("fit", "fit the gravity model per district x category");
    CLI::App* indicators = app.add_subcommand("indicators", "compute district diversity indicators");
    CLI::App* regress = app.add_subcommand("regress", "regress fit scores on district indicators");
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic city with known truth");
    CLI::App* distances = app.add_subcommand("distances", "emit customer-merchant distance tables");
    CLI::App* report = app.add_subcommand("report", "run the full pipeline and bundle all tables");

    // one shared flag set; only the chosen subcommand's instances parse
    std::map<const CLI::App*, Flags> per_cmd;
    for (CLI::App* cmd : {ingest, fit, indicators, regress, synth, distances, report})
        add_common_flags(cmd, per_cmd[cmd]);

    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = app.get_subcommands().front();
    try {
        const RunConfig cfg = resolve_config(per_cmd[chosen]);
        if (chosen == ingest) return cmd_ingest(cfg);
        if (chosen == fit) return cmd_fit(cfg);
        if (chosen == indicators) return cmd_indicators(cfg);
        if (chosen == regress) return cmd_regress(cfg);
        if (chosen == synth) return cmd_synth(cfg);
        if (chosen == distances) return cmd_distances(cfg);
        if (chosen == report) return cmd_report(cfg);
        std::fprintf(stderr, "error: unknown subcommand\n");
        return kValidationFailure;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidationFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidationFailure;
    }
}
