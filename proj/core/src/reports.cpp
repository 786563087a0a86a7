#include "huffkit/reports.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "huffkit/csv.hpp"
#include "huffkit/errors.hpp"

namespace huffkit {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

std::string opt_g17(const std::optional<double>& v) { return v ? g17(*v) : std::string(); }

std::string nan_empty(double v) { return std::isnan(v) ? std::string() : g17(v); }

double parse_double(const std::string& field, const char* what, std::size_t row) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw ValidationError(std::string("report: bad ") + what + " in data row " +
                              std::to_string(row));
    return v;
}

std::size_t parse_count(const std::string& field, const char* what, std::size_t row) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (field.empty() || end == field.c_str() || *end != '\0')
        throw ValidationError(std::string("report: bad ") + what + " in data row " +
                              std::to_string(row));
    return static_cast<std::size_t>(v);
}

std::size_t require_column(const CsvReader& reader, const char* name) {
    const std::size_t idx = reader.column(name);
    if (idx == static_cast<std::size_t>(-1))
        throw SchemaError(std::string("report: missing column ") + name);
    return idx;
}

std::string join_reasons(std::span<const std::string> reasons) {
    std::string out;
    for (const auto& r : reasons) {
        if (!out.empty()) out += "; ";
        out += r;
    }
    return out;
}

std::vector<std::string> split_reasons(const std::string& joined) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < joined.size()) {
        std::size_t sep = joined.find("; ", pos);
        if (sep == std::string::npos) {
            out.push_back(joined.substr(pos));
            break;
        }
        out.push_back(joined.substr(pos, sep - pos));
        pos = sep + 2;
    }
    return out;
}

}  // namespace

void write_dataset_summary_csv(std::ostream& out, const DatasetSummary& summary) {
    CsvWriter w(out);
    w.write_row({"metric", "value"});
    w.write_row({"period_start", format_timestamp(summary.period_start)});
    w.write_row({"period_end", format_timestamp(summary.period_end)});
    w.write_row({"n_transactions", std::to_string(summary.transaction_count)});
    w.write_row({"n_customers", std::to_string(summary.customer_count)});
    w.write_row({"avg_transactions_per_customer",
                 fmt("%.2f", summary.avg_transactions_per_customer)});
}

void write_rejections_csv(std::ostream& out, const SourceRejections& rejections) {
    CsvWriter w(out);
    w.write_row({"source", "row_number", "reason"});
    auto emit = [&w](const char* source, std::span<const Rejection> rows) {
        for (const auto& r : rows)
            w.write_row({source, std::to_string(r.row_number), r.reason});
    };
    emit("customers", rejections.customers);
    emit("merchants", rejections.merchants);
    emit("transactions", rejections.transactions);
}

void write_cell_exclusions_csv(std::ostream& out, std::span<const CellExclusion> exclusions) {
    CsvWriter w(out);
    w.write_row({"district_id", "category_id", "reason"});
    for (const auto& e : exclusions) w.write_row({e.district_id, e.category_id, e.reason});
}

void write_cell_fits_csv(std::ostream& out, std::span<const HuffFitResult> fits) {
    CsvWriter w(out);
    w.write_row({"district_id", "category_id", "n_customers", "n_merchants", "total_visits",
                 "avg_distance_km", "alpha", "beta", "pearson_r", "p_value", "estimator",
                 "alpha_at_bound", "beta_at_bound", "degenerate", "degenerate_reason"});
    for (const auto& f : fits) {
        if (f.degenerate) {
            w.write_row({f.district_id, f.category_id, std::to_string(f.n_customers),
                         std::to_string(f.n_merchants), g17(f.total_visits), "", "", "", "", "",
                         "", "", "", "1", f.degenerate_reason});
            continue;
        }
        w.write_row({f.district_id, f.category_id, std::to_string(f.n_customers),
                     std::to_string(f.n_merchants), g17(f.total_visits), g17(f.avg_distance_km),
                     g17(f.params.alpha), g17(f.params.beta), g17(f.score), g17(f.p_value),
                     estimator_name(f.estimator), f.alpha_at_bound ? "1" : "0",
                     f.beta_at_bound ? "1" : "0", "0", ""});
    }
}

std::vector<HuffFitResult> read_cell_fits_csv(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_district = require_column(reader, "district_id");
    const std::size_t c_category = require_column(reader, "category_id");
    const std::size_t c_ncust = require_column(reader, "n_customers");
    const std::size_t c_nmerch = require_column(reader, "n_merchants");
    const std::size_t c_visits = require_column(reader, "total_visits");
    const std::size_t c_dist = require_column(reader, "avg_distance_km");
    const std::size_t c_alpha = require_column(reader, "alpha");
    const std::size_t c_beta = require_column(reader, "beta");
    const std::size_t c_r = require_column(reader, "pearson_r");
    const std::size_t c_p = require_column(reader, "p_value");
    const std::size_t c_est = require_column(reader, "estimator");
    const std::size_t c_ab = require_column(reader, "alpha_at_bound");
    const std::size_t c_bb = require_column(reader, "beta_at_bound");
    const std::size_t c_deg = require_column(reader, "degenerate");
    const std::size_t c_reason = require_column(reader, "degenerate_reason");

    std::vector<HuffFitResult> fits;
    std::vector<std::string> row;
    while (reader.next(row)) {
        const std::size_t n = reader.row_number();
        HuffFitResult f;
        f.district_id = row.at(c_district);
        f.category_id = row.at(c_category);
        f.n_customers = parse_count(row.at(c_ncust), "n_customers", n);
        f.n_merchants = parse_count(row.at(c_nmerch), "n_merchants", n);
        f.total_visits = parse_double(row.at(c_visits), "total_visits", n);
        f.degenerate = row.at(c_deg) == "1";
        f.degenerate_reason = row.at(c_reason);
        f.avg_distance_km = parse_double(row.at(c_dist), "avg_distance_km", n);
        f.params.alpha = parse_double(row.at(c_alpha), "alpha", n);
        f.params.beta = parse_double(row.at(c_beta), "beta", n);
        f.score = parse_double(row.at(c_r), "pearson_r", n);
        f.p_value = parse_double(row.at(c_p), "p_value", n);
        if (!f.degenerate) {
            const std::string& est = row.at(c_est);
            if (est == estimator_name(Estimator::kLogLinear))
                f.estimator = Estimator::kLogLinear;
            else if (est == estimator_name(Estimator::kPso))
                f.estimator = Estimator::kPso;
            else
                throw ValidationError("report: unknown estimator \"" + est + "\" in data row " +
                                      std::to_string(n));
            f.alpha_at_bound = row.at(c_ab) == "1";
            f.beta_at_bound = row.at(c_bb) == "1";
        }
        fits.push_back(std::move(f));
    }
    return fits;
}

void write_fit_summary_csv(std::ostream& out, std::span<const CategorySummary> summaries) {
    CsvWriter w(out);
    w.write_row({"merchant_category", "mean_r", "std_r", "max_r", "min_r"});
    for (const auto& s : summaries) {
        if (s.n_cells == 0) continue;  // fully degenerate categories are omitted
        w.write_row({s.category_id, fmt("%.4f", s.mean_r), fmt("%.4f", s.std_r),
                     fmt("%.4f", s.max_r), fmt("%.4f", s.min_r)});
    }
}

void write_appendix_csv(std::ostream& out, std::span<const HuffFitResult> fits,
                        const std::string& category_id) {
    CsvWriter w(out);
    w.write_row({"district_id", "avg_distance", "alpha", "beta", "pearson_r", "p_value",
                 "estimator", "alpha_at_bound", "beta_at_bound"});
    for (const auto& f : fits) {
        if (f.category_id != category_id || f.degenerate) continue;
        w.write_row({f.district_id, fmt("%.6f", f.avg_distance_km), fmt("%.6f", f.params.alpha),
                     fmt("%.6f", f.params.beta), fmt("%.6f", f.score), fmt("%.6e", f.p_value),
                     estimator_name(f.estimator), f.alpha_at_bound ? "1" : "0",
                     f.beta_at_bound ? "1" : "0"});
    }
}

void write_indicators_csv(std::ostream& out, std::span<const DistrictIndicators> rows) {
    CsvWriter w(out);
    w.write_row({"district_id", "mobility_diversity", "merchant_diversity",
                 "merchant_share_bias", "gender_diversity", "marital_diversity",
                 "education_diversity", "job_diversity", "income_gini", "n_customers_income",
                 "demographic_exclusions", "undefined_reasons"});
    for (const auto& r : rows) {
        w.write_row({r.district_id, opt_g17(r.mobility_diversity), opt_g17(r.merchant_diversity),
                     opt_g17(r.merchant_share_bias), opt_g17(r.gender_diversity),
                     opt_g17(r.marital_diversity), opt_g17(r.education_diversity),
                     opt_g17(r.job_diversity), opt_g17(r.income_gini),
                     std::to_string(r.n_customers_income),
                     std::to_string(r.demographic_exclusions),
                     join_reasons(r.undefined_reasons)});
    }
}

std::vector<DistrictIndicators> read_indicators_csv(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_id = require_column(reader, "district_id");
    struct OptCol {
        std::size_t index;
        std::optional<double> DistrictIndicators::* field;
    };
    const OptCol columns[] = {
        {require_column(reader, "mobility_diversity"), &DistrictIndicators::mobility_diversity},
        {require_column(reader, "merchant_diversity"), &DistrictIndicators::merchant_diversity},
        {require_column(reader, "merchant_share_bias"), &DistrictIndicators::merchant_share_bias},
        {require_column(reader, "gender_diversity"), &DistrictIndicators::gender_diversity},
        {require_column(reader, "marital_diversity"), &DistrictIndicators::marital_diversity},
        {require_column(reader, "education_diversity"), &DistrictIndicators::education_diversity},
        {require_column(reader, "job_diversity"), &DistrictIndicators::job_diversity},
        {require_column(reader, "income_gini"), &DistrictIndicators::income_gini},
    };
    const std::size_t c_nci = require_column(reader, "n_customers_income");
    const std::size_t c_excl = require_column(reader, "demographic_exclusions");
    const std::size_t c_reasons = require_column(reader, "undefined_reasons");

    std::vector<DistrictIndicators> rows;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        const std::size_t n = reader.row_number();
        DistrictIndicators r;
        r.district_id = fields.at(c_id);
        for (const auto& col : columns) {
            const std::string& text = fields.at(col.index);
            if (!text.empty()) r.*(col.field) = parse_double(text, "indicator", n);
        }
        r.n_customers_income = parse_count(fields.at(c_nci), "n_customers_income", n);
        r.demographic_exclusions = parse_count(fields.at(c_excl), "demographic_exclusions", n);
        r.undefined_reasons = split_reasons(fields.at(c_reasons));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string indicator_display_name(const std::string& column_name) {
    static const std::pair<const char*, const char*> kNames[] = {
        {"mobility_diversity", "Mobility diversity"},
        {"merchant_diversity", "Merchant diversity"},
        {"merchant_share_bias", "Merchant monopoly"},
        {"gender_diversity", "Gender diversity"},
        {"marital_diversity", "Marital status diversity"},
        {"education_diversity", "Education level diversity"},
        {"job_diversity", "Job status diversity"},
        {"income_gini", "Income inequality"},
    };
    for (const auto& [key, label] : kNames)
        if (column_name == key) return label;
    return column_name;
}

namespace {

std::string stars(const CoefficientEstimate& c) {
    if (c.significant_01) return "**";
    if (c.significant_05) return "*";
    return "";
}

}  // namespace

void write_regression_csv(std::ostream& out, const RegressionReport& report) {
    CsvWriter w(out);
    w.write_row({"scope", "term", "beta", "std_error", "t_stat", "p_value", "ci95_lo", "ci95_hi",
                 "stars", "r_squared", "adjusted_r_squared", "n_obs", "dof_residual",
                 "degenerate_y"});
    for (const auto& c : report.coefficients) {
        w.write_row({report.scope, c.name, nan_empty(c.beta), nan_empty(c.std_error),
                     nan_empty(c.t_stat), nan_empty(c.p_value), nan_empty(c.ci95_lo),
                     nan_empty(c.ci95_hi), stars(c), g17(report.r_squared),
                     g17(report.adjusted_r_squared), std::to_string(report.n_obs),
                     std::to_string(report.dof_residual), report.degenerate_y ? "1" : "0"});
    }
}

void write_coefficient_table_csv(std::ostream& out, const RegressionReport& report) {
    CsvWriter w(out);
    w.write_row({"indicator", "beta", "ci95", "significance"});
    for (const auto& c : report.coefficients) {
        if (c.name == "const") continue;
        const std::string ci =
            "[" + fmt("%.4f", c.ci95_lo) + ", " + fmt("%.4f", c.ci95_hi) + "]";
        w.write_row({indicator_display_name(c.name), fmt("%.4f", c.beta), ci, stars(c)});
    }
}

void write_adjusted_r2_csv(std::ostream& out, std::span<const RegressionReport> reports) {
    CsvWriter w(out);
    w.write_row({"merchant_category", "adjusted_r2"});
    for (const auto& r : reports) w.write_row({r.scope, fmt("%.3f", r.adjusted_r_squared)});
}

void write_distance_histogram_csv(std::ostream& out, const DistanceHistogram& histogram) {
    CsvWriter w(out);
    w.write_row({"bin_lo_km", "bin_hi_km", "weight"});
    for (std::size_t i = 0; i + 1 < histogram.bin_edges.size(); ++i)
        w.write_row({g17(histogram.bin_edges[i]), g17(histogram.bin_edges[i + 1]),
                     g17(histogram.weights[i])});
}

void write_mobility_matrix_csv(std::ostream& out, const MobilityMatrix& matrix) {
    CsvWriter w(out);
    std::vector<std::string> header;
    header.push_back("home_district");
    for (const auto& d : matrix.districts) header.push_back(d);
    w.write_row(header);
    for (std::size_t i = 0; i < matrix.districts.size(); ++i) {
        std::vector<std::string> row;
        row.push_back(matrix.districts[i]);
        for (std::size_t j = 0; j < matrix.districts.size(); ++j)
            row.push_back(matrix.row_defined[i] ? g17(matrix.at(i, j)) : std::string());
        w.write_row(row);
    }
}

}  // namespace huffkit
