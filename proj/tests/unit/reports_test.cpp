#include "huffkit/reports.hpp"

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "huffkit/errors.hpp"

using namespace huffkit;

namespace {

HuffFitResult sample_fit(const char* district, const char* category) {
    HuffFitResult f;
    f.district_id = district;
    f.category_id = category;
    f.params = {1.2345678901234567, 2.3456789012345678};
    f.score = 0.91234567890123456;
    f.p_value = 3.25e-7;
    f.avg_distance_km = 4.567890123456789;
    f.estimator = Estimator::kPso;
    f.alpha_at_bound = false;
    f.beta_at_bound = true;
    f.n_customers = 120;
    f.n_merchants = 17;
    f.total_visits = 6000.0;
    f.evaluations = 999;
    return f;
}

}  // namespace

TEST_CASE("dataset summary table is key/value with fixed metrics") {
    DatasetSummary s;
    s.period_start = 1735689600;
    s.period_end = 1767225600;
    s.transaction_count = 180000;
    s.customer_count = 2508;
    s.avg_transactions_per_customer = 71.7703349282;

    std::ostringstream out;
    write_dataset_summary_csv(out, s);
    CHECK(out.str() ==
          "metric,value\n"
          "period_start,2025-01-01T00:00:00\n"
          "period_end,2026-01-01T00:00:00\n"
          "n_transactions,180000\n"
          "n_customers,2508\n"
          "avg_transactions_per_customer,71.77\n");
}

TEST_CASE("cell fits round-trip losslessly including degenerate rows") {
    std::vector<HuffFitResult> fits;
    fits.push_back(sample_fit("d1", "grocery"));
    HuffFitResult ll = sample_fit("d2", "grocery");
    ll.estimator = Estimator::kLogLinear;
    ll.params = {0.0, 100.0};  // boundary values survive
    ll.alpha_at_bound = true;
    fits.push_back(ll);
    HuffFitResult bad;
    bad.district_id = "d3";
    bad.category_id = "grocery";
    bad.degenerate = true;
    bad.degenerate_reason = "cell fit: actual visit distribution is constant in cell d3/grocery";
    bad.score = std::nan("");
    bad.p_value = std::nan("");
    bad.n_customers = 4;
    bad.n_merchants = 3;
    bad.total_visits = 12.0;
    fits.push_back(bad);

    std::ostringstream out;
    write_cell_fits_csv(out, fits);
    std::istringstream in(out.str());
    auto back = read_cell_fits_csv(in);

    REQUIRE(back.size() == 3);
    CHECK(back[0].district_id == "d1");
    CHECK(back[0].params.alpha == fits[0].params.alpha);
    CHECK(back[0].params.beta == fits[0].params.beta);
    CHECK(back[0].score == fits[0].score);
    CHECK(back[0].p_value == fits[0].p_value);
    CHECK(back[0].avg_distance_km == fits[0].avg_distance_km);
    CHECK(back[0].n_customers == 120);
    CHECK(back[0].n_merchants == 17);
    CHECK(back[0].total_visits == 6000.0);
    CHECK(back[0].estimator == Estimator::kPso);
    CHECK_FALSE(back[0].alpha_at_bound);
    CHECK(back[0].beta_at_bound);
    CHECK_FALSE(back[0].degenerate);

    CHECK(back[1].estimator == Estimator::kLogLinear);
    CHECK(back[1].params.alpha == 0.0);
    CHECK(back[1].params.beta == 100.0);
    CHECK(back[1].alpha_at_bound);

    CHECK(back[2].degenerate);
    CHECK(back[2].degenerate_reason == bad.degenerate_reason);
    CHECK(std::isnan(back[2].score));
    CHECK(std::isnan(back[2].params.alpha));
    CHECK(back[2].n_customers == 4);
}

TEST_CASE("cell fits reader rejects malformed input by row") {
    std::istringstream missing("district_id,category_id\nd1,grocery\n");
    CHECK_THROWS_AS(read_cell_fits_csv(missing), SchemaError);

    std::ostringstream out;
    std::vector<HuffFitResult> fits{sample_fit("d1", "grocery")};
    write_cell_fits_csv(out, fits);
    std::string text = out.str();
    const auto pos = text.find("pso");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 3, "gsa");
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(read_cell_fits_csv(in), doctest::Contains("gsa"), ValidationError);
}

TEST_CASE("fit summary uses four decimals and omits empty categories") {
    std::vector<CategorySummary> rows(2);
    rows[0].category_id = "grocery";
    rows[0].n_cells = 17;
    rows[0].mean_r = 0.89351;
    rows[0].std_r = 0.0723449;
    rows[0].max_r = 0.97935;
    rows[0].min_r = 0.66244;
    rows[1].category_id = "restaurant";
    rows[1].n_cells = 0;  // every cell degenerate
    rows[1].n_degenerate = 17;

    std::ostringstream out;
    write_fit_summary_csv(out, rows);
    CHECK(out.str() ==
          "merchant_category,mean_r,std_r,max_r,min_r\n"
          "grocery,0.8935,0.0723,0.9794,0.6624\n");
}

TEST_CASE("appendix table filters one category and fixes display precision") {
    std::vector<HuffFitResult> fits;
    fits.push_back(sample_fit("d1", "grocery"));
    fits.push_back(sample_fit("d2", "clothing"));
    HuffFitResult bad;
    bad.district_id = "d3";
    bad.category_id = "grocery";
    bad.degenerate = true;
    fits.push_back(bad);

    std::ostringstream out;
    write_appendix_csv(out, fits, "grocery");
    CHECK(out.str() ==
          "district_id,avg_distance,alpha,beta,pearson_r,p_value,estimator,"
          "alpha_at_bound,beta_at_bound\n"
          "d1,4.567890,1.234568,2.345679,0.912346,3.250000e-07,pso,0,1\n");
}

TEST_CASE("indicators round-trip with undefined fields kept empty") {
    std::vector<DistrictIndicators> rows(2);
    rows[0].district_id = "d1";
    rows[0].mobility_diversity = 0.5623351446188083;
    rows[0].merchant_diversity = 1.3862943611198906;
    rows[0].merchant_share_bias = 0.95;
    rows[0].gender_diversity = 0.6931471805599453;
    rows[0].marital_diversity = 1.0397207708399179;
    rows[0].education_diversity = 0.6365141682948128;
    rows[0].job_diversity = 0.0;
    rows[0].income_gini = 0.25;
    rows[0].n_customers_income = 4;
    rows[0].demographic_exclusions = 2;
    rows[1].district_id = "d2";
    rows[1].undefined_reasons = {"income_gini: needs at least 2 positive incomes",
                                 "mobility_diversity: no transactions by residents"};
    rows[1].n_customers_income = 0;

    std::ostringstream out;
    write_indicators_csv(out, rows);
    std::istringstream in(out.str());
    auto back = read_indicators_csv(in);

    REQUIRE(back.size() == 2);
    CHECK(back[0].district_id == "d1");
    CHECK(back[0].mobility_diversity == rows[0].mobility_diversity);
    CHECK(back[0].merchant_diversity == rows[0].merchant_diversity);
    CHECK(back[0].merchant_share_bias == rows[0].merchant_share_bias);
    CHECK(back[0].gender_diversity == rows[0].gender_diversity);
    CHECK(back[0].marital_diversity == rows[0].marital_diversity);
    CHECK(back[0].education_diversity == rows[0].education_diversity);
    CHECK(back[0].job_diversity == rows[0].job_diversity);
    CHECK(back[0].income_gini == rows[0].income_gini);
    CHECK(back[0].n_customers_income == 4);
    CHECK(back[0].demographic_exclusions == 2);
    CHECK(back[0].undefined_reasons.empty());

    CHECK_FALSE(back[1].mobility_diversity.has_value());
    CHECK_FALSE(back[1].income_gini.has_value());
    CHECK(back[1].undefined_reasons == rows[1].undefined_reasons);
}

TEST_CASE("coefficient table drops the intercept and applies star convention") {
    RegressionReport report;
    report.scope = "pooled";
    CoefficientEstimate c0;
    c0.name = "const";
    c0.beta = 0.01;
    CoefficientEstimate c1;
    c1.name = "gender_diversity";
    c1.beta = 0.4123;
    c1.ci95_lo = 0.1;
    c1.ci95_hi = 0.7;
    c1.p_value = 0.005;
    c1.significant_05 = true;
    c1.significant_01 = true;
    CoefficientEstimate c2;
    c2.name = "income_gini";
    c2.beta = -0.25;
    c2.ci95_lo = -0.45;
    c2.ci95_hi = -0.05;
    c2.p_value = 0.03;
    c2.significant_05 = true;
    CoefficientEstimate c3;
    c3.name = "job_diversity";
    c3.beta = 0.02;
    c3.ci95_lo = -0.2;
    c3.ci95_hi = 0.24;
    c3.p_value = 0.8;
    report.coefficients = {c0, c1, c2, c3};

    std::ostringstream out;
    write_coefficient_table_csv(out, report);
    CHECK(out.str() ==
          "indicator,beta,ci95,significance\n"
          "Gender diversity,0.4123,\"[0.1000, 0.7000]\",**\n"
          "Income inequality,-0.2500,\"[-0.4500, -0.0500]\",*\n"
          "Job status diversity,0.0200,\"[-0.2000, 0.2400]\",\n");
}

TEST_CASE("adjusted R^2 table prints three decimals per scope") {
    std::vector<RegressionReport> reports(2);
    reports[0].scope = "grocery";
    reports[0].adjusted_r_squared = 0.65432;
    reports[1].scope = "pooled";
    reports[1].adjusted_r_squared = -0.31073863078889685;

    std::ostringstream out;
    write_adjusted_r2_csv(out, reports);
    CHECK(out.str() ==
          "merchant_category,adjusted_r2\n"
          "grocery,0.654\n"
          "pooled,-0.311\n");
}

TEST_CASE("full regression CSV carries inference fields and NaN-safe blanks") {
    RegressionReport report;
    report.scope = "grocery";
    report.r_squared = 0.5;
    report.adjusted_r_squared = 0.25;
    report.n_obs = 10;
    report.dof_residual = 7;
    CoefficientEstimate c;
    c.name = "income_gini";
    c.beta = 1.5;
    c.std_error = std::nan("");
    c.t_stat = std::nan("");
    c.p_value = 1.0;
    c.ci95_lo = 1.5;
    c.ci95_hi = 1.5;
    report.coefficients = {c};

    std::ostringstream out;
    write_regression_csv(out, report);
    const std::string text = out.str();
    CHECK(text.find("scope,term,beta,") == 0);
    CHECK(text.find("grocery,income_gini,1.5,,,1,1.5,1.5,,0.5,0.25,10,7,0") != std::string::npos);
}

TEST_CASE("mobility matrix CSV blanks undefined rows") {
    MobilityMatrix mm;
    mm.districts = {"d1", "d2"};
    mm.values = {0.75, 0.25, 0.0, 0.0};
    mm.row_defined = {true, false};

    std::ostringstream out;
    write_mobility_matrix_csv(out, mm);
    CHECK(out.str() ==
          "home_district,d1,d2\n"
          "d1,0.75,0.25\n"
          "d2,,\n");
}

TEST_CASE("distance histogram CSV emits bin ranges with weights") {
    DistanceHistogram h;
    h.bin_width_km = 1.0;
    h.bin_edges = {0.0, 1.0, 2.0};
    h.weights = {4.0, 6.0};
    h.mean_km = 1.2;
    h.total_weight = 10.0;

    std::ostringstream out;
    write_distance_histogram_csv(out, h);
    CHECK(out.str() ==
          "bin_lo_km,bin_hi_km,weight\n"
          "0,1,4\n"
          "1,2,6\n");
}

TEST_CASE("rejection and exclusion reports name their source rows") {
    SourceRejections rej;
    rej.customers.push_back({2, "bad age"});
    rej.transactions.push_back({7, "non-positive amount"});
    std::ostringstream out;
    write_rejections_csv(out, rej);
    CHECK(out.str() ==
          "source,row_number,reason\n"
          "customers,2,bad age\n"
          "transactions,7,non-positive amount\n");

    std::vector<CellExclusion> excl{{"d1", "grocery", "below minimum transactions"}};
    std::ostringstream out2;
    write_cell_exclusions_csv(out2, excl);
    CHECK(out2.str() ==
          "district_id,category_id,reason\n"
          "d1,grocery,below minimum transactions\n");
}

TEST_CASE("display names cover the fixed indicator order") {
    CHECK(indicator_display_name("mobility_diversity") == "Mobility diversity");
    CHECK(indicator_display_name("merchant_diversity") == "Merchant diversity");
    CHECK(indicator_display_name("merchant_share_bias") == "Merchant monopoly");
    CHECK(indicator_display_name("gender_diversity") == "Gender diversity");
    CHECK(indicator_display_name("marital_diversity") == "Marital status diversity");
    CHECK(indicator_display_name("education_diversity") == "Education level diversity");
    CHECK(indicator_display_name("job_diversity") == "Job status diversity");
    CHECK(indicator_display_name("income_gini") == "Income inequality");
    CHECK(indicator_display_name("something_else") == "something_else");
}
