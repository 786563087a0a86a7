#include "huffkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "huffkit/csv.hpp"
#include "huffkit/errors.hpp"
#include "huffkit/partition.hpp"
#include "huffkit/rng.hpp"

namespace huffkit {

std::vector<CategorySpec> CityConfig::standard_categories() {
    return {
        {"grocery", 20, {1.0, 2.0}},
        {"gas_station", 20, {0.5, 1.0}},
        {"clothing", 20, {2.0, 0.5}},
        {"restaurant", 20, {0.0, 0.0}},
    };
}

namespace {

void validate_config(const CityConfig& c, const std::vector<CategorySpec>& cats) {
    if (c.n_districts < 1) throw ValidationError("city config: n_districts must be >= 1");
    if (c.grid_columns < 1) throw ValidationError("city config: grid_columns must be >= 1");
    if (c.customers_per_district < 1)
        throw ValidationError("city config: customers_per_district must be >= 1");
    if (c.visits_per_customer < 1)
        throw ValidationError("city config: visits_per_customer must be >= 1");
    if (c.box_height_deg <= 0.0 || c.box_width_deg <= 0.0)
        throw ValidationError("city config: box dimensions must be positive");
    if (cats.empty()) throw ValidationError("city config: no categories");
    std::set<std::string> seen;
    for (const auto& cat : cats) {
        if (cat.category_id.empty()) throw ValidationError("city config: empty category id");
        if (!seen.insert(cat.category_id).second)
            throw ValidationError("city config: duplicate category " + cat.category_id);
        if (cat.merchants_per_district < 1)
            throw ValidationError("city config: category " + cat.category_id +
                                  " has no merchants");
        const auto& p = cat.true_params;
        if (!(p.alpha >= 0.0 && p.alpha <= 100.0 && p.beta >= 0.0 && p.beta <= 100.0))
            throw ValidationError("city config: true params outside [0,100]^2 for " +
                                  cat.category_id);
    }
    for (double rate : {c.zero_income_rate, c.work_location_rate, c.noise_rate})
        if (!(rate >= 0.0 && rate <= 1.0))
            throw ValidationError("city config: rates must lie in [0,1]");
    for (double sigma : {c.revenue_sigma_log, c.amount_sigma_log, c.income_sigma_log})
        if (!(sigma >= 0.0)) throw ValidationError("city config: sigma must be >= 0");
    if (c.window.start >= c.window.end)
        throw ValidationError("city config: empty observation window");
    if (c.distance_policy.floor_km <= 0.0)
        throw ValidationError("city config: distance floor must be positive");
}

// smallest multiplier coprime with n, so (a*k + b) % n is a bijection
std::size_t coprime_step(std::size_t want, std::size_t n) {
    if (n <= 1) return 1;
    std::size_t a = want % n;
    if (a == 0) a = 1;
    while (std::gcd(a, n) != 1) ++a;
    return a;
}

double scrambled_gradient(std::size_t k, std::size_t n, std::size_t step, std::size_t shift) {
    if (n <= 1) return 0.5;
    const std::size_t r = (coprime_step(step, n) * k + shift) % n;
    return static_cast<double>(r) / static_cast<double>(n - 1);
}

Money positive_cents(double value) {
    const auto cents = static_cast<Money>(std::llround(value));
    return cents < 1 ? 1 : cents;
}

struct DistrictMixes {
    std::vector<std::pair<std::string, double>> gender, marital, education, work;
};

DistrictMixes district_mixes(std::size_t k, std::size_t n) {
    const double f = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.5;
    const double s = scrambled_gradient(k, n, 7, 3);
    const double u = scrambled_gradient(k, n, 5, 1);
    const double v = scrambled_gradient(k, n, 11, 5);
    DistrictMixes m;
    m.gender = {{"F", 0.5 + 0.45 * f}, {"M", 0.5 - 0.45 * f}};
    m.marital = {{"single", 1.0 + 4.0 * s},
                 {"married", 1.0 + 4.0 * (1.0 - s)},
                 {"divorced", 0.8},
                 {"widowed", 0.4}};
    m.education = {{"primary", 1.0 + 3.0 * u},
                   {"high_school", 2.0},
                   {"university", 2.0},
                   {"graduate", 1.0 + 3.0 * (1.0 - u)}};
    m.work = {{"employed", 3.0 + 2.0 * v},
              {"self_employed", 1.0},
              {"student", 1.0},
              {"retired", 1.0 + 2.0 * (1.0 - v)},
              {"unemployed", 0.5}};
    return m;
}

std::string draw_level(RandomStream& rng, const std::vector<std::pair<std::string, double>>& mix) {
    std::vector<double> weights;
    weights.reserve(mix.size());
    for (const auto& [name, w] : mix) weights.push_back(w);
    const auto cum = cumulative_sums(weights);
    return mix[rng.categorical(cum)].first;
}

std::string fmt_coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

GeneratedCity generate_city(const CityConfig& config) {
    const std::vector<CategorySpec> cats =
        config.categories.empty() ? CityConfig::standard_categories() : config.categories;
    validate_config(config, cats);

    const std::size_t nd = config.n_districts;
    const std::size_t grid_rows = (nd + config.grid_columns - 1) / config.grid_columns;
    std::size_t merchants_per_district = 0;
    for (const auto& cat : cats) merchants_per_district += cat.merchants_per_district;

    GeneratedCity city;
    city.window = config.window;

    // district boxes on the grid
    for (std::size_t k = 0; k < nd; ++k) {
        DistrictBox box;
        box.district_id = "d" + std::to_string(k + 1);
        const std::size_t row = k / config.grid_columns;
        const std::size_t col = k % config.grid_columns;
        box.lat_lo = config.origin_lat + static_cast<double>(row) * config.box_height_deg;
        box.lat_hi = box.lat_lo + config.box_height_deg;
        box.lon_lo = config.origin_lon + static_cast<double>(col) * config.box_width_deg;
        box.lon_hi = box.lon_lo + config.box_width_deg;
        city.boxes.push_back(box);
    }
    const double city_lat_hi =
        config.origin_lat + static_cast<double>(grid_rows) * config.box_height_deg;
    const double city_lon_hi =
        config.origin_lon +
        static_cast<double>(std::min(nd, config.grid_columns)) * config.box_width_deg;

    // phase 1: merchants and their exogenous attractiveness
    std::vector<std::vector<std::size_t>> cell_merchant_rows(nd * cats.size());
    for (std::size_t k = 0; k < nd; ++k) {
        const DistrictBox& box = city.boxes[k];
        RandomStream rng(config.seed, "synth.district." + box.district_id + ".merchants");
        std::size_t slot = 0;
        for (std::size_t ci = 0; ci < cats.size(); ++ci) {
            for (std::size_t j = 0; j < cats[ci].merchants_per_district; ++j, ++slot) {
                MerchantProfile m;
                m.merchant_id = "m" + std::to_string(k * merchants_per_district + slot + 1);
                m.category_id = cats[ci].category_id;
                m.district_id = box.district_id;
                m.location.latitude = rng.uniform(box.lat_lo, box.lat_hi);
                m.location.longitude = rng.uniform(box.lon_lo, box.lon_hi);
                const double a = static_cast<double>(positive_cents(
                    rng.lognormal(config.revenue_mu_log, config.revenue_sigma_log)));
                city.true_attractiveness[m.merchant_id] = a;
                cell_merchant_rows[k * cats.size() + ci].push_back(city.dataset.merchants.size());
                city.dataset.merchants.push_back(std::move(m));
            }
        }
    }

    // per-category city-wide merchant lists for the noise mixture
    std::map<std::string, std::vector<std::size_t>> category_merchants;
    for (std::size_t r = 0; r < city.dataset.merchants.size(); ++r)
        category_merchants[city.dataset.merchants[r].category_id].push_back(r);

    city.truths.reserve(nd * cats.size());
    for (std::size_t k = 0; k < nd; ++k)
        for (const auto& cat : cats) {
            CellTruth t;
            t.district_id = city.boxes[k].district_id;
            t.category_id = cat.category_id;
            t.params = cat.true_params;
            for (std::size_t row : cell_merchant_rows[k * cats.size() +
                                                      (&cat - cats.data())])
                t.merchant_ids.push_back(city.dataset.merchants[row].merchant_id);
            city.truths.push_back(std::move(t));
        }

    // phase 2: customers, их visits, and the recorded truth rows
    const std::int64_t window_len = config.window.end - config.window.start;
    for (std::size_t k = 0; k < nd; ++k) {
        const DistrictBox& box = city.boxes[k];
        const DistrictMixes mixes = district_mixes(k, nd);
        const double w_grad = scrambled_gradient(k, nd, 3, 2);
        const double income_sigma = config.income_sigma_log * (0.6 + 0.8 * w_grad);
        RandomStream rng(config.seed, "synth.district." + box.district_id + ".customers");

        for (std::size_t i = 0; i < config.customers_per_district; ++i) {
            CustomerProfile c;
            c.customer_id =
                "c" + std::to_string(k * config.customers_per_district + i + 1);
            c.home.latitude = rng.uniform(box.lat_lo, box.lat_hi);
            c.home.longitude = rng.uniform(box.lon_lo, box.lon_hi);
            c.age = static_cast<int>(18 + rng.below(68));
            c.gender = draw_level(rng, mixes.gender);
            c.marital_status = draw_level(rng, mixes.marital);
            c.education_level = draw_level(rng, mixes.education);
            c.work_status = draw_level(rng, mixes.work);
            c.income = rng.bernoulli(config.zero_income_rate)
                           ? 0
                           : positive_cents(rng.lognormal(config.income_mu_log, income_sigma));
            if (rng.bernoulli(config.work_location_rate)) {
                GeoPoint w;
                w.latitude = rng.uniform(config.origin_lat, city_lat_hi);
                w.longitude = rng.uniform(config.origin_lon, city_lon_hi);
                c.work = w;
            }

            for (std::size_t ci = 0; ci < cats.size(); ++ci) {
                const auto& rows = cell_merchant_rows[k * cats.size() + ci];
                std::vector<double> log_a(rows.size()), log_d(rows.size());
                for (std::size_t j = 0; j < rows.size(); ++j) {
                    const MerchantProfile& m = city.dataset.merchants[rows[j]];
                    log_a[j] = std::log(city.true_attractiveness.at(m.merchant_id));
                    log_d[j] = std::log(
                        customer_merchant_distance(c, m, config.distance_policy));
                }
                const std::vector<double> shares =
                    huff_shares(log_a, log_d, cats[ci].true_params);

                CellTruth& truth = city.truths[k * cats.size() + ci];
                truth.customer_ids.push_back(c.customer_id);
                truth.probabilities.insert(truth.probabilities.end(), shares.begin(),
                                           shares.end());

                std::int64_t redirected = 0;
                for (std::size_t visit = 0; visit < config.visits_per_customer; ++visit)
                    if (config.noise_rate > 0.0 && rng.bernoulli(config.noise_rate))
                        ++redirected;
                const auto counts = multinomial(
                    rng, static_cast<std::int64_t>(config.visits_per_customer) - redirected,
                    shares);

                auto emit = [&](const MerchantProfile& m) {
                    TransactionRecord t;
                    t.customer_id = c.customer_id;
                    t.merchant_id = m.merchant_id;
                    t.timestamp = config.window.start +
                                  static_cast<std::int64_t>(rng.below(
                                      static_cast<std::uint64_t>(window_len)));
                    t.amount = positive_cents(
                        rng.lognormal(config.amount_mu_log, config.amount_sigma_log));
                    t.category_id = m.category_id;
                    city.dataset.transactions.push_back(std::move(t));
                };
                for (std::size_t j = 0; j < rows.size(); ++j)
                    for (std::int64_t v = 0; v < counts[j]; ++v)
                        emit(city.dataset.merchants[rows[j]]);
                const auto& anywhere = category_merchants.at(cats[ci].category_id);
                for (std::int64_t v = 0; v < redirected; ++v)
                    emit(city.dataset.merchants[anywhere[rng.below(anywhere.size())]]);
            }

            city.home_districts[c.customer_id] = box.district_id;
            city.dataset.customers.push_back(std::move(c));
            city.dataset.customer_district.push_back(box.district_id);
        }
    }

    // phase 3: clamp mode rewrites amounts so derived revenue == truth
    if (config.clamp_revenue_to_truth) {
        std::unordered_map<std::string, std::vector<std::size_t>> tx_of;
        for (std::size_t t = 0; t < city.dataset.transactions.size(); ++t)
            tx_of[city.dataset.transactions[t].merchant_id].push_back(t);
        for (const auto& m : city.dataset.merchants) {
            auto it = tx_of.find(m.merchant_id);
            if (it == tx_of.end()) continue;
            const auto& txs = it->second;
            const Money target =
                static_cast<Money>(city.true_attractiveness.at(m.merchant_id));
            const auto n = static_cast<Money>(txs.size());
            if (target < n)
                throw ValidationError(
                    "city config: clamp infeasible, merchant " + m.merchant_id +
                    " cannot split " + format_money(target) + " over " +
                    std::to_string(txs.size()) + " transactions");
            const Money base = target / n, rem = target % n;
            for (std::size_t j = 0; j < txs.size(); ++j)
                city.dataset.transactions[txs[j]].amount =
                    base + (static_cast<Money>(j) < rem ? 1 : 0);
        }
    }

    city.dataset.rebuild_indexes();
    compute_merchant_revenues(city.dataset);
    return city;
}

MobilityMatrix mobility_pattern_matrix(const Dataset& dataset) {
    std::set<std::string, NaturalLess> universe;
    for (const auto& d : dataset.customer_district)
        if (!d.empty()) universe.insert(d);
    for (const auto& m : dataset.merchants) universe.insert(m.district_id);

    MobilityMatrix out;
    out.districts.assign(universe.begin(), universe.end());
    const std::size_t n = out.districts.size();
    std::map<std::string, std::size_t, NaturalLess> index;
    for (std::size_t i = 0; i < n; ++i) index[out.districts[i]] = i;

    std::vector<std::int64_t> tally(n * n, 0);
    for (const auto& tx : dataset.transactions) {
        auto cit = dataset.customer_index.find(tx.customer_id);
        if (cit == dataset.customer_index.end())
            throw IntegrityError("mobility matrix: unknown customer " + tx.customer_id);
        if (cit->second >= dataset.customer_district.size()) continue;
        const std::string& home = dataset.customer_district[cit->second];
        if (home.empty()) continue;
        auto mit = dataset.merchant_index.find(tx.merchant_id);
        if (mit == dataset.merchant_index.end())
            throw IntegrityError("mobility matrix: unknown merchant " + tx.merchant_id);
        const std::string& dest = dataset.merchants[mit->second].district_id;
        ++tally[index.at(home) * n + index.at(dest)];
    }

    out.values.assign(n * n, 0.0);
    out.row_defined.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t row_total = 0;
        for (std::size_t j = 0; j < n; ++j) row_total += tally[i * n + j];
        if (row_total == 0) continue;
        out.row_defined[i] = true;
        for (std::size_t j = 0; j < n; ++j)
            out.values[i * n + j] =
                static_cast<double>(tally[i * n + j]) / static_cast<double>(row_total);
    }
    return out;
}

void write_transactions_csv(std::ostream& out, std::span<const TransactionRecord> records) {
    CsvWriter w(out);
    w.write_row({"customer_id", "merchant_id", "amount", "timestamp", "category_id"});
    for (const auto& t : records)
        w.write_row({t.customer_id, t.merchant_id, format_money(t.amount),
                     format_timestamp(t.timestamp), t.category_id});
}

void write_customers_csv(std::ostream& out, std::span<const CustomerProfile> customers) {
    CsvWriter w(out);
    w.write_row({"customer_id", "age", "gender", "marital_status", "education_level",
                 "work_status", "income", "home_lat", "home_lon", "work_lat", "work_lon"});
    for (const auto& c : customers) {
        w.write_row({c.customer_id, std::to_string(c.age), c.gender, c.marital_status,
                     c.education_level, c.work_status, format_money(c.income),
                     fmt_coord(c.home.latitude), fmt_coord(c.home.longitude),
                     c.work ? fmt_coord(c.work->latitude) : "",
                     c.work ? fmt_coord(c.work->longitude) : ""});
    }
}

void write_merchants_csv(std::ostream& out, std::span<const MerchantProfile> merchants) {
    CsvWriter w(out);
    w.write_row({"merchant_id", "category_id", "district_id", "lat", "lon"});
    for (const auto& m : merchants)
        w.write_row({m.merchant_id, m.category_id, m.district_id,
                     fmt_coord(m.location.latitude), fmt_coord(m.location.longitude)});
}

void write_districts_csv(std::ostream& out, std::span<const DistrictBox> boxes) {
    CsvWriter w(out);
    w.write_row({"district_id", "lat_lo", "lon_lo", "lat_hi", "lon_hi"});
    for (const auto& b : boxes)
        w.write_row({b.district_id, fmt_coord(b.lat_lo), fmt_coord(b.lon_lo),
                     fmt_coord(b.lat_hi), fmt_coord(b.lon_hi)});
}

void write_customer_districts_csv(
    std::ostream& out, const std::vector<std::pair<std::string, std::string>>& labels) {
    CsvWriter w(out);
    w.write_row({"customer_id", "district_id"});
    for (const auto& [customer, district] : labels) w.write_row({customer, district});
}

void write_truth_json(std::ostream& out, const GeneratedCity& city, const CityConfig& config) {
    nlohmann::json root;
    root["seed"] = config.seed;
    root["noise_rate"] = config.noise_rate;
    root["clamp_revenue_to_truth"] = config.clamp_revenue_to_truth;

    nlohmann::json cats = nlohmann::json::object();
    const auto spec_cats =
        config.categories.empty() ? CityConfig::standard_categories() : config.categories;
    for (const auto& cat : spec_cats)
        cats[cat.category_id] = {{"alpha", cat.true_params.alpha},
                                 {"beta", cat.true_params.beta}};
    root["categories"] = std::move(cats);

    nlohmann::json attract = nlohmann::json::object();
    std::vector<std::string> ids;
    ids.reserve(city.true_attractiveness.size());
    for (const auto& [id, a] : city.true_attractiveness) ids.push_back(id);
    std::sort(ids.begin(), ids.end(), NaturalLess{});
    for (const auto& id : ids) attract[id] = city.true_attractiveness.at(id);
    root["attractiveness"] = std::move(attract);

    nlohmann::json cells = nlohmann::json::array();
    for (const auto& t : city.truths) {
        nlohmann::json cell;
        cell["district_id"] = t.district_id;
        cell["category_id"] = t.category_id;
        cell["alpha"] = t.params.alpha;
        cell["beta"] = t.params.beta;
        cell["customers"] = t.customer_ids;
        cell["merchants"] = t.merchant_ids;
        nlohmann::json rows = nlohmann::json::array();
        const std::size_t m = t.merchant_ids.size();
        for (std::size_t i = 0; i < t.customer_ids.size(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < m; ++j) row.push_back(t.probabilities[i * m + j]);
            rows.push_back(std::move(row));
        }
        cell["probabilities"] = std::move(rows);
        cells.push_back(std::move(cell));
    }
    root["cells"] = std::move(cells);
    out << root.dump() << '\n';
}

}  // namespace huffkit
