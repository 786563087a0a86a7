#include "huffkit/ingest.hpp"

#include <charconv>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include "huffkit/csv.hpp"
#include "huffkit/errors.hpp"

namespace huffkit {

namespace {

std::size_t require_column(const CsvReader& reader, const char* name, const char* table) {
    const std::size_t idx = reader.column(name);
    if (idx == static_cast<std::size_t>(-1))
        throw SchemaError(std::string(table) + ": missing required column '" + name + "'");
    return idx;
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return false;
    out = v;
    return true;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return false;
    out = v;
    return true;
}

}  // namespace

TransactionIngest ingest_transactions(std::istream& in, const TransactionContext& ctx) {
    CsvReader reader(in);
    const std::size_t c_cust = require_column(reader, "customer_id", "transactions");
    const std::size_t c_merc = require_column(reader, "merchant_id", "transactions");
    const std::size_t c_amt = require_column(reader, "amount", "transactions");
    const std::size_t c_ts = require_column(reader, "timestamp", "transactions");
    const std::size_t c_cat = require_column(reader, "category_id", "transactions");
    const std::size_t width = reader.header().size();

    TransactionIngest out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::size_t row = reader.row_number();
        auto reject = [&](const char* reason) { out.rejections.push_back({row, reason}); };
        if (f.size() != width) {
            reject("malformed row");
            continue;
        }
        TransactionRecord rec;
        rec.customer_id = f[c_cust];
        rec.merchant_id = f[c_merc];
        rec.category_id = f[c_cat];
        if (rec.customer_id.empty()) {
            reject("missing customer_id");
            continue;
        }
        if (rec.merchant_id.empty()) {
            reject("missing merchant_id");
            continue;
        }
        const auto amount = parse_money(f[c_amt]);
        if (!amount) {
            reject("invalid amount");
            continue;
        }
        if (*amount <= 0) {
            reject("non-positive amount");
            continue;
        }
        rec.amount = *amount;
        const auto ts = parse_timestamp(f[c_ts]);
        if (!ts) {
            reject("invalid timestamp");
            continue;
        }
        rec.timestamp = *ts;
        if (ctx.window && !ctx.window->contains(rec.timestamp)) {
            reject("out of window");
            continue;
        }
        if (ctx.customers && !ctx.customers->count(rec.customer_id)) {
            reject("unknown customer");
            continue;
        }
        if (ctx.merchants) {
            const auto it = ctx.merchants->find(rec.merchant_id);
            if (it == ctx.merchants->end()) {
                reject("unknown merchant");
                continue;
            }
            if (ctx.merchant_rows &&
                (*ctx.merchant_rows)[it->second].category_id != rec.category_id) {
                reject("category mismatch");
                continue;
            }
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

CustomerIngest ingest_customers(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_id = require_column(reader, "customer_id", "customers");
    const std::size_t c_age = require_column(reader, "age", "customers");
    const std::size_t c_gender = require_column(reader, "gender", "customers");
    const std::size_t c_marital = require_column(reader, "marital_status", "customers");
    const std::size_t c_edu = require_column(reader, "education_level", "customers");
    const std::size_t c_work = require_column(reader, "work_status", "customers");
    const std::size_t c_income = require_column(reader, "income", "customers");
    const std::size_t c_hlat = require_column(reader, "home_lat", "customers");
    const std::size_t c_hlon = require_column(reader, "home_lon", "customers");
    const std::size_t c_wlat = require_column(reader, "work_lat", "customers");
    const std::size_t c_wlon = require_column(reader, "work_lon", "customers");
    const std::size_t width = reader.header().size();

    CustomerIngest out;
    std::unordered_set<std::string> seen;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::size_t row = reader.row_number();
        auto reject = [&](const char* reason) { out.rejections.push_back({row, reason}); };
        if (f.size() != width) {
            reject("malformed row");
            continue;
        }
        CustomerProfile c;
        c.customer_id = f[c_id];
        if (c.customer_id.empty()) {
            reject("missing customer_id");
            continue;
        }
        if (!seen.insert(c.customer_id).second) {
            reject("duplicate customer_id");
            continue;
        }
        if (!parse_int(f[c_age], c.age) || c.age < 0 || c.age > 130) {
            reject("invalid age");
            continue;
        }
        c.gender = f[c_gender];
        c.marital_status = f[c_marital];
        c.education_level = f[c_edu];
        c.work_status = f[c_work];
        const auto income = parse_money(f[c_income]);
        if (!income) {
            reject("invalid income");
            continue;
        }
        if (*income < 0) {
            reject("negative income");
            continue;
        }
        c.income = *income;
        double hlat, hlon;
        if (!parse_double(f[c_hlat], hlat) || !parse_double(f[c_hlon], hlon) ||
            !geo_point_valid({hlat, hlon})) {
            reject("invalid home location");
            continue;
        }
        c.home = {hlat, hlon};
        const bool wlat_empty = f[c_wlat].empty(), wlon_empty = f[c_wlon].empty();
        if (wlat_empty != wlon_empty) {
            reject("invalid work location");
            continue;
        }
        if (!wlat_empty) {
            double wlat, wlon;
            if (!parse_double(f[c_wlat], wlat) || !parse_double(f[c_wlon], wlon) ||
                !geo_point_valid({wlat, wlon})) {
                reject("invalid work location");
                continue;
            }
            c.work = GeoPoint{wlat, wlon};
        }
        out.customers.push_back(std::move(c));
    }
    return out;
}

MerchantIngest ingest_merchants(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_id = require_column(reader, "merchant_id", "merchants");
    const std::size_t c_cat = require_column(reader, "category_id", "merchants");
    const std::size_t c_dist = require_column(reader, "district_id", "merchants");
    const std::size_t c_lat = require_column(reader, "lat", "merchants");
    const std::size_t c_lon = require_column(reader, "lon", "merchants");
    const std::size_t width = reader.header().size();

    MerchantIngest out;
    std::unordered_set<std::string> seen;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::size_t row = reader.row_number();
        auto reject = [&](const char* reason) { out.rejections.push_back({row, reason}); };
        if (f.size() != width) {
            reject("malformed row");
            continue;
        }
        MerchantProfile m;
        m.merchant_id = f[c_id];
        if (m.merchant_id.empty()) {
            reject("missing merchant_id");
            continue;
        }
        if (!seen.insert(m.merchant_id).second) {
            reject("duplicate merchant_id");
            continue;
        }
        m.category_id = f[c_cat];
        if (m.category_id.empty()) {
            reject("missing category_id");
            continue;
        }
        m.district_id = f[c_dist];
        if (m.district_id.empty()) {
            reject("missing district_id");
            continue;
        }
        double lat, lon;
        if (!parse_double(f[c_lat], lat) || !parse_double(f[c_lon], lon) ||
            !geo_point_valid({lat, lon})) {
            reject("invalid location");
            continue;
        }
        m.location = {lat, lon};
        out.merchants.push_back(std::move(m));
    }
    return out;
}

std::vector<TransactionRecord> filter_active_customers(std::vector<TransactionRecord> records,
                                                       std::size_t min_count) {
    if (min_count < 1) throw ValidationError("filter_active_customers: min_count must be >= 1");
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& r : records) ++counts[r.customer_id];
    std::vector<TransactionRecord> kept;
    kept.reserve(records.size());
    for (auto& r : records)
        if (counts[r.customer_id] >= min_count) kept.push_back(std::move(r));
    return kept;
}

DatasetSummary summarize(std::span<const TransactionRecord> records, const DateRange& window) {
    std::unordered_set<std::string> customers, merchants;
    for (const auto& r : records) {
        customers.insert(r.customer_id);
        merchants.insert(r.merchant_id);
    }
    if (customers.empty())
        throw DegenerateError("summarize: no customers, average transactions undefined");
    DatasetSummary s;
    s.period_start = window.start;
    s.period_end = window.end;
    s.transaction_count = records.size();
    s.customer_count = customers.size();
    s.merchant_count = merchants.size();
    s.avg_transactions_per_customer =
        static_cast<double>(s.transaction_count) / static_cast<double>(s.customer_count);
    return s;
}

std::optional<std::string> DistrictTable::district_of(const std::string& customer_id,
                                                      const GeoPoint& home) const {
    if (const auto it = explicit_labels.find(customer_id); it != explicit_labels.end())
        return it->second;
    for (const auto& box : boxes)
        if (box.contains(home)) return box.district_id;
    return std::nullopt;
}

std::vector<DistrictBox> ingest_district_boxes(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_id = require_column(reader, "district_id", "districts");
    const std::size_t c_lat_lo = require_column(reader, "lat_lo", "districts");
    const std::size_t c_lon_lo = require_column(reader, "lon_lo", "districts");
    const std::size_t c_lat_hi = require_column(reader, "lat_hi", "districts");
    const std::size_t c_lon_hi = require_column(reader, "lon_hi", "districts");

    std::vector<DistrictBox> boxes;
    std::vector<std::string> f;
    while (reader.next(f)) {
        DistrictBox b;
        b.district_id = f[c_id];
        if (b.district_id.empty())
            throw ValidationError("districts: empty district_id at row " +
                                  std::to_string(reader.row_number()));
        if (!parse_double(f[c_lat_lo], b.lat_lo) || !parse_double(f[c_lon_lo], b.lon_lo) ||
            !parse_double(f[c_lat_hi], b.lat_hi) || !parse_double(f[c_lon_hi], b.lon_hi) ||
            b.lat_lo > b.lat_hi || b.lon_lo > b.lon_hi)
            throw ValidationError("districts: invalid bounding box at row " +
                                  std::to_string(reader.row_number()));
        boxes.push_back(std::move(b));
    }
    return boxes;
}

std::unordered_map<std::string, std::string> ingest_customer_districts(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_cust = require_column(reader, "customer_id", "customer_districts");
    const std::size_t c_dist = require_column(reader, "district_id", "customer_districts");

    std::unordered_map<std::string, std::string> labels;
    std::vector<std::string> f;
    while (reader.next(f)) {
        if (f[c_cust].empty() || f[c_dist].empty())
            throw ValidationError("customer_districts: empty field at row " +
                                  std::to_string(reader.row_number()));
        labels[f[c_cust]] = f[c_dist];
    }
    return labels;
}

std::vector<std::string> assign_home_districts(Dataset& dataset, const DistrictTable& table) {
    dataset.customer_district.assign(dataset.customers.size(), "");
    std::vector<std::string> unassigned;
    for (std::size_t i = 0; i < dataset.customers.size(); ++i) {
        const auto& c = dataset.customers[i];
        if (auto d = table.district_of(c.customer_id, c.home)) {
            dataset.customer_district[i] = std::move(*d);
        } else {
            unassigned.push_back(c.customer_id);
        }
    }
    return unassigned;
}

}  // namespace huffkit
