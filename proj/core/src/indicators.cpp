#include "huffkit/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "huffkit/errors.hpp"

namespace huffkit {

double shannon_entropy(std::span<const std::int64_t> counts) {
    long double total = 0.0L;
    for (auto c : counts) {
        if (c < 0) throw ValidationError("shannon_entropy: negative count");
        total += static_cast<long double>(c);
    }
    if (total <= 0.0L) throw DegenerateError("shannon_entropy: all counts are zero");
    long double h = 0.0L;
    for (auto c : counts) {
        if (c == 0) continue;
        long double p = static_cast<long double>(c) / total;
        h -= p * std::log(p);
    }
    if (h < 0.0L) h = 0.0L;  // guard tiny negative round-off
    return static_cast<double>(h);
}

std::string attribute_name(DemographicAttribute a) {
    switch (a) {
        case DemographicAttribute::kGender: return "gender";
        case DemographicAttribute::kMaritalStatus: return "marital_status";
        case DemographicAttribute::kEducationLevel: return "education_level";
        case DemographicAttribute::kWorkStatus: return "work_status";
    }
    throw ValidationError("attribute_name: unknown attribute");
}

namespace {

const std::string& attribute_value(const CustomerProfile& c, DemographicAttribute a) {
    switch (a) {
        case DemographicAttribute::kGender: return c.gender;
        case DemographicAttribute::kMaritalStatus: return c.marital_status;
        case DemographicAttribute::kEducationLevel: return c.education_level;
        case DemographicAttribute::kWorkStatus: return c.work_status;
    }
    throw ValidationError("attribute_value: unknown attribute");
}

double entropy_of_tally(const std::map<std::string, std::int64_t>& tally, const char* what) {
    if (tally.empty()) throw DegenerateError(std::string(what) + ": nothing to tally");
    std::vector<std::int64_t> counts;
    counts.reserve(tally.size());
    for (const auto& [key, n] : tally) counts.push_back(n);
    try {
        return shannon_entropy(counts);
    } catch (const DegenerateError&) {
        throw DegenerateError(std::string(what) + ": nothing to tally");
    }
}

const std::string& home_district_of(const Dataset& dataset, const std::string& customer_id) {
    static const std::string kEmpty;
    auto it = dataset.customer_index.find(customer_id);
    if (it == dataset.customer_index.end()) return kEmpty;
    if (it->second >= dataset.customer_district.size()) return kEmpty;
    return dataset.customer_district[it->second];
}

}  // namespace

double mobility_diversity(const Dataset& dataset, const std::string& district_id) {
    std::map<std::string, std::int64_t> destinations;
    for (const auto& tx : dataset.transactions) {
        if (home_district_of(dataset, tx.customer_id) != district_id) continue;
        auto mit = dataset.merchant_index.find(tx.merchant_id);
        if (mit == dataset.merchant_index.end())
            throw IntegrityError("mobility_diversity: unknown merchant " + tx.merchant_id);
        ++destinations[dataset.merchants[mit->second].district_id];
    }
    return entropy_of_tally(destinations, "mobility_diversity");
}

double demographic_diversity(const Dataset& dataset, const std::string& district_id,
                             DemographicAttribute attribute, std::size_t* missing_excluded) {
    std::map<std::string, std::int64_t> tally;
    std::size_t missing = 0;
    for (const auto& c : dataset.customers) {
        if (home_district_of(dataset, c.customer_id) != district_id) continue;
        const std::string& v = attribute_value(c, attribute);
        if (v.empty()) {
            ++missing;
            continue;
        }
        ++tally[v];
    }
    if (missing_excluded != nullptr) *missing_excluded = missing;
    return entropy_of_tally(tally, "demographic_diversity");
}

double merchant_diversity(const Dataset& dataset, const std::string& district_id) {
    std::map<std::string, std::int64_t> categories;
    for (const auto& m : dataset.merchants) {
        if (m.district_id != district_id) continue;
        ++categories[m.category_id];
    }
    return entropy_of_tally(categories, "merchant_diversity");
}

double merchant_share_bias(const Dataset& dataset, const std::string& district_id) {
    std::unordered_map<std::string, Money> revenue;
    for (const auto& m : dataset.merchants)
        if (m.district_id == district_id) revenue.emplace(m.merchant_id, 0);
    if (revenue.empty()) throw DegenerateError("merchant_share_bias: no merchants in district");

    Money total = 0;
    for (const auto& tx : dataset.transactions) {
        auto it = revenue.find(tx.merchant_id);
        if (it == revenue.end()) continue;
        it->second += tx.amount;
        total += tx.amount;
    }
    if (total <= 0) throw DegenerateError("merchant_share_bias: district has no transaction volume");
    if (revenue.size() <= 5) return 1.0;

    std::vector<std::pair<std::string, Money>> ranked(revenue.begin(), revenue.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return natural_less(a.first, b.first);
    });
    Money top = 0;
    for (std::size_t i = 0; i < 5; ++i) top += ranked[i].second;
    return static_cast<double>(top) / static_cast<double>(total);
}

double gini(std::span<const Money> incomes, std::size_t* n_used) {
    std::vector<double> xs;
    xs.reserve(incomes.size());
    for (auto v : incomes) {
        if (v < 0) throw ValidationError("gini: negative income");
        if (v > 0) xs.push_back(static_cast<double>(v));
    }
    if (n_used != nullptr) *n_used = xs.size();
    if (xs.size() < 2) throw DegenerateError("gini: fewer than 2 positive incomes");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double weighted = 0.0, total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        weighted += (static_cast<double>(i) + 1.0) * xs[i];
        total += xs[i];
    }
    return (2.0 * weighted) / (n * total) - (n + 1.0) / n;
}

std::vector<DistrictIndicators> compute_district_indicators(
    const Dataset& dataset, std::span<const std::string> districts) {
    std::vector<std::string> order(districts.begin(), districts.end());
    std::sort(order.begin(), order.end(), NaturalLess{});
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<DistrictIndicators> rows;
    rows.reserve(order.size());
    for (const auto& d : order) {
        DistrictIndicators row;
        row.district_id = d;

        auto run = [&row](std::optional<double>& slot, const char* label, auto&& op) {
            try {
                slot = op();
            } catch (const DegenerateError& e) {
                slot.reset();
                row.undefined_reasons.push_back(std::string(label) + ": " + e.what());
            }
        };

        run(row.mobility_diversity, "mobility_diversity",
            [&] { return mobility_diversity(dataset, d); });
        const std::pair<DemographicAttribute, std::optional<double>*> demo[] = {
            {DemographicAttribute::kGender, &row.gender_diversity},
            {DemographicAttribute::kMaritalStatus, &row.marital_diversity},
            {DemographicAttribute::kEducationLevel, &row.education_diversity},
            {DemographicAttribute::kWorkStatus, &row.job_diversity},
        };
        for (const auto& [attr, slot] : demo) {
            std::size_t missing = 0;
            DemographicAttribute a = attr;
            run(*slot, attribute_name(a).c_str(),
                [&] { return demographic_diversity(dataset, d, a, &missing); });
            row.demographic_exclusions += missing;
        }
        run(row.merchant_diversity, "merchant_diversity",
            [&] { return merchant_diversity(dataset, d); });
        run(row.merchant_share_bias, "merchant_share_bias",
            [&] { return merchant_share_bias(dataset, d); });
        run(row.income_gini, "income_gini", [&] {
            std::vector<Money> incomes;
            for (const auto& c : dataset.customers)
                if (home_district_of(dataset, c.customer_id) == d) incomes.push_back(c.income);
            std::size_t used = 0;
            double g = gini(incomes, &used);
            row.n_customers_income = used;
            return g;
        });
        if (!row.income_gini.has_value()) {
            // still report how many positive incomes the district had
            std::size_t used = 0;
            for (const auto& c : dataset.customers)
                if (home_district_of(dataset, c.customer_id) == d && c.income > 0) ++used;
            row.n_customers_income = used;
        }

        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace huffkit
