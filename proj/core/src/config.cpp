#include "huffkit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "huffkit/errors.hpp"

namespace huffkit {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ValidationError("config: unknown key \"" + key + "\" in " + where);
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw ValidationError("config: " + key + " must be a number");
    return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& key) {
    if (!v.is_number_unsigned())
        throw ValidationError("config: " + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ValidationError("config: " + key + " must be a string");
    return v.get<std::string>();
}

std::int64_t as_instant(const json& v, const std::string& key) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) {
        auto parsed = parse_timestamp(v.get<std::string>());
        if (!parsed) throw ValidationError("config: " + key + " is not a valid timestamp");
        return *parsed;
    }
    throw ValidationError("config: " + key + " must be a timestamp string or epoch seconds");
}

std::vector<std::string> as_string_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ValidationError("config: " + key + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) out.push_back(as_string(item, key + " entry"));
    return out;
}

void parse_inputs(const json& obj, RunConfig& cfg) {
    check_keys(obj,
               {"transactions", "customers", "merchants", "districts", "customer_districts",
                "cell_fits", "indicators"},
               "inputs");
    if (obj.contains("transactions")) cfg.transactions_path = as_string(obj["transactions"], "inputs.transactions");
    if (obj.contains("customers")) cfg.customers_path = as_string(obj["customers"], "inputs.customers");
    if (obj.contains("merchants")) cfg.merchants_path = as_string(obj["merchants"], "inputs.merchants");
    if (obj.contains("districts")) cfg.districts_path = as_string(obj["districts"], "inputs.districts");
    if (obj.contains("customer_districts"))
        cfg.customer_districts_path = as_string(obj["customer_districts"], "inputs.customer_districts");
    if (obj.contains("cell_fits")) cfg.cell_fits_path = as_string(obj["cell_fits"], "inputs.cell_fits");
    if (obj.contains("indicators")) cfg.indicators_path = as_string(obj["indicators"], "inputs.indicators");
}

void parse_swarm(const json& obj, RunConfig& cfg) {
    check_keys(obj,
               {"size", "max_iterations", "inertia", "cognitive", "social", "tolerance",
                "stall_iterations", "restarts", "eval_threads"},
               "swarm");
    SwarmConfig& s = cfg.fit.swarm;
    if (obj.contains("size")) s.swarm_size = as_count(obj["size"], "swarm.size");
    if (obj.contains("max_iterations"))
        s.max_iterations = as_count(obj["max_iterations"], "swarm.max_iterations");
    if (obj.contains("inertia")) s.inertia = as_double(obj["inertia"], "swarm.inertia");
    if (obj.contains("cognitive")) s.cognitive = as_double(obj["cognitive"], "swarm.cognitive");
    if (obj.contains("social")) s.social = as_double(obj["social"], "swarm.social");
    if (obj.contains("tolerance")) s.tolerance = as_double(obj["tolerance"], "swarm.tolerance");
    if (obj.contains("stall_iterations"))
        s.stall_iterations = as_count(obj["stall_iterations"], "swarm.stall_iterations");
    if (obj.contains("eval_threads"))
        s.eval_threads = as_count(obj["eval_threads"], "swarm.eval_threads");
    if (obj.contains("restarts")) cfg.fit.restarts = as_count(obj["restarts"], "swarm.restarts");
}

void parse_synth(const json& obj, RunConfig& cfg) {
    check_keys(obj,
               {"n_districts", "grid_columns", "origin_lat", "origin_lon", "box_height_deg",
                "box_width_deg", "customers_per_district", "visits_per_customer", "categories",
                "revenue_mu_log", "revenue_sigma_log", "amount_mu_log", "amount_sigma_log",
                "income_mu_log", "income_sigma_log", "zero_income_rate", "work_location_rate",
                "noise_rate", "clamp_revenue_to_truth"},
               "synth");
    CityConfig city;
    if (obj.contains("n_districts")) city.n_districts = as_count(obj["n_districts"], "synth.n_districts");
    if (obj.contains("grid_columns")) city.grid_columns = as_count(obj["grid_columns"], "synth.grid_columns");
    if (obj.contains("origin_lat")) city.origin_lat = as_double(obj["origin_lat"], "synth.origin_lat");
    if (obj.contains("origin_lon")) city.origin_lon = as_double(obj["origin_lon"], "synth.origin_lon");
    if (obj.contains("box_height_deg"))
        city.box_height_deg = as_double(obj["box_height_deg"], "synth.box_height_deg");
    if (obj.contains("box_width_deg"))
        city.box_width_deg = as_double(obj["box_width_deg"], "synth.box_width_deg");
    if (obj.contains("customers_per_district"))
        city.customers_per_district = as_count(obj["customers_per_district"], "synth.customers_per_district");
    if (obj.contains("visits_per_customer"))
        city.visits_per_customer = as_count(obj["visits_per_customer"], "synth.visits_per_customer");
    if (obj.contains("categories")) {
        if (!obj["categories"].is_array())
            throw ValidationError("config: synth.categories must be an array");
        for (const auto& entry : obj["categories"]) {
            check_keys(entry, {"id", "merchants", "alpha", "beta"}, "synth.categories entry");
            CategorySpec spec;
            if (!entry.contains("id"))
                throw ValidationError("config: synth.categories entry needs an id");
            spec.category_id = as_string(entry["id"], "synth.categories id");
            if (entry.contains("merchants"))
                spec.merchants_per_district = as_count(entry["merchants"], "synth.categories merchants");
            if (entry.contains("alpha")) spec.true_params.alpha = as_double(entry["alpha"], "alpha");
            if (entry.contains("beta")) spec.true_params.beta = as_double(entry["beta"], "beta");
            city.categories.push_back(std::move(spec));
        }
    }
    if (obj.contains("revenue_mu_log")) city.revenue_mu_log = as_double(obj["revenue_mu_log"], "synth.revenue_mu_log");
    if (obj.contains("revenue_sigma_log"))
        city.revenue_sigma_log = as_double(obj["revenue_sigma_log"], "synth.revenue_sigma_log");
    if (obj.contains("amount_mu_log")) city.amount_mu_log = as_double(obj["amount_mu_log"], "synth.amount_mu_log");
    if (obj.contains("amount_sigma_log"))
        city.amount_sigma_log = as_double(obj["amount_sigma_log"], "synth.amount_sigma_log");
    if (obj.contains("income_mu_log")) city.income_mu_log = as_double(obj["income_mu_log"], "synth.income_mu_log");
    if (obj.contains("income_sigma_log"))
        city.income_sigma_log = as_double(obj["income_sigma_log"], "synth.income_sigma_log");
    if (obj.contains("zero_income_rate"))
        city.zero_income_rate = as_double(obj["zero_income_rate"], "synth.zero_income_rate");
    if (obj.contains("work_location_rate"))
        city.work_location_rate = as_double(obj["work_location_rate"], "synth.work_location_rate");
    if (obj.contains("noise_rate")) city.noise_rate = as_double(obj["noise_rate"], "synth.noise_rate");
    if (obj.contains("clamp_revenue_to_truth")) {
        if (!obj["clamp_revenue_to_truth"].is_boolean())
            throw ValidationError("config: synth.clamp_revenue_to_truth must be a boolean");
        city.clamp_revenue_to_truth = obj["clamp_revenue_to_truth"].get<bool>();
    }
    cfg.synth = std::move(city);
}

}  // namespace

void RunConfig::validate() const {
    if (max_rejection_fraction < 0.0 || max_rejection_fraction > 1.0)
        throw ValidationError("config: max_rejection_fraction must lie in [0, 1]");
    if (estimator != "pso" && estimator != "loglinear")
        throw ValidationError("config: estimator must be \"pso\" or \"loglinear\"");
    if (workers < 1) throw ValidationError("config: workers must be >= 1");
    if (distance.floor_km <= 0.0) throw ValidationError("config: floor_km must be positive");
    if (out_dir.empty()) throw ValidationError("config: out directory must be set");
    fit.swarm.validate();
    if (fit.restarts < 1) throw ValidationError("config: swarm.restarts must be >= 1");
    if (window.start > window.end)
        throw ValidationError("config: window start must not exceed its end");
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
    check_keys(doc,
               {"inputs", "window", "min_transactions", "max_rejection_fraction", "distance",
                "swarm", "estimator", "categories", "districts", "min_cell_transactions", "out",
                "seed", "workers", "synth"},
               "the top level");

    RunConfig cfg;
    if (doc.contains("inputs")) parse_inputs(doc["inputs"], cfg);
    if (doc.contains("window")) {
        const json& w = doc["window"];
        check_keys(w, {"start", "end"}, "window");
        if (!w.contains("start") || !w.contains("end"))
            throw ValidationError("config: window needs both start and end");
        cfg.window.start = as_instant(w["start"], "window.start");
        cfg.window.end = as_instant(w["end"], "window.end");
    }
    if (doc.contains("min_transactions"))
        cfg.min_transactions = as_count(doc["min_transactions"], "min_transactions");
    if (doc.contains("max_rejection_fraction"))
        cfg.max_rejection_fraction = as_double(doc["max_rejection_fraction"], "max_rejection_fraction");
    if (doc.contains("distance")) {
        const json& d = doc["distance"];
        check_keys(d, {"anchor", "floor_km"}, "distance");
        if (d.contains("anchor")) cfg.distance.anchor = parse_anchor(as_string(d["anchor"], "distance.anchor"));
        if (d.contains("floor_km")) cfg.distance.floor_km = as_double(d["floor_km"], "distance.floor_km");
    }
    if (doc.contains("swarm")) parse_swarm(doc["swarm"], cfg);
    if (doc.contains("estimator")) cfg.estimator = as_string(doc["estimator"], "estimator");
    if (doc.contains("categories")) cfg.categories = as_string_list(doc["categories"], "categories");
    if (doc.contains("districts")) cfg.districts = as_string_list(doc["districts"], "districts");
    if (doc.contains("min_cell_transactions"))
        cfg.min_cell_transactions = as_count(doc["min_cell_transactions"], "min_cell_transactions");
    if (doc.contains("out")) cfg.out_dir = as_string(doc["out"], "out");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            throw ValidationError("config: seed must be a non-negative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
        cfg.seed_explicit = true;
    }
    if (doc.contains("workers")) cfg.workers = as_count(doc["workers"], "workers");
    if (doc.contains("synth")) parse_synth(doc["synth"], cfg);
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string effective_config_json(const RunConfig& config) {
    json doc;
    json inputs;
    inputs["transactions"] = config.transactions_path;
    inputs["customers"] = config.customers_path;
    inputs["merchants"] = config.merchants_path;
    inputs["districts"] = config.districts_path;
    inputs["customer_districts"] = config.customer_districts_path;
    inputs["cell_fits"] = config.cell_fits_path;
    inputs["indicators"] = config.indicators_path;
    doc["inputs"] = inputs;
    doc["window"] = {{"start", format_timestamp(config.window.start)},
                     {"end", format_timestamp(config.window.end)}};
    doc["min_transactions"] = config.min_transactions;
    doc["max_rejection_fraction"] = config.max_rejection_fraction;
    doc["distance"] = {{"anchor", anchor_name(config.distance.anchor)},
                       {"floor_km", config.distance.floor_km}};
    doc["swarm"] = {{"size", config.fit.swarm.swarm_size},
                    {"max_iterations", config.fit.swarm.max_iterations},
                    {"inertia", config.fit.swarm.inertia},
                    {"cognitive", config.fit.swarm.cognitive},
                    {"social", config.fit.swarm.social},
                    {"tolerance", config.fit.swarm.tolerance},
                    {"stall_iterations", config.fit.swarm.stall_iterations},
                    {"eval_threads", config.fit.swarm.eval_threads},
                    {"restarts", config.fit.restarts}};
    doc["estimator"] = config.estimator;
    doc["categories"] = config.categories;
    doc["districts"] = config.districts;
    doc["min_cell_transactions"] = config.min_cell_transactions;
    doc["out"] = config.out_dir;
    doc["seed"] = config.seed;
    doc["workers"] = config.workers;
    if (config.synth) {
        const CityConfig& c = *config.synth;
        json cats = json::array();
        for (const auto& spec : c.categories.empty() ? CityConfig::standard_categories()
                                                     : c.categories)
            cats.push_back({{"id", spec.category_id},
                            {"merchants", spec.merchants_per_district},
                            {"alpha", spec.true_params.alpha},
                            {"beta", spec.true_params.beta}});
        doc["synth"] = {{"n_districts", c.n_districts},
                        {"grid_columns", c.grid_columns},
                        {"origin_lat", c.origin_lat},
                        {"origin_lon", c.origin_lon},
                        {"box_height_deg", c.box_height_deg},
                        {"box_width_deg", c.box_width_deg},
                        {"customers_per_district", c.customers_per_district},
                        {"visits_per_customer", c.visits_per_customer},
                        {"categories", cats},
                        {"revenue_mu_log", c.revenue_mu_log},
                        {"revenue_sigma_log", c.revenue_sigma_log},
                        {"amount_mu_log", c.amount_mu_log},
                        {"amount_sigma_log", c.amount_sigma_log},
                        {"income_mu_log", c.income_mu_log},
                        {"income_sigma_log", c.income_sigma_log},
                        {"zero_income_rate", c.zero_income_rate},
                        {"work_location_rate", c.work_location_rate},
                        {"noise_rate", c.noise_rate},
                        {"clamp_revenue_to_truth", c.clamp_revenue_to_truth}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace huffkit
