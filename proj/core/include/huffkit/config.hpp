#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "huffkit/geo.hpp"
#include "huffkit/huff.hpp"
#include "huffkit/synth.hpp"
#include "huffkit/types.hpp"

namespace huffkit {

// One run's worth of knobs. Loaded from a JSON config file; every CLI flag
// overrides its key; the effective result is echoed into the output
// directory for provenance.
struct RunConfig {
    // input files (ingest/fit/indicators/regress read these)
    std::string transactions_path;
    std::string customers_path;
    std::string merchants_path;
    std::string districts_path;            // optional box table
    std::string customer_districts_path;   // optional explicit home labels

    // regression inputs (cmd_regress reads fit + indicator artifacts)
    std::string cell_fits_path;
    std::string indicators_path;

    DateRange window{0, 0};                // zero-width means "not set"
    std::size_t min_transactions = 0;      // per-customer activity filter
    double max_rejection_fraction = 0.01;  // above this, exit with a warning

    DistancePolicy distance;
    FitOptions fit;                        // swarm + restarts
    std::string estimator = "pso";         // or "loglinear"

    std::vector<std::string> categories;   // empty: all observed
    std::vector<std::string> districts;    // empty: all observed
    std::size_t min_cell_transactions = 0;

    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool seed_explicit = false;  // fit/synth refuse to run on an implicit seed
    std::size_t workers = 1;

    std::optional<CityConfig> synth;       // present when the run generates data

    void validate() const;  // throws ValidationError on bad combinations
};

// Parses a JSON config document. Unknown keys are an error (typos should
// fail loudly, not silently fall back to defaults).
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Serializes the fully-resolved config, defaults included, as stable
// pretty-printed JSON. parse_run_config(effective_config_json(c)) == c.
std::string effective_config_json(const RunConfig& config);

}  // namespace huffkit
