#ifndef COLDFLEET_SCENARIO_HPP
#define COLDFLEET_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coldfleet/montecarlo.hpp"
#include "coldfleet/power_quality.hpp"
#include "coldfleet/route.hpp"
#include "coldfleet/swap_station.hpp"

namespace coldfleet {

enum class ScenarioKind { mc, route, swap, pq };

const char* to_string(ScenarioKind kind);

struct McRun {
    FleetScenario scenario;
    int histogram_bins = 50;
    int threads = 1;
};

struct DepotSpec {
    double charger_kw = 50.0;
    double available_min = 480.0;
};

struct RouteRun {
    double ambient_f = 70.0;
    double horizon_min = 960.0;
    double step_min = 0.5;
    Route route;
    BusConfig bus;
    ChargePolicy policy;
    ThermalModel thermal;
    std::optional<DepotSpec> depot;  // overnight deep charge after the day
};

struct SwapRun {
    SwapStation station;
    Tariff tariff;
    std::vector<double> arrivals_min;
    StationDayOptions options;
    double horizon_min = 1440.0;
    double diverted_fraction = 0.25;
    std::pair<double, double> dc_fast_range_min{30.0, 90.0};
    int vehicles_per_day = 10;
};

struct PqRun {
    std::string measurements_csv;  // resolved against the config's directory
    LimitTable table;
    ValidationOptions validation;
    // Charger ratings to fit a temperature trend for; empty = every rating
    // present with at least two distinct temperatures.
    std::vector<double> trend_ratings_kw;
};

// A parsed scenario file: exactly one run block, a seed, and the canonical
// JSON used for hashing. Unknown fields are rejected (strict schema).
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::mc;
    std::uint64_t seed = 1;
    std::string output_dir;  // empty = decided by the caller
    std::optional<McRun> mc;
    std::optional<RouteRun> route;
    std::optional<SwapRun> swap;
    std::optional<PqRun> pq;
    nlohmann::json canonical;
};

ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_json(const nlohmann::json& doc, const std::string& base_dir);

// Overrides the seed everywhere it matters (config, run block, hash input).
void apply_seed(ScenarioConfig& config, std::uint64_t seed);

struct RunManifest {
    std::string config_hash;  // FNV-1a 64 over the canonical JSON text
    std::uint64_t seed = 0;
    std::string version;
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;  // file names written into the output dir
};

// Executes the scenario and writes its outputs (CSV/JSON plus manifest.json)
// into out_dir, creating the directory if needed.
RunManifest run(const ScenarioConfig& config, const std::string& out_dir);

// Histogram CSV: bin_left,bin_right,count; counts sum to the sample count.
void emit_histogram(const std::vector<double>& samples, int bins, std::ostream& out);

std::string config_hash_hex(const nlohmann::json& canonical);

}  // namespace coldfleet

#endif  // COLDFLEET_SCENARIO_HPP
