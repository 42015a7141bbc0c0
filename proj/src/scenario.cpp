#include "coldfleet/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "coldfleet/csv.hpp"
#include "coldfleet/version.hpp"

namespace coldfleet {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::mc: return "mc";
        case ScenarioKind::route: return "route";
        case ScenarioKind::swap: return "swap";
        case ScenarioKind::pq: return "pq";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// strict JSON helpers
// ---------------------------------------------------------------------------

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw UnknownField(join(path, it.key()));
    }
}

double get_num(const json& obj, const std::string& path, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) throw SchemaError(join(path, key), "expected a number");
    return v.get<double>();
}

double require_num(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) throw SchemaError(join(path, key), "required field missing");
    return get_num(obj, path, key, 0.0);
}

std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                     std::int64_t dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw SchemaError(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw SchemaError(join(path, key), "expected a boolean");
    return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
    return v.get<std::string>();
}

std::pair<double, double> get_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError(path, "expected a [number, number] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<std::pair<double, double>> get_pair_list(const json& obj, const std::string& path,
                                                     const char* key,
                                                     std::vector<std::pair<double, double>> dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_array()) throw SchemaError(join(path, key), "expected an array of pairs");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_pair(v[i], join(path, key) + "[" + std::to_string(i) + "]"));
    return out;
}

// Re-reports a core validation failure with the config block it came from.
template <typename T>
void validate_block(const T& value, const std::string& path) {
    try {
        validate(value);
    } catch (const InvalidParameter& e) {
        throw SchemaError(path, e.what());
    }
}

// ---------------------------------------------------------------------------
// block parsers
// ---------------------------------------------------------------------------

ChargePolicy parse_policy(const json& obj, const std::string& path) {
    check_keys(obj, path, {"max_c_rate", "taper_knee_soc", "target_soc"});
    ChargePolicy p;
    p.max_c_rate = get_num(obj, path, "max_c_rate", p.max_c_rate);
    p.taper_knee_soc = get_num(obj, path, "taper_knee_soc", p.taper_knee_soc);
    p.target_soc = get_num(obj, path, "target_soc", p.target_soc);
    validate_block(p, path);
    return p;
}

ThermalModel parse_thermal(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"resistance_anchor_hot", "resistance_anchor_cold", "ceiling_breakpoints",
                "charge_derate_exponent"});
    ThermalModel t;
    if (obj.contains("resistance_anchor_hot"))
        t.resistance_anchor_hot = get_pair(obj.at("resistance_anchor_hot"),
                                           join(path, "resistance_anchor_hot"));
    if (obj.contains("resistance_anchor_cold"))
        t.resistance_anchor_cold = get_pair(obj.at("resistance_anchor_cold"),
                                            join(path, "resistance_anchor_cold"));
    t.ceiling_breakpoints =
        get_pair_list(obj, path, "ceiling_breakpoints", t.ceiling_breakpoints);
    t.charge_derate_exponent =
        get_num(obj, path, "charge_derate_exponent", t.charge_derate_exponent);
    validate_block(t, path);
    return t;
}

AuxLoadModel parse_aux(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"heater_type", "cabin_setpoint_f", "max_heater_power_kw",
                "heat_pump_effective_floor_f", "full_power_deficit_f", "cop_gain_per_f"});
    AuxLoadModel a;
    const std::string heater = get_str(obj, path, "heater_type", "resistive");
    if (heater == "resistive")
        a.heater_type = HeaterType::resistive;
    else if (heater == "heat_pump")
        a.heater_type = HeaterType::heat_pump;
    else
        throw SchemaError(join(path, "heater_type"),
                          "expected 'resistive' or 'heat_pump', got '" + heater + "'");
    a.cabin_setpoint_f = get_num(obj, path, "cabin_setpoint_f", a.cabin_setpoint_f);
    a.max_heater_power_kw = get_num(obj, path, "max_heater_power_kw", a.max_heater_power_kw);
    a.heat_pump_effective_floor_f =
        get_num(obj, path, "heat_pump_effective_floor_f", a.heat_pump_effective_floor_f);
    a.full_power_deficit_f = get_num(obj, path, "full_power_deficit_f", a.full_power_deficit_f);
    a.cop_gain_per_f = get_num(obj, path, "cop_gain_per_f", a.cop_gain_per_f);
    validate_block(a, path);
    return a;
}

McRun parse_mc(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"fleet_size", "total_capacity_gwh", "daily_miles", "efficiency_mi_per_kwh",
                "loss_low", "loss_high", "soc_floor", "iterations", "histogram_bins", "threads"});
    McRun run;
    FleetScenario& s = run.scenario;
    s.fleet_size = get_int(obj, path, "fleet_size", s.fleet_size);
    s.total_capacity_gwh = get_num(obj, path, "total_capacity_gwh", s.total_capacity_gwh);
    s.daily_miles = get_num(obj, path, "daily_miles", s.daily_miles);
    s.efficiency_mi_per_kwh = get_num(obj, path, "efficiency_mi_per_kwh", s.efficiency_mi_per_kwh);
    s.loss_low = get_num(obj, path, "loss_low", s.loss_low);
    s.loss_high = get_num(obj, path, "loss_high", s.loss_high);
    s.soc_floor = get_num(obj, path, "soc_floor", s.soc_floor);
    s.iterations = get_int(obj, path, "iterations", s.iterations);
    run.histogram_bins = static_cast<int>(get_int(obj, path, "histogram_bins", run.histogram_bins));
    run.threads = static_cast<int>(get_int(obj, path, "threads", run.threads));
    if (run.histogram_bins <= 0) throw SchemaError(join(path, "histogram_bins"), "must be > 0");
    if (run.threads <= 0) throw SchemaError(join(path, "threads"), "must be > 0");
    validate_block(s, path);
    return run;
}

BusConfig parse_bus(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"capacity_kwh", "soc", "soh", "base_draw_kw", "cold_multiplier_curve",
                "soc_floor", "opportunity_target", "aux", "calibrate_runtimes"});
    BusConfig bus;
    bus.battery.capacity_kwh = get_num(obj, path, "capacity_kwh", bus.battery.capacity_kwh);
    bus.battery.soc = get_num(obj, path, "soc", bus.battery.soc);
    bus.battery.soh = get_num(obj, path, "soh", bus.battery.soh);
    bus.base_draw_kw = get_num(obj, path, "base_draw_kw", bus.base_draw_kw);
    bus.cold_multiplier_curve =
        get_pair_list(obj, path, "cold_multiplier_curve", bus.cold_multiplier_curve);
    bus.soc_floor = get_num(obj, path, "soc_floor", bus.soc_floor);
    bus.opportunity_target = get_num(obj, path, "opportunity_target", bus.opportunity_target);
    if (obj.contains("aux")) bus.aux = parse_aux(obj.at("aux"), join(path, "aux"));
    if (obj.contains("calibrate_runtimes")) {
        const json& c = obj.at("calibrate_runtimes");
        const std::string cpath = join(path, "calibrate_runtimes");
        check_keys(c, cpath,
                   {"warm_temp_f", "warm_runtime_min", "cold_temp_f", "cold_runtime_min"});
        try {
            bus = calibrate_to_runtimes(bus, get_num(c, cpath, "warm_temp_f", 70.0),
                                        get_num(c, cpath, "warm_runtime_min", 270.0),
                                        get_num(c, cpath, "cold_temp_f", -10.0),
                                        get_num(c, cpath, "cold_runtime_min", 90.0));
        } catch (const InvalidParameter& e) {
            throw SchemaError(cpath, e.what());
        }
    }
    validate_block(bus, path);
    return bus;
}

RouteRun parse_route(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"ambient_f", "horizon_min", "step_min", "bus", "charge_policy", "thermal",
                "stops", "legs", "loop", "depot"});
    RouteRun run;
    run.ambient_f = get_num(obj, path, "ambient_f", run.ambient_f);
    run.horizon_min = get_num(obj, path, "horizon_min", run.horizon_min);
    run.step_min = get_num(obj, path, "step_min", run.step_min);
    if (obj.contains("bus")) run.bus = parse_bus(obj.at("bus"), join(path, "bus"));
    if (obj.contains("charge_policy"))
        run.policy = parse_policy(obj.at("charge_policy"), join(path, "charge_policy"));
    if (obj.contains("thermal"))
        run.thermal = parse_thermal(obj.at("thermal"), join(path, "thermal"));

    if (!obj.contains("stops")) throw SchemaError(join(path, "stops"), "required field missing");
    const json& stops = obj.at("stops");
    if (!stops.is_array() || stops.empty())
        throw SchemaError(join(path, "stops"), "expected a non-empty array");
    for (std::size_t i = 0; i < stops.size(); ++i) {
        const std::string spath = join(path, "stops") + "[" + std::to_string(i) + "]";
        check_keys(stops[i], spath, {"name", "dwell_min", "charger_kw"});
        Stop stop;
        stop.name = get_str(stops[i], spath, "name", "stop " + std::to_string(i));
        stop.dwell_min = get_num(stops[i], spath, "dwell_min", 0.0);
        if (stops[i].contains("charger_kw"))
            stop.charger_kw = require_num(stops[i], spath, "charger_kw");
        run.route.stops.push_back(stop);
    }

    if (!obj.contains("legs")) throw SchemaError(join(path, "legs"), "required field missing");
    const json& legs = obj.at("legs");
    if (!legs.is_array()) throw SchemaError(join(path, "legs"), "expected an array");
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const std::string lpath = join(path, "legs") + "[" + std::to_string(i) + "]";
        check_keys(legs[i], lpath, {"miles", "minutes"});
        Leg leg;
        leg.miles = require_num(legs[i], lpath, "miles");
        leg.minutes = require_num(legs[i], lpath, "minutes");
        run.route.legs.push_back(leg);
    }
    run.route.loop = get_bool(obj, path, "loop", true);

    if (obj.contains("depot")) {
        const json& d = obj.at("depot");
        const std::string dpath = join(path, "depot");
        check_keys(d, dpath, {"charger_kw", "available_min"});
        DepotSpec spec;
        spec.charger_kw = get_num(d, dpath, "charger_kw", spec.charger_kw);
        spec.available_min = get_num(d, dpath, "available_min", spec.available_min);
        run.depot = spec;
    }

    if (!(run.step_min > 0.0)) throw SchemaError(join(path, "step_min"), "must be > 0");
    if (!(run.horizon_min > 0.0)) throw SchemaError(join(path, "horizon_min"), "must be > 0");
    validate_block(run.route, join(path, "stops/legs"));
    validate_block(run.policy, join(path, "charge_policy"));
    return run;
}

SwapRun parse_swap(const json& obj, const std::string& path) {
    check_keys(obj, path,
               {"station", "tariff", "arrivals_min", "arrival_pattern", "arrival_soc",
                "initial_rack_soc", "deferral_fraction", "horizon_min", "diverted_fraction",
                "dc_fast_range_min", "vehicles_per_day", "curtailment", "thermal"});
    SwapRun run;
    if (obj.contains("station")) {
        const json& st = obj.at("station");
        const std::string spath = join(path, "station");
        check_keys(st, spath,
                   {"slots", "battery_capacity_kwh", "swap_duration_min", "station_temp_f",
                    "thermal_window_f", "thermal_control", "slot_charger_kw", "bays",
                    "charge_policy"});
        run.station.slots = static_cast<int>(get_int(st, spath, "slots", run.station.slots));
        run.station.battery_capacity_kwh =
            get_num(st, spath, "battery_capacity_kwh", run.station.battery_capacity_kwh);
        run.station.swap_duration_min =
            get_num(st, spath, "swap_duration_min", run.station.swap_duration_min);
        run.station.station_temp_f = get_num(st, spath, "station_temp_f", run.station.station_temp_f);
        if (st.contains("thermal_window_f"))
            run.station.thermal_window_f =
                get_pair(st.at("thermal_window_f"), join(spath, "thermal_window_f"));
        run.station.thermal_control =
            get_bool(st, spath, "thermal_control", run.station.thermal_control);
        run.station.slot_charger_kw =
            get_num(st, spath, "slot_charger_kw", run.station.slot_charger_kw);
        run.station.bays = static_cast<int>(get_int(st, spath, "bays", run.station.bays));
        if (st.contains("charge_policy"))
            run.station.charge_policy =
                parse_policy(st.at("charge_policy"), join(spath, "charge_policy"));
        validate_block(run.station, spath);
    }
    if (obj.contains("tariff")) {
        const json& tf = obj.at("tariff");
        const std::string tpath = join(path, "tariff");
        check_keys(tf, tpath,
                   {"base_rate_usd_per_kwh", "offpeak_discount_usd_per_kwh", "offpeak_start_min",
                    "offpeak_end_min"});
        run.tariff.base_rate_usd_per_kwh =
            get_num(tf, tpath, "base_rate_usd_per_kwh", run.tariff.base_rate_usd_per_kwh);
        run.tariff.offpeak_discount_usd_per_kwh = get_num(
            tf, tpath, "offpeak_discount_usd_per_kwh", run.tariff.offpeak_discount_usd_per_kwh);
        run.tariff.offpeak_start_min =
            get_num(tf, tpath, "offpeak_start_min", run.tariff.offpeak_start_min);
        run.tariff.offpeak_end_min =
            get_num(tf, tpath, "offpeak_end_min", run.tariff.offpeak_end_min);
        validate_block(run.tariff, tpath);
    }

    if (obj.contains("arrivals_min") && obj.contains("arrival_pattern"))
        throw SchemaError(path, "give either arrivals_min or arrival_pattern, not both");
    if (obj.contains("arrivals_min")) {
        const json& arr = obj.at("arrivals_min");
        if (!arr.is_array()) throw SchemaError(join(path, "arrivals_min"), "expected an array");
        for (const auto& v : arr) {
            if (!v.is_number())
                throw SchemaError(join(path, "arrivals_min"), "expected numbers");
            run.arrivals_min.push_back(v.get<double>());
        }
    } else {
        const std::string apath = join(path, "arrival_pattern");
        std::int64_t count = 9;
        double start = 480.0, interval = 30.0;
        if (obj.contains("arrival_pattern")) {
            const json& ap = obj.at("arrival_pattern");
            check_keys(ap, apath, {"count", "start_min", "interval_min"});
            count = get_int(ap, apath, "count", count);
            start = get_num(ap, apath, "start_min", start);
            interval = get_num(ap, apath, "interval_min", interval);
        }
        if (count < 0) throw SchemaError(join(apath, "count"), "must be >= 0");
        for (std::int64_t i = 0; i < count; ++i)
            run.arrivals_min.push_back(start + interval * static_cast<double>(i));
    }

    run.options.arrival_soc = get_num(obj, path, "arrival_soc", run.options.arrival_soc);
    run.options.initial_rack_soc =
        get_num(obj, path, "initial_rack_soc", run.options.initial_rack_soc);
    run.options.deferral_fraction =
        get_num(obj, path, "deferral_fraction", run.options.deferral_fraction);
    if (obj.contains("curtailment")) {
        const json& c = obj.at("curtailment");
        const std::string cpath = join(path, "curtailment");
        check_keys(c, cpath, {"ceiling_kw", "from_min", "to_min"});
        Curtailment cur;
        cur.ceiling_kw = require_num(c, cpath, "ceiling_kw");
        cur.from_min = get_num(c, cpath, "from_min", 0.0);
        cur.to_min = get_num(c, cpath, "to_min", 1440.0);
        run.options.curtailment = cur;
    }
    if (obj.contains("thermal"))
        run.options.thermal = parse_thermal(obj.at("thermal"), join(path, "thermal"));

    run.horizon_min = get_num(obj, path, "horizon_min", run.horizon_min);
    run.diverted_fraction = get_num(obj, path, "diverted_fraction", run.diverted_fraction);
    if (obj.contains("dc_fast_range_min"))
        run.dc_fast_range_min =
            get_pair(obj.at("dc_fast_range_min"), join(path, "dc_fast_range_min"));
    run.vehicles_per_day =
        static_cast<int>(get_int(obj, path, "vehicles_per_day", run.vehicles_per_day));
    if (!(run.horizon_min > 0.0)) throw SchemaError(join(path, "horizon_min"), "must be > 0");
    return run;
}

PqRun parse_pq(const json& obj, const std::string& path, const std::string& base_dir) {
    check_keys(obj, path,
               {"measurements_csv", "limit_table", "allowed_ratings_kw", "min_soc",
                "enforce_protocol", "trend_ratings_kw"});
    PqRun run;
    const std::string rel = get_str(obj, path, "measurements_csv", "");
    if (rel.empty())
        throw SchemaError(join(path, "measurements_csv"), "required field missing");
    run.measurements_csv =
        (fs::path(rel).is_absolute() ? fs::path(rel) : fs::path(base_dir) / rel).string();

    if (obj.contains("limit_table")) {
        const json& lt = obj.at("limit_table");
        const std::string lpath = join(path, "limit_table");
        if (!lt.is_array() || lt.empty())
            throw SchemaError(lpath, "expected a non-empty array of [bound, limit] pairs");
        run.table.classes.clear();
        for (std::size_t i = 0; i < lt.size(); ++i) {
            const json& row = lt[i];
            const std::string rpath = lpath + "[" + std::to_string(i) + "]";
            if (!row.is_array() || row.size() != 2 || !row[1].is_number())
                throw SchemaError(rpath, "expected [bound-or-null, limit]");
            double bound;
            if (row[0].is_null())
                bound = std::numeric_limits<double>::infinity();  // open-ended top class
            else if (row[0].is_number())
                bound = row[0].get<double>();
            else
                throw SchemaError(rpath, "bound must be a number or null");
            run.table.classes.emplace_back(bound, row[1].get<double>());
        }
        validate_block(run.table, lpath);
    }
    if (obj.contains("allowed_ratings_kw")) {
        const json& ar = obj.at("allowed_ratings_kw");
        if (!ar.is_array())
            throw SchemaError(join(path, "allowed_ratings_kw"), "expected an array");
        run.validation.allowed_ratings_kw.clear();
        for (const auto& v : ar) {
            if (!v.is_number())
                throw SchemaError(join(path, "allowed_ratings_kw"), "expected numbers");
            run.validation.allowed_ratings_kw.push_back(v.get<double>());
        }
    }
    run.validation.min_soc = get_num(obj, path, "min_soc", run.validation.min_soc);
    run.validation.enforce_protocol =
        get_bool(obj, path, "enforce_protocol", run.validation.enforce_protocol);
    if (obj.contains("trend_ratings_kw")) {
        const json& tr = obj.at("trend_ratings_kw");
        if (!tr.is_array())
            throw SchemaError(join(path, "trend_ratings_kw"), "expected an array");
        for (const auto& v : tr) {
            if (!v.is_number())
                throw SchemaError(join(path, "trend_ratings_kw"), "expected numbers");
            run.trend_ratings_kw.push_back(v.get<double>());
        }
    }
    return run;
}

}  // namespace

// ---------------------------------------------------------------------------
// config entry points
// ---------------------------------------------------------------------------

ScenarioConfig parse_config_json(const json& doc, const std::string& base_dir) {
    check_keys(doc, "", {"kind", "seed", "output_dir", "mc", "route", "swap", "pq"});

    const std::string kind_str = get_str(doc, "", "kind", "");
    if (kind_str.empty()) throw SchemaError("kind", "required field missing");

    ScenarioConfig config;
    if (kind_str == "mc")
        config.kind = ScenarioKind::mc;
    else if (kind_str == "route")
        config.kind = ScenarioKind::route;
    else if (kind_str == "swap")
        config.kind = ScenarioKind::swap;
    else if (kind_str == "pq")
        config.kind = ScenarioKind::pq;
    else
        throw SchemaError("kind", "expected one of mc/route/swap/pq, got '" + kind_str + "'");

    int blocks = 0;
    for (const char* k : {"mc", "route", "swap", "pq"})
        if (doc.contains(k)) ++blocks;
    if (blocks != 1)
        throw SchemaError("", "exactly one of the mc/route/swap/pq blocks must be present");
    if (!doc.contains(kind_str))
        throw SchemaError(kind_str, "kind is '" + kind_str + "' but that block is missing");

    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                       s.get<std::int64_t>() < 0))
            throw SchemaError("seed", "expected a non-negative integer");
        config.seed = s.get<std::uint64_t>();
    }
    config.output_dir = get_str(doc, "", "output_dir", "");

    switch (config.kind) {
        case ScenarioKind::mc:
            config.mc = parse_mc(doc.at("mc"), "mc");
            config.mc->scenario.seed = config.seed;
            break;
        case ScenarioKind::route:
            config.route = parse_route(doc.at("route"), "route");
            break;
        case ScenarioKind::swap:
            config.swap = parse_swap(doc.at("swap"), "swap");
            break;
        case ScenarioKind::pq:
            config.pq = parse_pq(doc.at("pq"), "pq", base_dir);
            break;
    }

    config.canonical = doc;
    config.canonical["seed"] = config.seed;
    return config;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path, std::string("not valid JSON: ") + e.what());
    }
    return parse_config_json(doc, fs::path(path).parent_path().string());
}

void apply_seed(ScenarioConfig& config, std::uint64_t seed) {
    config.seed = seed;
    config.canonical["seed"] = seed;
    if (config.mc) config.mc->scenario.seed = seed;
}

std::string config_hash_hex(const json& canonical) {
    const std::string text = canonical.dump();  // object keys are sorted
    std::uint64_t h = 0xcbf29ce484222325ull;    // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

void emit_histogram(const std::vector<double>& samples, int bins, std::ostream& out) {
    const Histogram h = make_histogram(samples, bins);
    out << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        CsvRow row(out);
        row.cell(h.bin_left(i)).cell(h.bin_right(i)).cell(h.counts[i]);
        row.end();
    }
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name,
                          std::vector<std::string>& outputs) {
    const fs::path full = dir / name;
    std::ofstream out(full);
    if (!out) throw IoError("cannot write output file: " + full.string());
    outputs.push_back(name);
    return out;
}

json histogram_json(const Histogram& h) {
    return json{{"lo_gwh", h.lo}, {"hi_gwh", h.hi}, {"counts", h.counts}};
}

void run_mc(const McRun& mc, const fs::path& dir, std::vector<std::string>& outputs) {
    const DemandDistribution dist =
        run_fleet_mc(mc.scenario, mc.threads, mc.histogram_bins);

    auto samples = open_output(dir, "mc_samples.csv", outputs);
    samples << "iteration,fleet_demand_gwh\n";
    for (std::size_t i = 0; i < dist.samples_gwh.size(); ++i) {
        CsvRow row(samples);
        row.cell(static_cast<std::int64_t>(i)).cell(dist.samples_gwh[i]);
        row.end();
    }

    auto hist = open_output(dir, "mc_histogram.csv", outputs);
    emit_histogram(dist.samples_gwh, mc.histogram_bins, hist);

    const FleetScenario& s = mc.scenario;
    json summary{
        {"iterations", s.iterations},
        {"fleet_size", s.fleet_size},
        {"loss_low", s.loss_low},
        {"loss_high", s.loss_high},
        {"mean_gwh", dist.mean_gwh},
        {"std_gwh", dist.std_gwh},
        {"p5_gwh", dist.p5_gwh},
        {"p50_gwh", dist.p50_gwh},
        {"p95_gwh", dist.p95_gwh},
        {"baseline_gwh",
         s.base_demand_kwh() * static_cast<double>(s.fleet_size) * 1e-6},
        {"closed_form_mean_gwh", closed_form_mean_gwh(s)},
        {"histogram", histogram_json(dist.histogram)},
    };
    auto out = open_output(dir, "mc_summary.json", outputs);
    out << summary.dump(2) << '\n';
}

void run_route(const RouteRun& rr, const fs::path& dir, std::vector<std::string>& outputs) {
    const ServiceTrace trace = simulate_service_day(rr.route, rr.bus, rr.ambient_f, rr.policy,
                                                    rr.horizon_min, rr.step_min, rr.thermal);

    auto tc = open_output(dir, "route_trace.csv", outputs);
    tc << "minute,soc,mode,power_kw\n";
    for (const TraceSample& s : trace.timeline) {
        CsvRow row(tc);
        row.cell(s.minute).cell(s.soc).cell(std::string(to_string(s.mode))).cell(s.power_kw);
        row.end();
    }

    json summary{
        {"ambient_f", rr.ambient_f},
        {"consumption_rate_kw", consumption_rate_kw(rr.bus, rr.ambient_f)},
        {"runtime_to_floor_min",
         trace.runtime_to_floor_min ? json(*trace.runtime_to_floor_min) : json(nullptr)},
        {"depleted_at_min",
         trace.depleted_at_min ? json(*trace.depleted_at_min) : json(nullptr)},
        {"energy_consumed_kwh", trace.energy_consumed_kwh},
        {"energy_charged_kwh", trace.energy_charged_kwh},
        {"initial_soc", trace.initial_soc},
        {"final_soc", trace.final_soc},
    };
    if (rr.depot) {
        BusConfig night_bus = rr.bus;
        night_bus.battery.soc = trace.final_soc;
        night_bus.battery.pack_temp_f = rr.ambient_f;
        const DepotChargeResult depot =
            depot_deep_charge(night_bus, rr.depot->charger_kw, rr.ambient_f,
                              rr.depot->available_min, rr.policy, rr.thermal, rr.step_min);
        summary["depot"] = json{{"charger_kw", rr.depot->charger_kw},
                                {"available_min", rr.depot->available_min},
                                {"energy_kwh", depot.energy_kwh},
                                {"final_soc", depot.state.soc},
                                {"fully_recovered", depot.fully_recovered},
                                {"minutes_charging", depot.minutes_charging}};
    }
    auto out = open_output(dir, "route_summary.json", outputs);
    out << summary.dump(2) << '\n';
}

void run_swap(const SwapRun& sr, const fs::path& dir, std::vector<std::string>& outputs) {
    const StationDayResult res = simulate_station_day(sr.station, sr.arrivals_min, sr.tariff,
                                                      sr.horizon_min, sr.options);

    auto events = open_output(dir, "swap_events.csv", outputs);
    events << "arrival_min,wait_min,served\n";
    for (const SwapEvent& ev : res.log.events) {
        CsvRow row(events);
        row.cell(ev.arrival_min).cell(ev.wait_min).cell(std::string(ev.served ? "1" : "0"));
        row.end();
    }

    auto power = open_output(dir, "swap_power.csv", outputs);
    power << "minute,power_kw\n";
    for (const RackMinute& rm : res.minutes) {
        CsvRow row(power);
        row.cell(rm.minute).cell(rm.power_kw);
        row.end();
    }

    double wait_sum = 0.0, wait_max = 0.0;
    for (const SwapEvent& ev : res.log.events) {
        if (!ev.served) continue;
        wait_sum += ev.wait_min;
        wait_max = std::max(wait_max, ev.wait_min);
    }
    const double diverted =
        diverted_energy_kwh_per_day(sr.station, sr.diverted_fraction);
    const TouSavings tou =
        tou_savings(diverted, sr.tariff.offpeak_discount_usd_per_kwh);
    const DowntimeReport downtime =
        swap_vs_plug_downtime(sr.station, sr.dc_fast_range_min.first,
                              sr.dc_fast_range_min.second, sr.vehicles_per_day);

    json summary{
        {"served", res.served},
        {"unserved", res.unserved},
        {"mean_wait_min", res.served > 0 ? wait_sum / res.served : 0.0},
        {"max_wait_min", wait_max},
        {"energy_kwh", res.energy_kwh},
        {"offpeak_energy_kwh", res.offpeak_energy_kwh},
        {"cost_usd", res.cost_usd},
        {"charge_minutes", res.charge_minutes},
        {"charge_temp_min_f", res.charge_temp_min_f},
        {"charge_temp_max_f", res.charge_temp_max_f},
        {"tou",
         json{{"diverted_fraction", sr.diverted_fraction},
              {"diverted_kwh_per_day", diverted},
              {"daily_usd", tou.daily_usd},
              {"annual_usd", tou.annual_usd}}},
        {"downtime",
         json{{"swap_min", downtime.swap_min},
              {"dc_fast_low_min", downtime.dc_fast_low_min},
              {"dc_fast_high_min", downtime.dc_fast_high_min},
              {"saving_low_min", downtime.saving_low_min},
              {"saving_high_min", downtime.saving_high_min},
              {"saving_mid_min", downtime.saving_mid_min},
              {"vehicles_per_day", downtime.vehicles_per_day},
              {"fleet_saving_mid_min", downtime.fleet_saving_mid_min}}},
    };
    auto out = open_output(dir, "swap_summary.json", outputs);
    out << summary.dump(2) << '\n';
}

void run_pq(const PqRun& pr, const fs::path& dir, std::vector<std::string>& outputs) {
    const auto records = load_measurements(pr.measurements_csv, pr.validation);
    const ComplianceReport report = check_compliance(records, pr.table);

    json groups = json::array();
    for (const GroupResult& g : report.groups)
        groups.push_back(json{{"charger_kw", g.charger_kw},
                              {"ambient_f", g.ambient_f},
                              {"pass", g.pass},
                              {"fail", g.fail}});
    json fails = json::array();
    for (const Violation& v : report.fails)
        fails.push_back(json{{"record_index", v.record_index},
                             {"charger_kw", v.charger_kw},
                             {"ambient_f", v.ambient_f},
                             {"thd_i_pct", v.thd_i_pct},
                             {"limit_pct", v.limit_pct},
                             {"isc_il_ratio", v.isc_il_ratio}});

    std::vector<double> ratings = pr.trend_ratings_kw;
    const bool explicit_ratings = !ratings.empty();
    if (!explicit_ratings) {
        for (const ThdMeasurement& m : records)
            if (std::find(ratings.begin(), ratings.end(), m.charger_kw) == ratings.end())
                ratings.push_back(m.charger_kw);
        std::sort(ratings.begin(), ratings.end());
    }
    json trends = json::array();
    for (double rating : ratings) {
        try {
            const TrendResult t = thd_trend(records, rating);
            trends.push_back(json{{"charger_kw", rating},
                                  {"slope_pct_per_f", t.slope_pct_per_f},
                                  {"intercept_pct", t.intercept_pct},
                                  {"n", t.n},
                                  {"cold_increasing", t.cold_increasing}});
        } catch (const InsufficientData&) {
            if (explicit_ratings) throw;  // the caller asked for this rating
        }
    }

    json out_doc{{"records", records.size()},
                 {"total_pass", report.total_pass},
                 {"total_fail", report.total_fail},
                 {"groups", groups},
                 {"fails", fails},
                 {"trends", trends}};
    auto out = open_output(dir, "pq_report.json", outputs);
    out << out_doc.dump(2) << '\n';
}

}  // namespace

RunManifest run(const ScenarioConfig& config, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    RunManifest manifest;
    manifest.config_hash = config_hash_hex(config.canonical);
    manifest.seed = config.seed;
    manifest.version = kVersion;

    switch (config.kind) {
        case ScenarioKind::mc: run_mc(*config.mc, dir, manifest.outputs); break;
        case ScenarioKind::route: run_route(*config.route, dir, manifest.outputs); break;
        case ScenarioKind::swap: run_swap(*config.swap, dir, manifest.outputs); break;
        case ScenarioKind::pq: run_pq(*config.pq, dir, manifest.outputs); break;
    }

    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // The manifest records run metadata (wall time varies run to run); the
    // simulation outputs above are the deterministic surface.
    json mj{{"config_hash", manifest.config_hash},
            {"seed", manifest.seed},
            {"version", manifest.version},
            {"wall_time_s", manifest.wall_time_s},
            {"outputs", manifest.outputs}};
    std::vector<std::string> sink;
    auto mf = open_output(dir, "manifest.json", sink);
    mf << mj.dump(2) << '\n';

    return manifest;
}

}  // namespace coldfleet
