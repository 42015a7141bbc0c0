#ifndef COLDFLEET_ROUTE_HPP
#define COLDFLEET_ROUTE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coldfleet/battery.hpp"

namespace coldfleet {

struct Stop {
    std::string name;
    double dwell_min = 0.0;
    std::optional<double> charger_kw;  // on-route fast charger, if installed
};

struct Leg {
    double miles = 0.0;
    double minutes = 0.0;
};

// Fixed service pattern: stop[i] is followed by leg[i]. A loop has as many
// legs as stops (the last leg returns to stop 0); an open route has one leg
// fewer and the day ends at the final stop.
struct Route {
    std::vector<Stop> stops;
    std::vector<Leg> legs;
    bool loop = true;
};

// Transit bus parameters. base_draw_kw is the electrical draw at the warm
// reference temperature; the cold multiplier curve scales it as temperature
// falls. When an AuxLoadModel is supplied, base_draw_kw is the traction-only
// share and the heater adds on top (see calibrate_to_runtimes).
//
// Defaults encode a 400 kWh bus that runs 270 minutes to its 40% floor at
// 70 F and 90 minutes at -10 F.
struct BusConfig {
    BatteryState battery{400.0, 1.0, 1.0, 70.0};
    double base_draw_kw = 240.0 / 4.5;
    std::vector<std::pair<double, double>> cold_multiplier_curve{{-10.0, 3.0}, {70.0, 1.0}};
    double soc_floor = 0.40;
    double opportunity_target = 0.85;
    std::optional<AuxLoadModel> aux;
};

void validate(const Route& route);
void validate(const BusConfig& bus);

enum class TraceMode { driving, dwelling, charging, depleted };

const char* to_string(TraceMode mode);

struct TraceSample {
    double minute = 0.0;  // wall-clock minute at the end of the step
    double soc = 0.0;
    TraceMode mode = TraceMode::driving;
    double power_kw = 0.0;  // battery power: >0 charging, <0 discharging
};

struct ServiceTrace {
    std::vector<TraceSample> timeline;
    // Cumulative driving minutes when the floor was hit; empty if the bus
    // survived the horizon (or the route ended first).
    std::optional<double> runtime_to_floor_min;
    std::optional<double> depleted_at_min;  // wall-clock minute of depletion
    double energy_consumed_kwh = 0.0;
    double energy_charged_kwh = 0.0;
    double initial_soc = 0.0;
    double final_soc = 0.0;
    double effective_capacity_kwh = 0.0;
};

// Total electrical draw while driving at the given temperature, kW.
double consumption_rate_kw(const BusConfig& bus, double temp_f);

// Minutes of continuous driving (no charging) from start_soc down to the SoC
// floor, resolved by explicit time-stepping with exact crossing interpolation.
double runtime_to_floor_min(const BusConfig& bus, double temp_f, double start_soc,
                            double step_min = 0.5);

// Runs one service day: legs discharge at consumption_rate_kw, dwells charge
// through simulate_charge whenever a charger is present and SoC is below the
// opportunity target (departure always preempts charging). Hitting the floor
// mid-leg ends the trace in the depleted state.
ServiceTrace simulate_service_day(const Route& route, const BusConfig& bus, double temp_f,
                                  const ChargePolicy& policy, double horizon_min,
                                  double step_min = 0.5,
                                  const ThermalModel& thermal = ThermalModel{});

struct DepotChargeResult {
    BatteryState state;
    double energy_kwh = 0.0;
    bool fully_recovered = false;  // within recovery_tol of the reachable target
    double minutes_charging = 0.0;
};

// Overnight depot charge toward the temperature ceiling. `recovery_tol` is
// the SoC shortfall still counted as a full recovery (the taper approaches
// the ceiling asymptotically, so exact equality is unreachable).
DepotChargeResult depot_deep_charge(const BusConfig& bus, double depot_charger_kw,
                                    double temp_f, double available_min,
                                    const ChargePolicy& policy = ChargePolicy{},
                                    const ThermalModel& thermal = ThermalModel{},
                                    double step_min = 0.5, double recovery_tol = 0.01);

// Refits base_draw_kw and the cold multiplier anchor so that the bus hits the
// two runtime anchors (start SoC 1.0 to the floor) including any aux load.
// Keeps the anchors authoritative when an AuxLoadModel is added.
BusConfig calibrate_to_runtimes(BusConfig bus, double warm_temp_f, double warm_runtime_min,
                                double cold_temp_f, double cold_runtime_min);

}  // namespace coldfleet

#endif  // COLDFLEET_ROUTE_HPP
