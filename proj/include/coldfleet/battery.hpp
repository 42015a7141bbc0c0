#ifndef COLDFLEET_BATTERY_HPP
#define COLDFLEET_BATTERY_HPP

#include <utility>
#include <vector>

#include "coldfleet/errors.hpp"

namespace coldfleet {

// Lithium-ion pack state. All charging and discharging math operates on this
// value type. SoC is a fraction of the effective (health-faded) capacity.
struct BatteryState {
    double capacity_kwh = 400.0;  // nominal pack capacity
    double soc = 1.0;
    double soh = 1.0;
    double pack_temp_f = 70.0;

    double effective_capacity_kwh() const { return capacity_kwh * soh; }
};

// Temperature behavior of the pack: internal-resistance growth toward cold
// and the cold-weather ceiling on attainable SoC. The resistance curve is
// linear in temperature between the two anchors and clamped outside; the
// default anchors place a 5x resistance rise between 113 F and 10 F.
//
// The ceiling limits what charging can reach at a given temperature. A pack
// charged warm keeps its SoC when carried into the cold; the ceiling only
// gates further charge acceptance.
struct ThermalModel {
    std::pair<double, double> resistance_anchor_hot{113.0, 1.0};   // (temp F, multiplier)
    std::pair<double, double> resistance_anchor_cold{10.0, 5.0};   // (temp F, multiplier)
    std::vector<std::pair<double, double>> ceiling_breakpoints{
        {-25.0, 0.80}, {-10.0, 0.85}, {10.0, 1.00}};               // (temp F, max soc)
    double charge_derate_exponent = 1.0;
};

// Charge-rate policy. max_c_rate is the per-hour fraction of effective
// capacity (0.5 = C/2). Acceptance tapers linearly from full at
// taper_knee_soc to zero at the temperature ceiling.
struct ChargePolicy {
    double max_c_rate = 0.5;
    double taper_knee_soc = 0.8;
    double target_soc = 1.0;
};

// Cycle fade model. Fade per cycle is interpolated in temperature between the
// two reference points and scaled by dod^dod_exponent. Charging under
// controlled conditions (slow rate, thermally managed) divides the fade by
// the longevity factor.
struct DegradationModel {
    double base_fade_per_cycle = 0.00005;  // at base_ref_temp_f
    double cold_fade_per_cycle = 0.0002;   // at cold_ref_temp_f
    double base_ref_temp_f = 70.0;
    double cold_ref_temp_f = -10.0;
    double dod_exponent = 1.0;
    double controlled_charging_longevity_factor = 1.3;
};

enum class HeaterType { resistive, heat_pump };

// Cabin/auxiliary heating demand. Resistive draw ramps linearly with the
// temperature deficit below the setpoint, saturating at max_heater_power_kw
// once the deficit reaches full_power_deficit_f. A heat pump divides that
// demand by its COP, which falls linearly toward 1 at the effective floor and
// stays 1 below it (no advantage over resistive in deep cold).
struct AuxLoadModel {
    HeaterType heater_type = HeaterType::resistive;
    double cabin_setpoint_f = 70.0;
    double max_heater_power_kw = 10.0;
    double heat_pump_effective_floor_f = 10.0;
    double full_power_deficit_f = 90.0;
    double cop_gain_per_f = 0.05;
};

void validate(const BatteryState& state);
void validate(const ThermalModel& model);
void validate(const ChargePolicy& policy);
void validate(const DegradationModel& model);
void validate(const AuxLoadModel& model);

// Internal-resistance multiplier at the given temperature (>= 1, hot anchor
// defines the 1.0 reference).
double resistance_factor(const ThermalModel& model, double temp_f);

// Maximum attainable SoC at the given temperature.
double soc_ceiling(const ThermalModel& model, double temp_f);

// Power the pack accepts right now from a charger of the given rating, kW.
// min(charger, C-rate limit derated by resistance) times the taper; zero at
// or above the ceiling. Uses state.pack_temp_f.
double charge_power_accepted(const BatteryState& state, const ChargePolicy& policy,
                             const ThermalModel& thermal, double charger_rated_kw);

struct ChargeResult {
    BatteryState state;
    double energy_delivered_kwh = 0.0;
    double minutes_charging = 0.0;  // time spent with nonzero acceptance
};

// Explicit time-stepped charge at ambient_f for up to duration_min minutes.
// Stops early once SoC reaches min(policy.target_soc, ceiling). Energy
// bookkeeping is exact: energy = effective capacity * (soc_after - soc_before).
ChargeResult simulate_charge(BatteryState state, const ChargePolicy& policy,
                             const ThermalModel& thermal, double charger_rated_kw,
                             double duration_min, double ambient_f, double step_min);

// Applies `cycles` cycles of fade at depth `dod` and temperature temp_f.
// Throws SohExhausted if the health would reach zero.
BatteryState apply_cycle_degradation(BatteryState state, const DegradationModel& model,
                                     double dod, double temp_f, double cycles,
                                     bool controlled);

// Auxiliary (heating) electrical draw at the given ambient temperature, kW.
double aux_load_kw(const AuxLoadModel& model, double ambient_f);

}  // namespace coldfleet

#endif  // COLDFLEET_BATTERY_HPP
