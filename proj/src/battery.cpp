#include "coldfleet/battery.hpp"

#include <algorithm>
#include <cmath>

#include "coldfleet/curve.hpp"

namespace coldfleet {

void validate(const BatteryState& state) {
    if (!(state.capacity_kwh > 0.0))
        throw InvalidParameter("battery capacity must be > 0 kWh");
    if (!(state.soc >= 0.0 && state.soc <= 1.0))
        throw InvalidParameter("soc must be in [0,1]");
    if (!(state.soh > 0.0 && state.soh <= 1.0))
        throw InvalidParameter("soh must be in (0,1]");
}

void validate(const ThermalModel& model) {
    const auto& [hot_t, hot_m] = model.resistance_anchor_hot;
    const auto& [cold_t, cold_m] = model.resistance_anchor_cold;
    if (!(cold_t < hot_t))
        throw InvalidParameter("cold resistance anchor must be below the hot anchor temperature");
    if (hot_m != 1.0)
        throw InvalidParameter("resistance multiplier at the hot anchor must be 1.0");
    if (!(cold_m >= hot_m))
        throw InvalidParameter("resistance multiplier must not decrease toward cold");
    if (model.ceiling_breakpoints.empty())
        throw InvalidParameter("ceiling_breakpoints must not be empty");
    for (std::size_t i = 0; i < model.ceiling_breakpoints.size(); ++i) {
        const auto& [t, c] = model.ceiling_breakpoints[i];
        if (!(c > 0.0 && c <= 1.0))
            throw InvalidParameter("soc ceilings must be in (0,1]");
        if (i > 0) {
            if (!(model.ceiling_breakpoints[i - 1].first < t))
                throw InvalidParameter("ceiling breakpoint temperatures must be strictly increasing");
            if (model.ceiling_breakpoints[i - 1].second > c)
                throw InvalidParameter("soc ceiling must be non-decreasing in temperature");
        }
    }
    if (!(model.charge_derate_exponent >= 0.0))
        throw InvalidParameter("charge_derate_exponent must be >= 0");
}

void validate(const ChargePolicy& policy) {
    if (!(policy.max_c_rate > 0.0))
        throw InvalidParameter("max_c_rate must be > 0");
    if (!(policy.taper_knee_soc > 0.0 && policy.taper_knee_soc < policy.target_soc &&
          policy.target_soc <= 1.0))
        throw InvalidParameter("require 0 < taper_knee_soc < target_soc <= 1");
}

void validate(const DegradationModel& model) {
    if (model.base_fade_per_cycle < 0.0 || model.cold_fade_per_cycle < 0.0)
        throw InvalidParameter("fade rates must be >= 0");
    if (model.cold_fade_per_cycle < model.base_fade_per_cycle)
        throw InvalidParameter("cold fade must be >= base fade");
    if (!(model.cold_ref_temp_f < model.base_ref_temp_f))
        throw InvalidParameter("cold fade reference must be below the base reference temperature");
    if (!(model.controlled_charging_longevity_factor >= 1.0))
        throw InvalidParameter("controlled_charging_longevity_factor must be >= 1");
}

void validate(const AuxLoadModel& model) {
    if (model.max_heater_power_kw < 0.0)
        throw InvalidParameter("max_heater_power_kw must be >= 0");
    if (!(model.full_power_deficit_f > 0.0))
        throw InvalidParameter("full_power_deficit_f must be > 0");
    if (model.cop_gain_per_f < 0.0)
        throw InvalidParameter("cop_gain_per_f must be >= 0");
}

double resistance_factor(const ThermalModel& model, double temp_f) {
    const PiecewiseLinear curve({model.resistance_anchor_cold, model.resistance_anchor_hot});
    return curve(temp_f);
}

double soc_ceiling(const ThermalModel& model, double temp_f) {
    const PiecewiseLinear curve(model.ceiling_breakpoints);
    return curve(temp_f);
}

double charge_power_accepted(const BatteryState& state, const ChargePolicy& policy,
                             const ThermalModel& thermal, double charger_rated_kw) {
    if (charger_rated_kw < 0.0)
        throw InvalidParameter("charger rating must be >= 0 kW");
    const double ceiling = soc_ceiling(thermal, state.pack_temp_f);
    if (state.soc >= ceiling) return 0.0;

    const double r = resistance_factor(thermal, state.pack_temp_f);
    const double c_rate_limit_kw = policy.max_c_rate * state.effective_capacity_kwh() /
                                   std::pow(r, thermal.charge_derate_exponent);

    double taper = 1.0;
    if (state.soc > policy.taper_knee_soc && ceiling > policy.taper_knee_soc)
        taper = (ceiling - state.soc) / (ceiling - policy.taper_knee_soc);

    return std::min(charger_rated_kw, c_rate_limit_kw) * taper;
}

ChargeResult simulate_charge(BatteryState state, const ChargePolicy& policy,
                             const ThermalModel& thermal, double charger_rated_kw,
                             double duration_min, double ambient_f, double step_min) {
    if (!(step_min > 0.0)) throw NonPositiveStep();
    if (duration_min < 0.0)
        throw InvalidParameter("charge duration must be >= 0 minutes");

    state.pack_temp_f = ambient_f;
    const double eff_cap = state.effective_capacity_kwh();
    const double stop_soc = std::min(policy.target_soc, soc_ceiling(thermal, ambient_f));

    ChargeResult result;
    double remaining = duration_min;
    double delivered = 0.0;
    double minutes = 0.0;
    while (remaining > 0.0 && state.soc < stop_soc) {
        const double dt = std::min(step_min, remaining);
        const double power_kw = charge_power_accepted(state, policy, thermal, charger_rated_kw);
        if (power_kw <= 0.0) break;
        double dsoc = power_kw * (dt / 60.0) / eff_cap;
        dsoc = std::min(dsoc, stop_soc - state.soc);
        state.soc += dsoc;
        delivered += eff_cap * dsoc;
        minutes += dt;
        remaining -= dt;
    }

    result.state = state;
    result.energy_delivered_kwh = delivered;
    result.minutes_charging = minutes;
    return result;
}

BatteryState apply_cycle_degradation(BatteryState state, const DegradationModel& model,
                                     double dod, double temp_f, double cycles,
                                     bool controlled) {
    if (!(dod >= 0.0 && dod <= 1.0))
        throw InvalidParameter("dod must be in [0,1]");
    if (cycles < 0.0)
        throw InvalidParameter("cycles must be >= 0");

    const PiecewiseLinear fade_curve({{model.cold_ref_temp_f, model.cold_fade_per_cycle},
                                      {model.base_ref_temp_f, model.base_fade_per_cycle}});
    double fade = fade_curve(temp_f) * std::pow(dod, model.dod_exponent) * cycles;
    if (controlled) fade /= model.controlled_charging_longevity_factor;

    state.soh -= fade;
    if (state.soh <= 0.0) throw SohExhausted();
    return state;
}

double aux_load_kw(const AuxLoadModel& model, double ambient_f) {
    const double deficit = model.cabin_setpoint_f - ambient_f;
    if (deficit <= 0.0) return 0.0;

    const double resistive =
        model.max_heater_power_kw * std::min(1.0, deficit / model.full_power_deficit_f);
    if (model.heater_type == HeaterType::resistive) return resistive;

    double cop = 1.0;
    if (ambient_f > model.heat_pump_effective_floor_f)
        cop += model.cop_gain_per_f * (ambient_f - model.heat_pump_effective_floor_f);
    return resistive / cop;
}

}  // namespace coldfleet
