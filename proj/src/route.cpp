#include "coldfleet/route.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coldfleet/curve.hpp"

namespace coldfleet {

namespace {
constexpr double kTimeEps = 1e-9;  // minutes; guards against zero-length steps
}

void validate(const Route& route) {
    if (route.stops.empty()) throw InvalidParameter("route needs at least one stop");
    const std::size_t want_legs = route.loop ? route.stops.size() : route.stops.size() - 1;
    if (route.legs.size() != want_legs)
        throw InvalidParameter("route needs " + std::to_string(want_legs) + " legs, got " +
                               std::to_string(route.legs.size()));
    for (const auto& stop : route.stops) {
        if (stop.dwell_min < 0.0) throw InvalidParameter("dwell must be >= 0 minutes");
        if (stop.charger_kw && !(*stop.charger_kw > 0.0))
            throw InvalidParameter("charger rating must be > 0 kW when present");
    }
    for (const auto& leg : route.legs) {
        if (!(leg.miles > 0.0)) throw InvalidParameter("leg distance must be > 0 miles");
        if (!(leg.minutes > 0.0)) throw InvalidParameter("leg duration must be > 0 minutes");
    }
}

void validate(const BusConfig& bus) {
    validate(bus.battery);
    if (!(bus.base_draw_kw > 0.0)) throw InvalidParameter("base_draw_kw must be > 0");
    if (!(bus.soc_floor > 0.0 && bus.soc_floor < bus.opportunity_target &&
          bus.opportunity_target <= 1.0))
        throw InvalidParameter("require 0 < soc_floor < opportunity_target <= 1");
    if (bus.cold_multiplier_curve.empty())
        throw InvalidParameter("cold_multiplier_curve must not be empty");
    const PiecewiseLinear curve(bus.cold_multiplier_curve);  // checks ordering
    const auto& pts = curve.points();
    if (pts.back().second != 1.0)
        throw InvalidParameter("warmest multiplier breakpoint must be 1.0 (the reference)");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].second >= 1.0))
            throw InvalidParameter("cold multipliers must be >= 1");
        if (i > 0 && pts[i].second > pts[i - 1].second)
            throw InvalidParameter("cold multipliers must not increase with temperature");
    }
    if (bus.aux) validate(*bus.aux);
}

const char* to_string(TraceMode mode) {
    switch (mode) {
        case TraceMode::driving: return "driving";
        case TraceMode::dwelling: return "dwelling";
        case TraceMode::charging: return "charging";
        case TraceMode::depleted: return "depleted";
    }
    return "unknown";
}

double consumption_rate_kw(const BusConfig& bus, double temp_f) {
    const PiecewiseLinear multiplier(bus.cold_multiplier_curve);
    double kw = bus.base_draw_kw * multiplier(temp_f);
    if (bus.aux) kw += aux_load_kw(*bus.aux, temp_f);
    return kw;
}

double runtime_to_floor_min(const BusConfig& bus, double temp_f, double start_soc,
                            double step_min) {
    validate(bus);
    if (!(step_min > 0.0)) throw NonPositiveStep();
    if (!(start_soc > bus.soc_floor)) throw StartBelowFloor();

    const double eff_cap = bus.battery.effective_capacity_kwh();
    const double rate_kw = consumption_rate_kw(bus, temp_f);
    double soc = start_soc;
    double minutes = 0.0;
    while (true) {
        const double dsoc = rate_kw * (step_min / 60.0) / eff_cap;
        if (soc - dsoc <= bus.soc_floor)
            return minutes + (soc - bus.soc_floor) / dsoc * step_min;
        soc -= dsoc;
        minutes += step_min;
    }
}

ServiceTrace simulate_service_day(const Route& route, const BusConfig& bus, double temp_f,
                                  const ChargePolicy& policy, double horizon_min,
                                  double step_min, const ThermalModel& thermal) {
    validate(route);
    validate(bus);
    validate(thermal);
    if (!(step_min > 0.0)) throw NonPositiveStep();
    if (!(horizon_min > 0.0)) throw InvalidParameter("horizon must be > 0 minutes");

    BatteryState state = bus.battery;
    state.pack_temp_f = temp_f;
    const double eff_cap = state.effective_capacity_kwh();
    const double rate_kw = consumption_rate_kw(bus, temp_f);
    const double usable_kwh = eff_cap * (1.0 - bus.soc_floor);
    for (std::size_t i = 0; i < route.legs.size(); ++i) {
        const double leg_kwh = rate_kw * route.legs[i].minutes / 60.0;
        if (leg_kwh > usable_kwh)
            throw InfeasibleRoute("leg " + std::to_string(i) + " needs " +
                                  std::to_string(leg_kwh) + " kWh, above the usable " +
                                  std::to_string(usable_kwh) + " kWh");
    }

    // Dwell charging stops at the bus's opportunity target even if the policy
    // would allow more; departure preempts both.
    ChargePolicy dwell_policy = policy;
    dwell_policy.target_soc = std::min(policy.target_soc, bus.opportunity_target);

    ServiceTrace trace;
    trace.initial_soc = state.soc;
    trace.effective_capacity_kwh = eff_cap;
    trace.timeline.push_back({0.0, state.soc, TraceMode::dwelling, 0.0});

    double t = 0.0;
    double driving_min = 0.0;
    double consumed_kwh = 0.0;
    double charged_kwh = 0.0;
    std::size_t stop_idx = 0;
    const std::size_t n_stops = route.stops.size();
    bool ended = false;

    while (!ended && t < horizon_min - kTimeEps) {
        const Stop& stop = route.stops[stop_idx];

        double dwell_left = stop.dwell_min;
        while (dwell_left > kTimeEps && t < horizon_min - kTimeEps) {
            const double dt = std::min({step_min, dwell_left, horizon_min - t});
            double delivered = 0.0;
            if (stop.charger_kw && state.soc < dwell_policy.target_soc) {
                ChargeResult r =
                    simulate_charge(state, dwell_policy, thermal, *stop.charger_kw, dt, temp_f, dt);
                delivered = r.energy_delivered_kwh;
                state = r.state;
                charged_kwh += delivered;
            }
            t += dt;
            dwell_left -= dt;
            trace.timeline.push_back({t, state.soc,
                                      delivered > 0.0 ? TraceMode::charging : TraceMode::dwelling,
                                      delivered * 60.0 / dt});
        }
        if (t >= horizon_min - kTimeEps) break;

        if (!route.loop && stop_idx == n_stops - 1) break;  // open route: day ends here

        const Leg& leg = route.legs[stop_idx];
        double leg_left = leg.minutes;
        while (leg_left > kTimeEps && t < horizon_min - kTimeEps) {
            const double dt = std::min({step_min, leg_left, horizon_min - t});
            const double dsoc = rate_kw * (dt / 60.0) / eff_cap;
            if (state.soc - dsoc <= bus.soc_floor) {
                const double frac = (state.soc - bus.soc_floor) / dsoc;
                consumed_kwh += eff_cap * (state.soc - bus.soc_floor);
                state.soc = bus.soc_floor;
                t += frac * dt;
                driving_min += frac * dt;
                trace.runtime_to_floor_min = driving_min;
                trace.depleted_at_min = t;
                trace.timeline.push_back({t, state.soc, TraceMode::depleted, 0.0});
                ended = true;
                break;
            }
            state.soc -= dsoc;
            consumed_kwh += eff_cap * dsoc;
            t += dt;
            driving_min += dt;
            leg_left -= dt;
            trace.timeline.push_back({t, state.soc, TraceMode::driving, -rate_kw});
        }

        stop_idx = (stop_idx + 1) % n_stops;
    }

    trace.final_soc = state.soc;
    trace.energy_consumed_kwh = consumed_kwh;
    trace.energy_charged_kwh = charged_kwh;
    return trace;
}

DepotChargeResult depot_deep_charge(const BusConfig& bus, double depot_charger_kw,
                                    double temp_f, double available_min,
                                    const ChargePolicy& policy, const ThermalModel& thermal,
                                    double step_min, double recovery_tol) {
    validate(bus);
    if (available_min < 0.0) throw InvalidParameter("available minutes must be >= 0");

    // Depot charging aims for a full pack; the temperature ceiling is the
    // binding limit in the cold.
    ChargePolicy depot_policy = policy;
    depot_policy.target_soc = 1.0;

    BatteryState state = bus.battery;
    ChargeResult r =
        simulate_charge(state, depot_policy, thermal, depot_charger_kw, available_min, temp_f,
                        step_min);

    const double reachable = std::min(1.0, soc_ceiling(thermal, temp_f));
    DepotChargeResult out;
    out.state = r.state;
    out.energy_kwh = r.energy_delivered_kwh;
    out.minutes_charging = r.minutes_charging;
    out.fully_recovered = r.state.soc >= reachable - recovery_tol;
    return out;
}

BusConfig calibrate_to_runtimes(BusConfig bus, double warm_temp_f, double warm_runtime_min,
                                double cold_temp_f, double cold_runtime_min) {
    if (!(warm_runtime_min > 0.0 && cold_runtime_min > 0.0))
        throw InvalidParameter("runtime anchors must be > 0 minutes");
    if (!(cold_temp_f < warm_temp_f))
        throw InvalidParameter("cold anchor must be below the warm anchor temperature");

    const double usable_kwh = bus.battery.effective_capacity_kwh() * (1.0 - bus.soc_floor);
    const double total_warm_kw = usable_kwh / (warm_runtime_min / 60.0);
    const double total_cold_kw = usable_kwh / (cold_runtime_min / 60.0);
    const double aux_warm_kw = bus.aux ? aux_load_kw(*bus.aux, warm_temp_f) : 0.0;
    const double aux_cold_kw = bus.aux ? aux_load_kw(*bus.aux, cold_temp_f) : 0.0;

    const double base_kw = total_warm_kw - aux_warm_kw;
    if (!(base_kw > 0.0))
        throw InvalidParameter("aux load exceeds the warm-anchor total draw");
    const double cold_multiplier = (total_cold_kw - aux_cold_kw) / base_kw;
    if (!(cold_multiplier >= 1.0))
        throw InvalidParameter("anchors imply a cold multiplier below 1; check the aux model");

    bus.base_draw_kw = base_kw;
    bus.cold_multiplier_curve = {{cold_temp_f, cold_multiplier}, {warm_temp_f, 1.0}};
    return bus;
}

}  // namespace coldfleet
