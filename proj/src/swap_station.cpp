#include "coldfleet/swap_station.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace coldfleet {

void validate(const SwapStation& station) {
    if (station.slots <= 0) throw InvalidParameter("slots must be > 0");
    if (!(station.battery_capacity_kwh > 0.0))
        throw InvalidParameter("battery_capacity_kwh must be > 0");
    if (!(station.swap_duration_min > 0.0))
        throw InvalidParameter("swap_duration_min must be > 0");
    if (station.bays <= 0) throw InvalidParameter("bays must be > 0");
    if (!(station.slot_charger_kw > 0.0))
        throw InvalidParameter("slot_charger_kw must be > 0");
    validate(station.charge_policy);
    if (station.thermal_control) {
        if (!(station.thermal_window_f.first <= station.thermal_window_f.second))
            throw InvalidParameter("thermal window must satisfy lo <= hi");
        if (station.station_temp_f < station.thermal_window_f.first ||
            station.station_temp_f > station.thermal_window_f.second)
            throw InvalidParameter("station_temp_f outside the controlled thermal window");
    }
}

void validate(const Tariff& tariff) {
    if (!(tariff.offpeak_discount_usd_per_kwh >= 0.0 &&
          tariff.offpeak_discount_usd_per_kwh <= tariff.base_rate_usd_per_kwh))
        throw InvalidParameter("require 0 <= offpeak discount <= base rate");
    if (tariff.offpeak_start_min < 0.0 || tariff.offpeak_start_min >= 1440.0 ||
        tariff.offpeak_end_min < 0.0 || tariff.offpeak_end_min > 1440.0)
        throw InvalidParameter("off-peak window bounds must lie within one day");
}

bool in_offpeak(const Tariff& tariff, double minute) {
    const double md = std::fmod(minute, 1440.0);
    const double s = tariff.offpeak_start_min;
    const double e = tariff.offpeak_end_min;
    if (s == e) return false;
    if (s < e) return md >= s && md < e;
    return md >= s || md < e;  // window wraps midnight
}

TouSavings tou_savings(double diverted_kwh_per_day, double discount_usd_per_kwh) {
    if (diverted_kwh_per_day < 0.0 || discount_usd_per_kwh < 0.0)
        throw InvalidParameter("tou_savings inputs must be >= 0");
    TouSavings s;
    s.daily_usd = diverted_kwh_per_day * discount_usd_per_kwh;
    s.annual_usd = s.daily_usd * 365.0;
    return s;
}

double diverted_energy_kwh_per_day(const SwapStation& station, double diverted_fraction) {
    if (!(diverted_fraction >= 0.0 && diverted_fraction <= 1.0))
        throw InvalidParameter("diverted fraction must be in [0,1]");
    const double batteries =
        std::floor(static_cast<double>(station.slots) * diverted_fraction + 1e-9);
    return batteries * station.battery_capacity_kwh;
}

int Rack::count() const {
    int n = 0;
    for (const auto& s : slots_)
        if (s) ++n;
    return n;
}

int Rack::ready_count(double ready_soc) const {
    int n = 0;
    for (const auto& s : slots_)
        if (s && !s->waiting_for_offpeak && s->soc >= ready_soc) ++n;
    return n;
}

void Rack::insert(Pack pack) {
    for (auto& s : slots_) {
        if (!s) {
            s = pack;
            return;
        }
    }
    throw NoSlotsFree();
}

std::optional<Rack::Pack> Rack::take_ready(double ready_soc) {
    for (auto& s : slots_) {
        if (s && !s->waiting_for_offpeak && s->soc >= ready_soc) {
            Pack p = *s;
            s.reset();
            return p;
        }
    }
    return std::nullopt;
}

namespace {

// Spreads `fraction` of insertions evenly over the insertion sequence:
// insertion i is deferred iff the running quota crosses an integer.
bool defer_this_insertion(std::int64_t insert_index, double fraction) {
    return std::floor(static_cast<double>(insert_index + 1) * fraction) >
           std::floor(static_cast<double>(insert_index) * fraction);
}

}  // namespace

StationDayResult simulate_station_day(const SwapStation& station,
                                      const std::vector<double>& arrivals_min,
                                      const Tariff& tariff, double horizon_min,
                                      const StationDayOptions& options) {
    validate(station);
    validate(tariff);
    if (!(horizon_min > 0.0)) throw InvalidParameter("horizon must be > 0 minutes");
    if (!(options.arrival_soc >= 0.0 && options.arrival_soc <= 1.0))
        throw InvalidParameter("arrival_soc must be in [0,1]");
    if (!(options.deferral_fraction >= 0.0 && options.deferral_fraction <= 1.0))
        throw InvalidParameter("deferral_fraction must be in [0,1]");
    for (std::size_t i = 0; i < arrivals_min.size(); ++i) {
        if (arrivals_min[i] < 0.0) throw InvalidParameter("arrival minutes must be >= 0");
        if (i > 0 && arrivals_min[i] < arrivals_min[i - 1])
            throw InvalidParameter("arrivals must be sorted ascending");
    }
    validate(options.thermal);

    const double ready_soc = station.charge_policy.target_soc - 1e-9;
    const double initial_soc =
        options.initial_rack_soc < 0.0 ? station.charge_policy.target_soc
                                       : options.initial_rack_soc;

    Rack rack(station.slots);
    for (int i = 0; i < station.slots; ++i) rack.insert({initial_soc, false});

    std::vector<double> bay_busy_until(static_cast<std::size_t>(station.bays), -1.0);

    StationDayResult result;
    result.log.events.assign(arrivals_min.size(), SwapEvent{});
    for (std::size_t i = 0; i < arrivals_min.size(); ++i)
        result.log.events[i].arrival_min = arrivals_min[i];

    std::deque<std::size_t> queue;  // indices into arrivals_min, FIFO
    std::size_t next_arrival = 0;
    std::int64_t inserts = 0;
    bool any_charge = false;

    const int total_minutes = static_cast<int>(std::ceil(horizon_min));
    result.minutes.reserve(static_cast<std::size_t>(total_minutes));

    for (int m = 0; m < total_minutes; ++m) {
        const double minute = static_cast<double>(m);

        // 1. Vehicles whose swap has finished depart with their new pack.
        int in_swap = 0;
        for (auto& busy_until : bay_busy_until) {
            if (busy_until > minute) ++in_swap;
        }

        // 2. New arrivals join the FIFO queue.
        while (next_arrival < arrivals_min.size() && arrivals_min[next_arrival] <= minute) {
            queue.push_back(next_arrival);
            ++next_arrival;
        }

        // 3. Start swaps while a bay is free and a ready pack exists. The
        //    outgoing pack leaves its slot and the returned one takes it.
        for (auto& busy_until : bay_busy_until) {
            if (busy_until > minute) continue;
            if (queue.empty()) break;
            auto ready = rack.take_ready(ready_soc);
            if (!ready) break;
            const std::size_t veh = queue.front();
            queue.pop_front();
            rack.insert({options.arrival_soc,
                         defer_this_insertion(inserts, options.deferral_fraction)});
            ++inserts;
            busy_until = minute + station.swap_duration_min;
            ++in_swap;
            result.log.events[veh].served = true;
            result.log.events[veh].wait_min = minute - arrivals_min[veh];
        }

        // 4. Charge every pack below target; deferred packs wait for the
        //    off-peak window, then charge through to completion.
        const bool offpeak = in_offpeak(tariff, minute);
        double ceiling_left = std::numeric_limits<double>::infinity();
        if (options.curtailment && minute >= options.curtailment->from_min &&
            minute < options.curtailment->to_min)
            ceiling_left = options.curtailment->ceiling_kw;

        double minute_energy_kwh = 0.0;
        int charging_count = 0;
        for (auto& slot : rack.slots()) {
            if (!slot) continue;
            if (slot->waiting_for_offpeak) {
                if (!offpeak) {
                    ++charging_count;  // committed to charge, holding for the window
                    continue;
                }
                slot->waiting_for_offpeak = false;
            }
            if (slot->soc >= ready_soc) continue;
            ++charging_count;

            BatteryState pack{station.battery_capacity_kwh, slot->soc, 1.0,
                              station.station_temp_f};
            double power_kw = charge_power_accepted(pack, station.charge_policy,
                                                    options.thermal, station.slot_charger_kw);
            power_kw = std::min(power_kw, ceiling_left);
            if (power_kw <= 0.0) continue;

            double dsoc = power_kw * (1.0 / 60.0) / station.battery_capacity_kwh;
            dsoc = std::min(dsoc, station.charge_policy.target_soc - slot->soc);
            slot->soc += dsoc;
            const double e = station.battery_capacity_kwh * dsoc;
            minute_energy_kwh += e;
            ceiling_left -= e * 60.0;  // effective power actually drawn

            if (!any_charge) {
                result.charge_temp_min_f = result.charge_temp_max_f = station.station_temp_f;
                any_charge = true;
            } else {
                result.charge_temp_min_f = std::min(result.charge_temp_min_f, station.station_temp_f);
                result.charge_temp_max_f = std::max(result.charge_temp_max_f, station.station_temp_f);
            }
        }
        if (minute_energy_kwh > 0.0) ++result.charge_minutes;

        const double rate = offpeak
                                ? tariff.base_rate_usd_per_kwh - tariff.offpeak_discount_usd_per_kwh
                                : tariff.base_rate_usd_per_kwh;
        result.energy_kwh += minute_energy_kwh;
        if (offpeak) result.offpeak_energy_kwh += minute_energy_kwh;
        result.cost_usd += minute_energy_kwh * rate;

        RackMinute rm;
        rm.minute = minute;
        rm.ready = rack.ready_count(ready_soc);
        rm.charging = charging_count;
        rm.in_swap = in_swap;
        rm.power_kw = minute_energy_kwh * 60.0;
        result.minutes.push_back(rm);
        result.log.batteries_ready_timeline.emplace_back(minute, rm.ready);
    }

    // Vehicles still waiting at the horizon are reported unserved.
    for (std::size_t veh : queue) {
        result.log.events[veh].served = false;
        result.log.events[veh].wait_min = horizon_min - arrivals_min[veh];
    }
    for (const auto& ev : result.log.events)
        ev.served ? ++result.served : ++result.unserved;

    return result;
}

DowntimeReport swap_vs_plug_downtime(const SwapStation& station, double dc_fast_low_min,
                                     double dc_fast_high_min, int vehicles_per_day) {
    if (!(dc_fast_low_min > 0.0 && dc_fast_high_min > 0.0))
        throw InvalidParameter("DC fast durations must be > 0");
    if (dc_fast_low_min > dc_fast_high_min)
        throw InvalidParameter("DC fast range must satisfy low <= high");
    if (vehicles_per_day < 0) throw InvalidParameter("vehicles_per_day must be >= 0");

    DowntimeReport r;
    r.swap_min = station.swap_duration_min;
    r.dc_fast_low_min = dc_fast_low_min;
    r.dc_fast_high_min = dc_fast_high_min;
    r.saving_low_min = dc_fast_low_min - station.swap_duration_min;
    r.saving_high_min = dc_fast_high_min - station.swap_duration_min;
    r.saving_mid_min = (dc_fast_low_min + dc_fast_high_min) / 2.0 - station.swap_duration_min;
    r.vehicles_per_day = vehicles_per_day;
    r.fleet_saving_low_min = r.saving_low_min * vehicles_per_day;
    r.fleet_saving_high_min = r.saving_high_min * vehicles_per_day;
    r.fleet_saving_mid_min = r.saving_mid_min * vehicles_per_day;
    return r;
}

}  // namespace coldfleet
