#ifndef COLDFLEET_SWAP_STATION_HPP
#define COLDFLEET_SWAP_STATION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coldfleet/battery.hpp"

namespace coldfleet {

// Battery-swapping station: a rack of concurrently charging packs in a
// thermally controlled room, one or more swap bays, and a TOU tariff.
// Defaults describe a 36-slot rack of 400 kWh bus packs charged at C/2
// inside a 68-77 F window.
struct SwapStation {
    int slots = 36;
    double battery_capacity_kwh = 400.0;
    double swap_duration_min = 5.0;
    double station_temp_f = 72.5;
    std::pair<double, double> thermal_window_f{68.0, 77.0};
    bool thermal_control = true;
    double slot_charger_kw = 200.0;
    int bays = 1;
    ChargePolicy charge_policy{0.5, 0.8, 0.98};
};

struct Tariff {
    double base_rate_usd_per_kwh = 0.1313;
    double offpeak_discount_usd_per_kwh = 0.03;
    // Daily window [start, end) in minutes since midnight; may wrap past
    // midnight (start > end). start == end means no off-peak window.
    double offpeak_start_min = 1320.0;
    double offpeak_end_min = 360.0;
};

void validate(const SwapStation& station);
void validate(const Tariff& tariff);

bool in_offpeak(const Tariff& tariff, double minute);

struct TouSavings {
    double daily_usd = 0.0;
    double annual_usd = 0.0;
};

// Savings from moving the given daily energy to the discounted window.
// Annualized over 365 days.
TouSavings tou_savings(double diverted_kwh_per_day, double discount_usd_per_kwh);

// Daily energy of the whole batteries diverted off-peak: floor(slots *
// fraction) packs times the pack capacity.
double diverted_energy_kwh_per_day(const SwapStation& station, double diverted_fraction);

struct SwapEvent {
    double arrival_min = 0.0;
    double wait_min = 0.0;
    bool served = false;
};

struct RackMinute {
    double minute = 0.0;  // state at the end of this minute
    int ready = 0;
    int charging = 0;
    int in_swap = 0;
    double power_kw = 0.0;  // aggregate charging draw over the minute
};

struct SwapLog {
    std::vector<SwapEvent> events;  // one per arrival, in arrival order
    std::vector<std::pair<double, int>> batteries_ready_timeline;
};

struct Curtailment {
    double ceiling_kw = 0.0;
    double from_min = 0.0;
    double to_min = 0.0;
};

struct StationDayOptions {
    double arrival_soc = 0.40;      // SoC of packs returned by vehicles
    double initial_rack_soc = -1.0; // <0 means fully charged (at policy target)
    double deferral_fraction = 0.0; // share of returned packs held for off-peak
    std::optional<Curtailment> curtailment;
    ThermalModel thermal;
};

struct StationDayResult {
    SwapLog log;
    std::vector<RackMinute> minutes;
    double energy_kwh = 0.0;
    double offpeak_energy_kwh = 0.0;
    double cost_usd = 0.0;
    int served = 0;
    int unserved = 0;
    // Station temperature observed by every charge step; equal min/max when
    // thermal control holds the room steady.
    double charge_temp_min_f = 0.0;
    double charge_temp_max_f = 0.0;
    std::int64_t charge_minutes = 0;
};

// Minute-stepped simulation of one station day. Arrivals queue FIFO; a swap
// needs a free bay and a ready pack, takes swap_duration_min, and puts the
// returned pack on charge (possibly deferred to the off-peak window).
StationDayResult simulate_station_day(const SwapStation& station,
                                      const std::vector<double>& arrivals_min,
                                      const Tariff& tariff, double horizon_min,
                                      const StationDayOptions& options = {});

struct DowntimeReport {
    double swap_min = 0.0;
    double dc_fast_low_min = 0.0;
    double dc_fast_high_min = 0.0;
    double saving_low_min = 0.0;
    double saving_high_min = 0.0;
    double saving_mid_min = 0.0;
    int vehicles_per_day = 0;
    double fleet_saving_low_min = 0.0;
    double fleet_saving_high_min = 0.0;
    double fleet_saving_mid_min = 0.0;
};

// Per-vehicle and fleet-day downtime saved by swapping instead of waiting on
// a DC fast charge in the given duration range.
DowntimeReport swap_vs_plug_downtime(const SwapStation& station, double dc_fast_low_min,
                                     double dc_fast_high_min, int vehicles_per_day = 1);

// Rack inventory. Exposed so the slot bookkeeping (and the NoSlotsFree error
// path) can be exercised directly.
class Rack {
public:
    struct Pack {
        double soc = 0.0;
        bool waiting_for_offpeak = false;
    };

    explicit Rack(int slots) : slots_(static_cast<std::size_t>(slots)) {}

    int capacity() const { return static_cast<int>(slots_.size()); }
    int count() const;
    int ready_count(double ready_soc) const;

    // Inserts a returned pack; throws NoSlotsFree when every slot is taken.
    void insert(Pack pack);
    // Removes and returns the lowest-indexed ready pack, if any.
    std::optional<Pack> take_ready(double ready_soc);

    std::vector<std::optional<Pack>>& slots() { return slots_; }
    const std::vector<std::optional<Pack>>& slots() const { return slots_; }

private:
    std::vector<std::optional<Pack>> slots_;
};

}  // namespace coldfleet

#endif  // COLDFLEET_SWAP_STATION_HPP
