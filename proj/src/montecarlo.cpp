#include "coldfleet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace coldfleet {

void validate(const FleetScenario& s) {
    if (s.fleet_size <= 0) throw InvalidParameter("fleet_size must be > 0");
    if (!(s.total_capacity_gwh > 0.0)) throw InvalidParameter("total_capacity_gwh must be > 0");
    if (!(s.daily_miles > 0.0)) throw InvalidParameter("daily_miles must be > 0");
    if (!(s.efficiency_mi_per_kwh > 0.0)) throw InvalidParameter("efficiency must be > 0");
    if (!(0.0 <= s.loss_low && s.loss_low <= s.loss_high && s.loss_high < 1.0))
        throw InvalidParameter("require 0 <= loss_low <= loss_high < 1");
    if (!(s.soc_floor > 0.0 && s.soc_floor < 1.0))
        throw InvalidParameter("soc_floor must be in (0,1)");
    if (s.iterations <= 0) throw InvalidParameter("iterations must be > 0");
}

double sample_loss(double low, double high, SplitMix64& rng) {
    return rng.next_in(low, high);
}

double vehicle_daily_demand_kwh(double miles, double efficiency_mi_per_kwh, double loss,
                                double usable_cap_kwh) {
    if (loss >= 1.0) throw LossOutOfRange(loss);
    if (loss < 0.0) throw LossOutOfRange(loss);
    const double demand = (miles / efficiency_mi_per_kwh) / (1.0 - loss);
    return std::min(demand, usable_cap_kwh);
}

namespace {

double fleet_day_sample_gwh(const FleetScenario& s, std::uint64_t iteration) {
    SplitMix64 rng = substream(s.seed, iteration);
    const double usable = s.usable_capacity_kwh();
    double total_kwh = 0.0;
    for (std::int64_t v = 0; v < s.fleet_size; ++v) {
        const double loss = sample_loss(s.loss_low, s.loss_high, rng);
        total_kwh += vehicle_daily_demand_kwh(s.daily_miles, s.efficiency_mi_per_kwh, loss, usable);
    }
    return total_kwh * 1e-6;
}

}  // namespace

DemandDistribution run_fleet_mc(const FleetScenario& scenario, int threads, int histogram_bins) {
    validate(scenario);
    const std::int64_t n = scenario.iterations;
    std::vector<double> samples(static_cast<std::size_t>(n));

    if (threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i)
            samples[static_cast<std::size_t>(i)] =
                fleet_day_sample_gwh(scenario, static_cast<std::uint64_t>(i));
    } else {
        // Each iteration is generated from its own substream, so any static
        // partition yields the same samples vector as a serial run.
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&scenario, &samples, n, t, threads] {
                for (std::int64_t i = t; i < n; i += threads)
                    samples[static_cast<std::size_t>(i)] =
                        fleet_day_sample_gwh(scenario, static_cast<std::uint64_t>(i));
            });
        }
        for (auto& th : pool) th.join();
    }

    return summarize(std::move(samples), histogram_bins);
}

namespace {

// Neumaier compensated sum: the reported mean must not depend on how callers
// parallelize, beyond 1e-9 relative.
double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double nearest_rank_percentile(const std::vector<double>& sorted, double pct) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    if (rank < 1) rank = 1;
    return sorted[rank - 1];
}

}  // namespace

Histogram make_histogram(const std::vector<double>& samples, int bins) {
    if (samples.empty()) throw EmptySamples();
    if (bins <= 0) throw InvalidParameter("histogram bins must be > 0");
    Histogram h;
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    h.lo = *lo_it;
    h.hi = *hi_it;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = (h.hi - h.lo) / bins;
    for (double x : samples) {
        std::size_t idx = 0;
        if (width > 0.0) {
            idx = static_cast<std::size_t>((x - h.lo) / width);
            if (idx >= h.counts.size()) idx = h.counts.size() - 1;  // x == hi
        }
        ++h.counts[idx];
    }
    return h;
}

DemandDistribution summarize(std::vector<double> samples_gwh, int histogram_bins) {
    if (samples_gwh.empty()) throw EmptySamples();
    DemandDistribution d;
    const auto n = static_cast<double>(samples_gwh.size());
    d.mean_gwh = compensated_sum(samples_gwh) / n;

    double ss = 0.0;
    for (double x : samples_gwh) ss += (x - d.mean_gwh) * (x - d.mean_gwh);
    d.std_gwh = samples_gwh.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    std::vector<double> sorted = samples_gwh;
    std::sort(sorted.begin(), sorted.end());
    d.p5_gwh = nearest_rank_percentile(sorted, 5.0);
    d.p50_gwh = nearest_rank_percentile(sorted, 50.0);
    d.p95_gwh = nearest_rank_percentile(sorted, 95.0);

    d.histogram = make_histogram(samples_gwh, histogram_bins);
    d.samples_gwh = std::move(samples_gwh);
    return d;
}

double closed_form_mean_gwh(const FleetScenario& s) {
    const double base = s.base_demand_kwh();
    double per_vehicle;
    if (s.loss_high == s.loss_low)
        per_vehicle = base / (1.0 - s.loss_low);
    else
        per_vehicle = base * std::log((1.0 - s.loss_low) / (1.0 - s.loss_high)) /
                      (s.loss_high - s.loss_low);
    return per_vehicle * static_cast<double>(s.fleet_size) * 1e-6;
}

}  // namespace coldfleet
