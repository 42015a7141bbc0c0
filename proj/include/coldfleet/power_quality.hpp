#ifndef COLDFLEET_POWER_QUALITY_HPP
#define COLDFLEET_POWER_QUALITY_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "coldfleet/errors.hpp"

namespace coldfleet {

// One current-THD reading taken at a charger service point.
struct ThdMeasurement {
    double charger_kw = 0.0;
    double ambient_f = 0.0;
    double thd_i_pct = 0.0;
    double soc = 0.0;           // SoC of the vehicle at measurement time
    double isc_il_ratio = 0.0;  // short-circuit to max-load current ratio
};

// Current-distortion limit classes keyed by Isc/IL. Classes are half-open
// (prev, bound]: a ratio exactly at a bound belongs to the lower class. The
// top class is open-ended. Defaults follow the general-distribution limit
// ladder; they ship as editable configuration.
struct LimitTable {
    std::vector<std::pair<double, double>> classes{
        {20.0, 5.0},
        {50.0, 8.0},
        {100.0, 12.0},
        {1000.0, 15.0},
        {std::numeric_limits<double>::infinity(), 20.0}};
};

void validate(const LimitTable& table);

// Row-validation rules for measurement files. min_soc reflects the
// measurement protocol (readings below the threshold are rejected);
// allowed_ratings_kw restricts charger classes. Either check can be relaxed.
struct ValidationOptions {
    std::vector<double> allowed_ratings_kw{50.0, 75.0, 100.0, 150.0};
    double min_soc = 0.40;
    bool enforce_protocol = true;
};

// Reads a measurement CSV with header
//   charger_kw,ambient_f,thd_i_pct,soc,isc_il_ratio
// Rejects malformed rows with ParseError and invariant-violating rows with
// InvariantViolation, both carrying the 1-based line number.
std::vector<ThdMeasurement> load_measurements(const std::string& path,
                                              const ValidationOptions& options = {});

// The applicable distortion limit (percent) for a service-point ratio.
double limit_for_ratio(const LimitTable& table, double ratio);

struct GroupResult {
    double charger_kw = 0.0;
    double ambient_f = 0.0;
    int pass = 0;
    int fail = 0;
};

struct Violation {
    std::size_t record_index = 0;
    double charger_kw = 0.0;
    double ambient_f = 0.0;
    double thd_i_pct = 0.0;
    double limit_pct = 0.0;
    double isc_il_ratio = 0.0;
};

struct ComplianceReport {
    std::vector<GroupResult> groups;  // sorted by (charger_kw, ambient_f)
    std::vector<Violation> fails;
    int total_pass = 0;
    int total_fail = 0;
};

// Pass/fail of every record against its ratio-class limit (thd <= limit
// passes), grouped by charger rating and ambient temperature.
ComplianceReport check_compliance(const std::vector<ThdMeasurement>& measurements,
                                  const LimitTable& table);

struct TrendResult {
    double slope_pct_per_f = 0.0;
    double intercept_pct = 0.0;
    std::size_t n = 0;
    // True when the slope is negative at 95% one-sided confidence: THD rises
    // as temperature falls.
    bool cold_increasing = false;
};

// Least-squares fit of thd_i against ambient temperature for one charger
// rating. Needs at least two distinct temperatures.
TrendResult thd_trend(const std::vector<ThdMeasurement>& measurements, double charger_kw);

}  // namespace coldfleet

#endif  // COLDFLEET_POWER_QUALITY_HPP
