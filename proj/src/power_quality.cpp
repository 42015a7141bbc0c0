#include "coldfleet/power_quality.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "coldfleet/csv.hpp"

namespace coldfleet {

void validate(const LimitTable& table) {
    if (table.classes.empty()) throw InvalidParameter("limit table must not be empty");
    for (std::size_t i = 0; i < table.classes.size(); ++i) {
        const auto& [bound, limit] = table.classes[i];
        if (!(bound > 0.0)) throw InvalidParameter("ratio bounds must be > 0");
        if (!(limit > 0.0)) throw InvalidParameter("distortion limits must be > 0");
        if (i > 0) {
            if (!(table.classes[i - 1].first < bound))
                throw InvalidParameter("ratio bounds must be strictly increasing");
            if (!(table.classes[i - 1].second < limit))
                throw InvalidParameter("limits must be strictly increasing with ratio class");
        }
    }
}

namespace {

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && cell.size() > 0;
}

const char* kHeader[] = {"charger_kw", "ambient_f", "thd_i_pct", "soc", "isc_il_ratio"};

}  // namespace

std::vector<ThdMeasurement> load_measurements(const std::string& path,
                                              const ValidationOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open measurement file: " + path);

    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError(1, "missing header row");
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() != 5)
        throw ParseError(line_no, "expected 5 header columns, got " + std::to_string(header.size()));
    for (std::size_t i = 0; i < 5; ++i) {
        if (header[i] != kHeader[i])
            throw ParseError(line_no, "expected column '" + std::string(kHeader[i]) + "', got '" +
                                          header[i] + "'");
    }

    std::vector<ThdMeasurement> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 5)
            throw ParseError(line_no, "expected 5 fields, got " + std::to_string(cells.size()));

        ThdMeasurement m;
        double* fields[] = {&m.charger_kw, &m.ambient_f, &m.thd_i_pct, &m.soc, &m.isc_il_ratio};
        for (std::size_t i = 0; i < 5; ++i) {
            if (!parse_double(cells[i], *fields[i]))
                throw ParseError(line_no, "field '" + std::string(kHeader[i]) +
                                              "' is not a number: '" + cells[i] + "'");
        }

        if (m.thd_i_pct < 0.0)
            throw InvariantViolation(line_no, "thd_i_pct must be >= 0");
        if (!(m.isc_il_ratio > 0.0))
            throw InvariantViolation(line_no, "isc_il_ratio must be > 0");
        if (options.enforce_protocol) {
            if (m.soc < options.min_soc)
                throw InvariantViolation(line_no, "soc below the protocol minimum of " +
                                                      format_double(options.min_soc));
            if (!options.allowed_ratings_kw.empty() &&
                std::find(options.allowed_ratings_kw.begin(), options.allowed_ratings_kw.end(),
                          m.charger_kw) == options.allowed_ratings_kw.end())
                throw InvariantViolation(line_no, "charger_kw " + format_double(m.charger_kw) +
                                                      " not in the configured rating set");
        }
        records.push_back(m);
    }
    return records;
}

double limit_for_ratio(const LimitTable& table, double ratio) {
    if (!(ratio > 0.0)) throw InvalidParameter("Isc/IL ratio must be > 0");
    for (const auto& [bound, limit] : table.classes) {
        if (ratio <= bound) return limit;
    }
    return table.classes.back().second;  // open-ended top class
}

ComplianceReport check_compliance(const std::vector<ThdMeasurement>& measurements,
                                  const LimitTable& table) {
    if (measurements.empty()) throw EmptyInput();
    validate(table);

    ComplianceReport report;
    std::map<std::pair<double, double>, GroupResult> groups;
    for (std::size_t i = 0; i < measurements.size(); ++i) {
        const ThdMeasurement& m = measurements[i];
        const double limit = limit_for_ratio(table, m.isc_il_ratio);
        auto& group = groups[{m.charger_kw, m.ambient_f}];
        group.charger_kw = m.charger_kw;
        group.ambient_f = m.ambient_f;
        if (m.thd_i_pct <= limit) {
            ++group.pass;
            ++report.total_pass;
        } else {
            ++group.fail;
            ++report.total_fail;
            report.fails.push_back({i, m.charger_kw, m.ambient_f, m.thd_i_pct, limit,
                                    m.isc_il_ratio});
        }
    }
    report.groups.reserve(groups.size());
    for (const auto& [key, group] : groups) report.groups.push_back(group);
    return report;
}

namespace {

// One-sided 95% Student-t critical values by degrees of freedom; the normal
// quantile beyond df 30.
double t_crit_95(std::size_t df) {
    static const double table[] = {6.3138, 2.9200, 2.3534, 2.1318, 2.0150, 1.9432, 1.8946,
                                   1.8595, 1.8331, 1.8125, 1.7959, 1.7823, 1.7709, 1.7613,
                                   1.7531, 1.7459, 1.7396, 1.7341, 1.7291, 1.7247, 1.7207,
                                   1.7171, 1.7139, 1.7109, 1.7081, 1.7056, 1.7033, 1.7011,
                                   1.6991, 1.6973};
    if (df == 0) return std::numeric_limits<double>::infinity();
    if (df <= 30) return table[df - 1];
    return 1.6449;
}

}  // namespace

TrendResult thd_trend(const std::vector<ThdMeasurement>& measurements, double charger_kw) {
    std::vector<const ThdMeasurement*> rows;
    for (const auto& m : measurements)
        if (m.charger_kw == charger_kw) rows.push_back(&m);

    std::vector<double> temps;
    for (const auto* m : rows) temps.push_back(m->ambient_f);
    std::sort(temps.begin(), temps.end());
    temps.erase(std::unique(temps.begin(), temps.end()), temps.end());
    if (temps.size() < 2)
        throw InsufficientData("need measurements at >= 2 distinct temperatures for charger " +
                               format_double(charger_kw) + " kW");

    const auto n = static_cast<double>(rows.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (const auto* m : rows) {
        x_mean += m->ambient_f;
        y_mean += m->thd_i_pct;
    }
    x_mean /= n;
    y_mean /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto* m : rows) {
        const double dx = m->ambient_f - x_mean;
        const double dy = m->thd_i_pct - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    TrendResult r;
    r.n = rows.size();
    r.slope_pct_per_f = sxy / sxx;
    r.intercept_pct = y_mean - r.slope_pct_per_f * x_mean;

    const double sse = syy - r.slope_pct_per_f * sxy;  // residual sum of squares
    const double sse_floor = 1e-12 * std::max(syy, 1.0);
    if (r.slope_pct_per_f < 0.0) {
        if (sse <= sse_floor || rows.size() <= 2) {
            // Exact (or two-point) fit: the sign is not a sampling artifact.
            r.cold_increasing = true;
        } else {
            const std::size_t df = rows.size() - 2;
            const double se = std::sqrt(sse / static_cast<double>(df) / sxx);
            r.cold_increasing = r.slope_pct_per_f / se < -t_crit_95(df);
        }
    }
    return r;
}

}  // namespace coldfleet
