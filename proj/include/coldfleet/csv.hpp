#ifndef COLDFLEET_CSV_HPP
#define COLDFLEET_CSV_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace coldfleet {

// Shortest round-trip decimal representation (std::to_chars). Locale
// independent, so CSV bytes are reproducible across runs and machines.
std::string format_double(double v);

// Minimal comma-separated row writer. Values are written as-is; none of the
// toolkit's outputs need quoting.
class CsvRow {
public:
    explicit CsvRow(std::ostream& out) : out_(out) {}
    CsvRow& cell(const std::string& s);
    CsvRow& cell(double v);
    CsvRow& cell(std::int64_t v);
    void end();

private:
    std::ostream& out_;
    bool first_ = true;
};

// Splits one CSV line on commas; trims surrounding spaces and a trailing CR.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace coldfleet

#endif  // COLDFLEET_CSV_HPP
