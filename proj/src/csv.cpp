#include "coldfleet/csv.hpp"

#include <charconv>

namespace coldfleet {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvRow& CsvRow::cell(const std::string& s) {
    if (!first_) out_ << ',';
    first_ = false;
    out_ << s;
    return *this;
}

CsvRow& CsvRow::cell(double v) { return cell(format_double(v)); }

CsvRow& CsvRow::cell(std::int64_t v) { return cell(std::to_string(v)); }

void CsvRow::end() { out_ << '\n'; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r' || cell.back() == '\t'))
            cell.pop_back();
        std::size_t lead = 0;
        while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
        cells.push_back(cell.substr(lead));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace coldfleet
