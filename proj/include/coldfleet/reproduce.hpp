#ifndef COLDFLEET_REPRODUCE_HPP
#define COLDFLEET_REPRODUCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace coldfleet {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproduceOptions {
    std::string out_dir = "reproduce_out";
    std::uint64_t seed = 1;
    int threads = 1;
    // When set, every bundled scenario file in this directory is also run
    // end-to-end (results land under out_dir).
    std::string configs_dir;
};

// Re-derives the published anchor numbers from the toolkit defaults and
// checks each against its tolerance: Monte Carlo demand means and their
// analytic expectations, the severe/average ratio, bus runtimes, TOU
// arithmetic, battery anchors, and the regenerated demand histograms.
// Returns one result per check; histogram CSVs are written into out_dir.
std::vector<CriterionResult> reproduce_paper(const ReproduceOptions& options);

// Formats one "[PASS]/[FAIL] name: detail" line.
std::string format_criterion(const CriterionResult& result);

}  // namespace coldfleet

#endif  // COLDFLEET_REPRODUCE_HPP
