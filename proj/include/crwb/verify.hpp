#ifndef CRWB_VERIFY_HPP
#define CRWB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace crwb::verify {

struct Options {
    std::uint64_t seed = 7;
    int trials = 0;  // 0 = per-suite default
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    int checks = 0;
    int failures = 0;
    std::string detail;  // first failing instance, or a summary line
};

/// Names accepted by run_suite, in canonical order.
const std::vector<std::string>& all_suites();

/// Run one named property suite ("table1", "rule184", "cole-hopf",
/// "ud-limit", "theorems", "conservation").
SuiteResult run_suite(const std::string& name, const Options& opt);

}  // namespace crwb::verify

#endif
