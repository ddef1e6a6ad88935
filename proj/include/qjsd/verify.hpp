#ifndef QJSD_VERIFY_HPP
#define QJSD_VERIFY_HPP

// End-to-end verification batteries: the ten release-gate checks
// ("acceptance") and the broader invariant suite ("properties").  Every check
// draws its randomness from one seeded splitmix64 stream so reruns are
// byte-identical.

#include <cstdint>
#include <string>
#include <vector>

namespace qjsd::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;  // worst measured deviation
    double limit = 0.0;         // contract bound it is held against
    double elapsed_s = 0.0;
    std::string note;
};

std::vector<CheckResult> acceptance_suite(std::uint64_t seed = 7);
std::vector<CheckResult> property_suite(std::uint64_t seed = 7);

// which: "acceptance", "properties", or "all"
std::vector<CheckResult> run_suite(const std::string& which, std::uint64_t seed = 7);

// one line per check: "PASS name  max_residual=... limit=... (t s)"
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace qjsd::verify

#endif
