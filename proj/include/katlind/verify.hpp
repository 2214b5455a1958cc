#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace katlind {

// One verification check: a measured quantity against its bound.
struct CheckResult {
    std::string name;
    std::string property;  // the mathematical property being verified
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    double total_seconds = 0.0;
    bool all_pass() const;
};

struct VerifyOptions {
    std::vector<int> ks = {1, 2, 3};  // photon orders to exercise
    int dim_override = 0;             // force a truncation (negative controls)
    unsigned long long seed = 20160325ULL;
};

// Runs the verification suite. Never throws: check failures (including
// exceptions raised inside a check) become failing report entries.
VerificationReport run_verification(const VerifyOptions& opts = {});

std::string report_to_json(const VerificationReport& report);
void print_report_table(const VerificationReport& report, std::ostream& os);

}  // namespace katlind
