#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chebtail {

struct VerifyOptions {
    /// Groups to run; empty runs all of them.
    std::vector<std::string> only;
    std::uint64_t seed = 7;
    std::uint64_t mc_samples = 1'000'000;
    int property_cases = 500;
};

struct CheckResult {
    std::string group;
    std::string name;
    bool passed;
    std::string detail;
};

/// root, entropy, validity, discrete, mc, properties.
const std::vector<std::string>& verify_groups();

/// Runs the numerical property checks. Throws std::invalid_argument for an
/// unknown group name.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

} // namespace chebtail
