#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hle {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
};

/// The full verification matrix: geometry bounds (ball, slab, waveguide),
/// the Hardy sweep, the cross-route identities, the explicit-constant
/// estimates, and the property suites. Pure computation; callers format
/// the results.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts = {});

} // namespace hle
