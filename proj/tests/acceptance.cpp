// Acceptance suite: runs the full verification matrix and prints one
// pass/fail line per criterion. Exits nonzero when any criterion fails.
#include <chrono>
#include <cstdio>

#include "hle/verify.hpp"

int main() {
    auto t0 = std::chrono::steady_clock::now();
    hle::VerifyOptions opts;
    opts.seed = 1;
    auto results = hle::run_verify_suite(opts);

    int failed = 0;
    for (const auto& r : results) {
        failed += !r.pass;
        std::printf("%s %-22s (%6.1fs)  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.detail.c_str());
    }
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %zu/%zu criteria passed in %.1fs\n", failed ? "FAILED" : "PASSED",
                results.size() - failed, results.size(), total);
    return failed ? 1 : 0;
}
