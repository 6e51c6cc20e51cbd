// Acceptance gate: one line per criterion, non-zero exit on any failure.
#include <cstdio>

#include "tpdicke/verify.hpp"

int main() {
    int failures = 0;
    tpdicke::VerifyContext ctx;
    for (const std::string& name : tpdicke::check_names()) {
        tpdicke::CheckResult res;
        try {
            res = tpdicke::run_check(name, ctx);
        } catch (const std::exception& e) {
            res.name = name;
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %-18s %s (%.1fs)\n", res.passed ? "PASS" : "FAIL", res.name.c_str(),
                    res.detail.c_str(), res.seconds);
        std::fflush(stdout);
        if (!res.passed) ++failures;
    }
    if (failures) std::printf("%d of 10 acceptance criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
