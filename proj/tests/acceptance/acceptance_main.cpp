// Runs every acceptance criterion and prints one verdict line per criterion.

#include <cstdio>
#include <exception>

#include "gcollapse/verify.hpp"

int main() {
    using namespace gcollapse::verify;
    VerifyOptions options;
    options.scenario_dir = GCOLLAPSE_SCENARIO_DIR;
    int failures = 0;
    for (int id : suite_criteria("all")) {
        try {
            const CriterionResult r = run_criterion(id, options);
            std::fputs(format(r).c_str(), stdout);
            if (!r.pass()) ++failures;
        } catch (const std::exception& e) {
            std::printf("FAIL %2d  raised: %s\n", id, e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
