// One line per acceptance criterion; nonzero exit if any fails.
#include "dirichlet/selftest.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 0;
    int failed = 0;
    for (int id = 1; id <= dirichlet::kCriterionCount; ++id) {
        const auto r = dirichlet::run_criterion(id, seed);
        std::cout << dirichlet::format_result(r) << std::endl;
        if (!r.pass) ++failed;
    }
    std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
