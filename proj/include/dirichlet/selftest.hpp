#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dirichlet {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

/// Runs acceptance criterion `id` (1..11) with the given seed.
CriterionResult run_criterion(int id, std::uint64_t seed = 0);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0);

/// "PASS AC<id> <name>: <detail> (<seconds> s)"
std::string format_result(const CriterionResult& r);

}  // namespace dirichlet
