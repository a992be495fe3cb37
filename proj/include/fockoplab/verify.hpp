#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fockoplab::verify {

inline constexpr std::uint64_t kDefaultSeed = 0x5EEDF0CCULL;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
};

/// Runs the full acceptance battery. Deterministic given the seed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kDefaultSeed);

bool all_passed(const std::vector<CriterionResult>& results);

/// One "PASS/FAIL criterion-k name (t s): detail" line per criterion.
std::string format_line(const CriterionResult& r);

}  // namespace fockoplab::verify
