// Acceptance battery: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "fockoplab/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = fockoplab::verify::kDefaultSeed;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--seed") == 0) seed = std::strtoull(argv[i + 1], nullptr, 10);

    const auto results = fockoplab::verify::run_acceptance(seed);
    for (const auto& r : results) std::puts(fockoplab::verify::format_line(r).c_str());
    const bool ok = fockoplab::verify::all_passed(results);
    std::printf("%s: %zu/%zu criteria passed\n", ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                static_cast<std::size_t>(
                    std::count_if(results.begin(), results.end(),
                                  [](const auto& r) { return r.pass; })),
                results.size());
    return ok ? 0 : 1;
}
