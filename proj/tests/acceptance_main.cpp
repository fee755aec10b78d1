// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest (label: acceptance) or directly.
#include <cstring>
#include <iostream>

#include "spindle/battery.hpp"

int main(int argc, char** argv) {
    spindle::BatteryOptions opts;
    bool progress = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--progress")) progress = true;
        if (!std::strcmp(argv[i], "--grid") && i + 1 < argc)
            opts.eta_grid_n = std::atoi(argv[++i]);
        if (!std::strcmp(argv[i], "--jobs") && i + 1 < argc)
            opts.jobs = static_cast<unsigned>(std::atoi(argv[++i]));
    }

    std::vector<spindle::CheckResult> results;
    try {
        results = spindle::run_battery(opts, progress ? &std::cerr : nullptr);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] battery aborted: " << e.what() << "\n";
        return 1;
    }

    bool all = true;
    int idx = 0;
    for (const auto& r : results) {
        ++idx;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << idx
                  << " (" << r.name << "): " << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "acceptance: all criteria satisfied\n"
                      : "acceptance: FAILURES present\n");
    return all ? 0 : 1;
}
