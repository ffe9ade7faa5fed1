// Times the closedness scan in its three guises on one workload: the
// OpenMP kernel, the same kernel pinned to one thread, and the naive
// stream-plus-evaluator reference.  The point is an honest speedup figure
// and a standing check that all three agree on the counts.

#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "qml/suites.hpp"

using namespace qml;

namespace {

using clock_type = std::chrono::steady_clock;

struct row {
    std::string name;
    scan_stats stats;
    double secs = 0.0;
};

template <class F>
row timed(std::string name, F&& f) {
    auto t0 = clock_type::now();
    scan_stats s = f();
    double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
    return {std::move(name), s, secs};
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else {
            std::cerr << "usage: bench_scan [--quick]\n";
            return 2;
        }
    }

    // The naive reference re-derives closed sets per structure and walks
    // formulas as trees, so it caps the workload size.
    const int worlds = quick ? 2 : 3;
    const int depth = quick ? 2 : 3;
    const std::vector<std::string> atoms = {"p", "q"};

    std::cout << "closedness scan, worlds<=" << worlds << ", atoms={p,q}, depth<="
              << depth << "\n\n";

    std::vector<row> rows;
    rows.push_back(timed("parallel", [&] { return closedness_scan(worlds, atoms, depth, true); }));
    rows.push_back(timed("serial", [&] { return closedness_scan(worlds, atoms, depth, false); }));
    rows.push_back(timed("naive", [&] { return closedness_scan_naive(worlds, atoms, depth); }));

    std::cout << std::left << std::setw(10) << "variant" << std::right << std::setw(14)
              << "structures" << std::setw(14) << "checks" << std::setw(10) << "time"
              << std::setw(10) << "speedup" << "\n";
    double naive_secs = rows.back().secs;
    for (const row& r : rows) {
        std::cout << std::left << std::setw(10) << r.name << std::right << std::setw(14)
                  << r.stats.structures << std::setw(14) << r.stats.checks
                  << std::setw(9) << std::fixed << std::setprecision(2) << r.secs << "s"
                  << std::setw(9) << std::setprecision(1)
                  << (r.secs > 0 ? naive_secs / r.secs : 0.0) << "x\n";
    }

    bool agree = true;
    for (const row& r : rows) {
        if (!r.stats.clean()) {
            std::cout << "\n" << r.name << " found a failure: " << r.stats.first_failure
                      << "\n";
            agree = false;
        }
        if (r.stats.structures != rows[0].stats.structures) agree = false;
    }
    // The naive scan counts tree nodes rather than table slots, so compare
    // checks only between the two kernel runs.
    if (rows[0].stats.checks != rows[1].stats.checks) agree = false;

    std::cout << "\n" << (agree ? "all variants agree" : "VARIANTS DISAGREE") << "\n";
    return agree ? 0 : 1;
}
