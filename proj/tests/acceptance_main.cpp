#include "acceptance_suite.hpp"

#include <iostream>

int main() {
    const auto results = wbench::run_acceptance(std::cout, {}, WBENCH_DATA_DIR);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
    return passed == results.size() ? 0 : 1;
}
