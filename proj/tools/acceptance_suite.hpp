#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wbench {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget = 0.0;
};

// Runs criteria 1-10 (or the subset in `only`), printing one line per
// criterion as it completes.
std::vector<CriterionResult> run_acceptance(std::ostream& out, const std::vector<int>& only = {},
                                            const std::string& data_dir = "");

}  // namespace wbench
