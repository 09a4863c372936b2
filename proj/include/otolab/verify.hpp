#pragma once

#include <string>
#include <vector>

namespace otolab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// All eleven checks, in order. `scratch_dir` holds temporary artifacts for
// the stability check.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const std::string& scratch_dir);
std::vector<int> all_criterion_ids();

}  // namespace otolab
