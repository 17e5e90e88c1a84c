#pragma once

#include <string>
#include <vector>

namespace oacm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Run one of the twelve desk-scale verification criteria (1..12).
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all_criteria();

}  // namespace oacm
