// Runs one verification criterion (argv[1] in 1..12) or all of them.
#include <cstdio>
#include <cstdlib>

#include "oacm/acceptance.hpp"

int main(int argc, char** argv) {
    int first = 1, last = 12;
    if (argc > 1) first = last = std::atoi(argv[1]);
    bool all_pass = true;
    for (int id = first; id <= last; ++id) {
        const oacm::CriterionResult r = oacm::run_criterion(id);
        printf("%s  criterion_%02d  %s  [%s]\n", r.pass ? "PASS" : "FAIL", r.id,
               r.name.c_str(), r.detail.c_str());
        fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
