#pragma once

#include "implode/params.hpp"

#include <string>
#include <vector>

namespace implode {

// One verified inequality / identity: worst margin over its grid and where it
// was attained. margin > 0 means the check holds with that much room.
struct VerifyCheck {
    std::string suite;
    std::string lemma;
    std::string point;
    double margin = 0;
    bool pass = false;
};

std::vector<std::string> suite_names();

// Runs one suite ("all" runs every suite).
std::vector<VerifyCheck> run_suite(const std::string& name);

// The (k, ell) sample of the admissible region used by the grid suites.
std::vector<std::pair<int, double>> k1_grid();

}  // namespace implode
