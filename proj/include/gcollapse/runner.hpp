#pragma once

#include <string>
#include <vector>

#include "gcollapse/csv.hpp"
#include "gcollapse/scenario.hpp"

namespace gcollapse::runner {

struct RunResult {
    csv::Table table;
    std::vector<std::string> summary;  // human-readable lines, deterministic
};

// Executes one scenario. Library errors propagate unchanged.
RunResult run(const scenario::Scenario& s);

// Header of the CSV each kind produces.
std::vector<std::string> columns_for(scenario::Kind kind);

}  // namespace gcollapse::runner
