#pragma once

#include <string>
#include <vector>

namespace rotirs {

struct PropertyOutcome {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Suite names accepted by run_property_suite.
std::vector<std::string> property_suite_names();

/// Randomized invariant checks for one module ("geometry", "channel",
/// "beamform", "rotation", "solver") or "all". Throws std::invalid_argument for
/// an unknown suite name.
std::vector<PropertyOutcome> run_property_suite(const std::string& suite);

}  // namespace rotirs
