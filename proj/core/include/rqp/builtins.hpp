#pragma once

#include <rqp/sim.hpp>

#include <string>
#include <vector>

namespace rqp {

// Canonical scenario catalog: the 1-DoF stability/robustness studies, the
// barrier mode comparisons and sweeps, and the planar multi-DoF analogs.
std::vector<Scenario> builtin_scenarios();

std::vector<std::string> builtin_names();

// Throws std::invalid_argument for an unknown name.
Scenario builtin_scenario(const std::string& name);

}  // namespace rqp
