#pragma once

#include <string>
#include <vector>

#include "chemosched/types.hpp"

namespace chemosched {

/// Diagnostic checks; empty result means all invariants hold.
/// Each violation names the offending field and rule.
std::vector<std::string> validate_instance(const Instance& inst);

/// First-stage feasibility: tournament, order consistency of appointments,
/// nurse eligibility, flexibility budget, and acyclicity of the precedence
/// relation restricted to each shared nurse/chair. `tol` absorbs LP-level
/// rounding in the appointment vector.
std::vector<std::string> validate_first_stage(const Instance& inst, const FirstStageSolution& sol,
                                              double tol = 1e-6);

}  // namespace chemosched
