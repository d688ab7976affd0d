#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chemosched/backend.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/types.hpp"

namespace chemosched {

/// Euclidean distance between two infusion-duration vectors.
double scenario_distance(std::span<const double> a, std::span<const double> b);

// Scenario grouping. All three methods honor the size rule: ceil(|S|/Z)
// groups of size Z, except the last group which takes the remainder.
// "Arbitrary" seed scenarios are drawn seeded-uniformly from the ungrouped
// pool so every run is reproducible; distance ties break toward the lowest
// scenario index.

/// Grow each group by repeatedly adding the ungrouped scenario furthest
/// from the group's running centroid.
GroupingPlan group_furthest(const Instance& inst, int group_size, std::uint64_t seed);

/// Same mechanics, nearest scenario instead of furthest.
GroupingPlan group_closest(const Instance& inst, int group_size, std::uint64_t seed);

/// Seeded-uniform partition.
GroupingPlan group_random(const Instance& inst, int group_size, std::uint64_t seed);

struct SgbdOptions {
  SolveLimits subproblem_limits;  // per-subproblem backend limits
  BuildOptions build;
  int jobs = 1;                     // subproblems solved concurrently (one backend context each)
  bool warm_start_baseline = true;  // seed every subproblem with the two-slot schedule
};

struct SgbdResult {
  FirstStageSolution solution;
  SolveReport report;
};

/// Solve the restriction of the model to every group of the plan, evaluate
/// each candidate first stage over the full scenario set, return the best.
/// Groups whose subproblem fails are skipped with a note in the report;
/// it is an error only when every group fails.
SgbdResult run_static_sgbd(const Instance& inst, const GroupingPlan& plan,
                           const BackendFactory& make_backend, const SgbdOptions& options);

/// Progressive variant: start from singleton groups; each iteration solves
/// all subproblems, evaluates their first stages on the full scenario set,
/// sorts groups by that objective (ties by group index) and, except in the
/// final iteration, merges every `merge_factor` consecutive sorted groups.
SgbdResult run_progressive_sgbd(const Instance& inst, int merge_factor, int iteration_limit,
                                const BackendFactory& make_backend, const SgbdOptions& options);

}  // namespace chemosched
