#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "chemosched/backend.hpp"
#include "chemosched/evaluator.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/types.hpp"

// Exhaustive reference optimum: every patient sequence, every nurse
// assignment within the flexibility budget, every chair partition (one
// canonical labeling per partition; chairs are interchangeable), with the
// appointment vector optimized by LP for each structure. Independent of
// the branch-and-cut path it is used to check.
namespace testsup {

struct BruteForceResult {
  double objective = std::numeric_limits<double>::infinity();
  chemosched::FirstStageSolution best;
  long structures = 0;
  // objective of the second-best structure, for uniqueness checks
  double runner_up = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void enumerate_nurses(const chemosched::Instance& inst, int patient, int budget,
                             std::vector<int>& nurse_of,
                             const std::function<void()>& done) {
  if (patient == inst.num_patients()) {
    done();
    return;
  }
  for (int n : inst.eligible_nurses[patient]) {
    const int cost = n == inst.primary_nurse[patient] ? 0 : 1;
    if (cost > budget) continue;
    nurse_of[patient] = n;
    enumerate_nurses(inst, patient + 1, budget - cost, nurse_of, done);
  }
}

// Restricted-growth enumeration: patient p may use chairs 0..min(max_used+1, C-1).
inline void enumerate_chairs(const chemosched::Instance& inst, int patient, int max_used,
                             std::vector<int>& chair_of,
                             const std::function<void()>& done) {
  if (patient == inst.num_patients()) {
    done();
    return;
  }
  const int limit = std::min(max_used + 1, inst.num_chairs - 1);
  for (int c = 0; c <= limit; ++c) {
    chair_of[patient] = c;
    enumerate_chairs(inst, patient + 1, std::max(max_used, c), chair_of, done);
  }
}

}  // namespace detail

// `near_optimal`, when given, collects every structure whose objective is
// within `tie_tol` of the final optimum (useful when ties make a dependent
// quantity set-valued rather than unique).
inline BruteForceResult brute_force_optimum(
    const chemosched::Instance& inst, chemosched::SolverBackend& backend,
    const std::vector<int>& scenario_subset = {},
    std::vector<std::pair<double, chemosched::FirstStageSolution>>* near_optimal = nullptr,
    double tie_tol = 1e-7) {
  using namespace chemosched;
  const int P = inst.num_patients();
  BruteForceResult result;

  std::vector<int> order(P);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> nurse_of(P, 0), chair_of(P, 0);

  do {
    detail::enumerate_nurses(inst, 0, inst.flexibility_limit, nurse_of, [&] {
      detail::enumerate_chairs(inst, 0, -1, chair_of, [&] {
        ++result.structures;
        const FixedStructureLp lp =
            build_fixed_structure_lp(inst, order, nurse_of, chair_of, scenario_subset);
        const BackendSolution out = backend.solve(lp.problem, SolveLimits{});
        if (out.status == SolveStatus::Infeasible) return;  // overtime cap unreachable
        if (!out.has_solution()) throw Error("oracle LP failed: " + out.detail);
        FirstStageSolution structure;
        structure.precedence = PrecedenceMatrix::from_order(order);
        structure.nurse_of = nurse_of;
        structure.chair_of = chair_of;
        structure.appointments.resize(P);
        for (int i = 0; i < P; ++i) {
          structure.appointments[i] = std::max(0.0, out.values[lp.a_cols[i]]);
        }
        if (near_optimal) near_optimal->emplace_back(out.objective, structure);
        if (out.objective < result.objective) {
          result.runner_up = result.objective;
          result.objective = out.objective;
          result.best = std::move(structure);
        } else if (out.objective < result.runner_up) {
          result.runner_up = out.objective;
        }
      });
    });
  } while (std::next_permutation(order.begin(), order.end()));
  if (near_optimal) {
    std::erase_if(*near_optimal,
                  [&](const auto& entry) { return entry.first > result.objective + tie_tol; });
  }
  return result;
}

}  // namespace testsup
