#pragma once

#include <vector>

#include "chemosched/types.hpp"

namespace chemosched {

/// Precedence structure induced by a first stage. An edge i -> j exists
/// when u(i,j)=1 and the patients share a resource:
///   same nurse  -> treatment of j starts no earlier than s after i starts
///                  (the nurse runs one premedication at a time);
///   same chair  -> j starts no earlier than s + t_i after i starts
///                  (the chair is held through premedication and infusion).
/// When a pair shares both, only the chair edge is kept; it dominates
/// because infusion durations are positive.
///
/// Edge existence depends only on (u, x, y); the chair delays pick up the
/// scenario's infusion durations at evaluation time, so one dag serves all
/// scenarios of an instance.
struct PrecedenceDag {
  struct Edge {
    int from = 0;
    int to = 0;
    bool includes_infusion = false;  // delay = s, plus t_from when set
  };

  int num_patients = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> incoming_edges;  // edge indices per target patient
  std::vector<int> topo_order;
  // Per nurse, the u-last assigned patient (-1 when the nurse treats nobody).
  // Overtime runs until that patient's treatment finishes.
  std::vector<int> last_patient_of_nurse;

  /// Throws Error when the induced relation has a directed cycle (an
  /// invalid first stage; such a first stage has no feasible second stage).
  static PrecedenceDag build(const Instance& inst, const FirstStageSolution& sol);
};

/// Closed-form second stage for one scenario: waits from the longest-path
/// recursion over the dag, overtimes from the finish time of each nurse's
/// last patient. Equals the componentwise-minimal feasible point of the
/// second-stage LP, hence its optimum for any lambda in [0,1].
ScenarioOutcome evaluate_scenario(const Instance& inst, const FirstStageSolution& sol,
                                  int scenario);
ScenarioOutcome evaluate_scenario(const Instance& inst, const FirstStageSolution& sol,
                                  int scenario, const PrecedenceDag& dag);

/// Mean outcome over a scenario subset (empty subset = all scenarios).
/// The report flags scenarios whose overtime exceeds L instead of clamping.
SolveReport evaluate_expected(const Instance& inst, const FirstStageSolution& sol);
SolveReport evaluate_expected(const Instance& inst, const FirstStageSolution& sol,
                              const std::vector<int>& scenario_subset);

}  // namespace chemosched
