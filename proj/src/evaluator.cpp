#include "chemosched/evaluator.hpp"

#include <algorithm>
#include <numeric>

namespace chemosched {

PrecedenceDag PrecedenceDag::build(const Instance& inst, const FirstStageSolution& sol) {
  const int P = inst.num_patients();
  if (sol.precedence.size() != P || static_cast<int>(sol.appointments.size()) != P ||
      static_cast<int>(sol.nurse_of.size()) != P || static_cast<int>(sol.chair_of.size()) != P) {
    throw Error("first stage dimensions do not match the instance");
  }
  PrecedenceDag dag;
  dag.num_patients = P;
  dag.incoming_edges.resize(P);

  std::vector<int> out_degree(P, 0);
  std::vector<std::vector<int>> successors(P);
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j || !sol.precedence.before(i, j)) continue;
      const bool same_chair = sol.chair_of[i] == sol.chair_of[j];
      const bool same_nurse = sol.nurse_of[i] == sol.nurse_of[j];
      if (!same_chair && !same_nurse) continue;
      Edge e;
      e.from = i;
      e.to = j;
      e.includes_infusion = same_chair;  // chair delay dominates the nurse delay
      dag.incoming_edges[j].push_back(static_cast<int>(dag.edges.size()));
      dag.edges.push_back(e);
      successors[i].push_back(j);
    }
  }

  // Kahn's algorithm; ties resolved by patient index for a stable order.
  std::vector<int> indegree(P, 0);
  for (const auto& e : dag.edges) ++indegree[e.to];
  std::vector<int> ready;
  for (int i = P - 1; i >= 0; --i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  while (!ready.empty()) {
    const int i = ready.back();
    ready.pop_back();
    dag.topo_order.push_back(i);
    for (int j : successors[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (static_cast<int>(dag.topo_order.size()) != P) {
    throw Error("precedence cycle across shared resources; first stage is invalid");
  }

  dag.last_patient_of_nurse.assign(inst.num_nurses, -1);
  for (int n = 0; n < inst.num_nurses; ++n) {
    for (int i = 0; i < P; ++i) {
      if (sol.nurse_of[i] != n) continue;
      bool has_successor = false;
      for (int j = 0; j < P; ++j) {
        if (j != i && sol.nurse_of[j] == n && sol.precedence.before(i, j)) {
          has_successor = true;
          break;
        }
      }
      if (!has_successor) {
        dag.last_patient_of_nurse[n] = i;
        break;
      }
    }
  }
  return dag;
}

ScenarioOutcome evaluate_scenario(const Instance& inst, const FirstStageSolution& sol,
                                  int scenario, const PrecedenceDag& dag) {
  const int P = inst.num_patients();
  if (scenario < 0 || scenario >= inst.num_scenarios()) {
    throw Error("scenario index out of range");
  }
  const auto& t = inst.scenario_durations[scenario];
  const double s = inst.premed_minutes;

  ScenarioOutcome outcome;
  outcome.waits.assign(P, 0.0);
  outcome.overtimes.assign(inst.num_nurses, 0.0);

  std::vector<double> start(P, 0.0);
  for (int i : dag.topo_order) {
    double w = 0.0;
    for (int idx : dag.incoming_edges[i]) {
      const auto& e = dag.edges[idx];
      const double delay = s + (e.includes_infusion ? t[e.from] : 0.0);
      w = std::max(w, start[e.from] + delay - sol.appointments[i]);
    }
    outcome.waits[i] = w;
    start[i] = sol.appointments[i] + w;
  }

  for (int n = 0; n < inst.num_nurses; ++n) {
    const int last = dag.last_patient_of_nurse[n];
    if (last < 0) continue;
    const double finish = start[last] + s + t[last];
    outcome.overtimes[n] = std::max(0.0, finish - inst.shift_minutes);
    if (outcome.overtimes[n] > inst.overtime_limit_minutes + 1e-9) {
      outcome.within_overtime_limit = false;
    }
  }

  const double total_wait = std::accumulate(outcome.waits.begin(), outcome.waits.end(), 0.0);
  const double total_overtime =
      std::accumulate(outcome.overtimes.begin(), outcome.overtimes.end(), 0.0);
  outcome.cost =
      inst.lambda_weight * total_wait + (1.0 - inst.lambda_weight) * total_overtime;
  return outcome;
}

ScenarioOutcome evaluate_scenario(const Instance& inst, const FirstStageSolution& sol,
                                  int scenario) {
  const PrecedenceDag dag = PrecedenceDag::build(inst, sol);
  return evaluate_scenario(inst, sol, scenario, dag);
}

SolveReport evaluate_expected(const Instance& inst, const FirstStageSolution& sol) {
  std::vector<int> all(inst.num_scenarios());
  std::iota(all.begin(), all.end(), 0);
  return evaluate_expected(inst, sol, all);
}

SolveReport evaluate_expected(const Instance& inst, const FirstStageSolution& sol,
                              const std::vector<int>& scenario_subset) {
  if (scenario_subset.empty()) throw Error("scenario subset must not be empty");
  const PrecedenceDag dag = PrecedenceDag::build(inst, sol);

  SolveReport report;
  report.method = "evaluate";
  report.status = "evaluated";
  double wait_sum = 0.0;
  double overtime_sum = 0.0;
  // Fixed accumulation order (by position in the subset) for determinism.
  for (int w : scenario_subset) {
    const ScenarioOutcome outcome = evaluate_scenario(inst, sol, w, dag);
    wait_sum += std::accumulate(outcome.waits.begin(), outcome.waits.end(), 0.0);
    overtime_sum += std::accumulate(outcome.overtimes.begin(), outcome.overtimes.end(), 0.0);
    if (!outcome.within_overtime_limit) report.scenarios_over_limit.push_back(w);
  }
  const double count = static_cast<double>(scenario_subset.size());
  report.expected_wait = wait_sum / count;
  report.expected_overtime = overtime_sum / count;
  report.objective = inst.lambda_weight * report.expected_wait +
                     (1.0 - inst.lambda_weight) * report.expected_overtime;
  return report;
}

}  // namespace chemosched
