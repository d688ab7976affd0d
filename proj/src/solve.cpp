#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "chemosched/evaluator.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/validate.hpp"

namespace chemosched {

namespace {

std::vector<int> all_scenarios(const Instance& inst) {
  std::vector<int> all(inst.num_scenarios());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

// The u-last assigned patient per nurse; -1 for an idle nurse. Throws when
// the restriction of u to a nurse's patients has no maximum (a cycle).
std::vector<int> last_patient_per_nurse(const Instance& inst, const FirstStageSolution& sol) {
  const int P = inst.num_patients();
  std::vector<int> last(inst.num_nurses, -1);
  for (int n = 0; n < inst.num_nurses; ++n) {
    bool any = false;
    for (int i = 0; i < P; ++i) {
      if (sol.nurse_of[i] != n) continue;
      any = true;
      bool has_successor = false;
      for (int j = 0; j < P; ++j) {
        if (j != i && sol.nurse_of[j] == n && sol.precedence.before(i, j)) {
          has_successor = true;
          break;
        }
      }
      if (!has_successor) {
        last[n] = i;
        break;
      }
    }
    if (any && last[n] < 0) {
      throw Error("precedence cycle among one nurse's patients; first stage is invalid");
    }
  }
  return last;
}

}  // namespace

std::vector<double> warm_start_values(const ModelHandle& model, const FirstStageSolution& sol) {
  const Instance& inst = model.instance();
  const int P = inst.num_patients();

  FirstStageSolution canon = sol;
  if (model.options().chair_symmetry_breaking) {
    // Relabel chairs in order of first use by patient index so the start
    // satisfies the lexicographic symmetry rows.
    std::vector<int> relabel(inst.num_chairs, -1);
    int next = 0;
    for (int i = 0; i < P; ++i) {
      if (relabel[sol.chair_of[i]] < 0) relabel[sol.chair_of[i]] = next++;
    }
    for (int i = 0; i < P; ++i) canon.chair_of[i] = relabel[sol.chair_of[i]];
  }

  std::vector<double> values(model.problem().num_cols(), 0.0);
  for (int i = 0; i < P; ++i) {
    values[model.col_a(i)] = canon.appointments[i];
    values[model.col_x(i, canon.nurse_of[i])] = 1.0;
    values[model.col_y(i, canon.chair_of[i])] = 1.0;
    for (int j = 0; j < P; ++j) {
      if (i != j && canon.precedence.before(i, j)) {
        values[model.col_u(i, j)] = 1.0;
        const int q = model.col_q(i, j, canon.nurse_of[j]);
        if (q >= 0) values[q] = 1.0;
      }
    }
  }
  const PrecedenceDag dag = PrecedenceDag::build(inst, canon);
  const auto& subset = model.scenario_subset();
  for (int k = 0; k < static_cast<int>(subset.size()); ++k) {
    const ScenarioOutcome outcome = evaluate_scenario(inst, canon, subset[k], dag);
    for (int i = 0; i < P; ++i) values[model.col_w(k, i)] = outcome.waits[i];
    for (int n = 0; n < inst.num_nurses; ++n) values[model.col_o(k, n)] = outcome.overtimes[n];
  }
  return values;
}

MilpResult solve_model(const ModelHandle& model, SolverBackend& backend,
                       const SolveLimits& limits, const FirstStageSolution* hint) {
  const auto t0 = std::chrono::steady_clock::now();
  MilpResult result;
  SolveLimits effective = limits;
  if (hint != nullptr && effective.warm_start.empty()) {
    effective.warm_start = warm_start_values(model, *hint);
  }
  result.raw = backend.solve(model.problem(), effective);
  const BackendSolution& raw = result.raw;

  if (raw.status == SolveStatus::Infeasible) {
    throw InfeasibleError("model is infeasible");
  }
  if (raw.status == SolveStatus::TimeLimitNoIncumbent) {
    throw NoIncumbentError("time limit reached without an incumbent");
  }
  if (raw.status == SolveStatus::Error) {
    throw Error("backend failure: " + raw.detail);
  }

  const Instance& inst = model.instance();
  const int P = inst.num_patients();
  FirstStageSolution& sol = result.solution;
  sol.precedence = PrecedenceMatrix(P);
  for (int i = 0; i < P; ++i) {
    for (int j = i + 1; j < P; ++j) {
      const bool before = raw.values[model.col_u(i, j)] > 0.5;
      sol.precedence.set(i, j, before);
      sol.precedence.set(j, i, !before);
    }
  }
  sol.appointments.resize(P);
  for (int i = 0; i < P; ++i) {
    sol.appointments[i] = std::max(0.0, raw.values[model.col_a(i)]);
  }
  sol.nurse_of.assign(P, -1);
  for (int i = 0; i < P; ++i) {
    double best = -1.0;
    for (int n : inst.eligible_nurses[i]) {
      const double v = raw.values[model.col_x(i, n)];
      if (v > best) {
        best = v;
        sol.nurse_of[i] = n;
      }
    }
  }
  sol.chair_of.assign(P, -1);
  for (int i = 0; i < P; ++i) {
    double best = -1.0;
    for (int c = 0; c < inst.num_chairs; ++c) {
      const double v = raw.values[model.col_y(i, c)];
      if (v > best) {
        best = v;
        sol.chair_of[i] = c;
      }
    }
  }

  const auto violations = validate_first_stage(inst, sol);
  if (!violations.empty()) {
    throw Error("backend returned an invalid first stage: " + violations.front());
  }

  if (hint != nullptr) {
    // The hint is an incumbent too; keep whichever evaluates better.
    const double z_extracted =
        evaluate_expected(inst, sol, model.scenario_subset()).objective;
    const double z_hint = evaluate_expected(inst, *hint, model.scenario_subset()).objective;
    if (z_hint < z_extracted) sol = *hint;
  }

  result.report = evaluate_expected(inst, sol, model.scenario_subset());
  result.report.method = "exact";
  result.report.status = to_string(raw.status);
  result.report.solver_bound = raw.bound;
  {
    std::ostringstream os;
    os << raw.objective;
    result.report.params["solver_objective"] = os.str();
  }
  result.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double evaluate_fixed_first_stage(const Instance& inst, const FirstStageSolution& sol,
                                  const std::vector<int>& scenario_subset) {
  const auto& subset = scenario_subset.empty() ? all_scenarios(inst) : scenario_subset;
  return evaluate_expected(inst, sol, subset).objective;
}

MipProblem build_second_stage_lp(const Instance& inst, const FirstStageSolution& sol,
                                 int scenario) {
  if (scenario < 0 || scenario >= inst.num_scenarios()) {
    throw Error("scenario index out of range");
  }
  const int P = inst.num_patients();
  const auto& t = inst.scenario_durations[scenario];
  const double s = inst.premed_minutes;
  const double lambda = inst.lambda_weight;

  MipProblem lp;
  std::vector<int> w_col(P), o_col(inst.num_nurses);
  for (int i = 0; i < P; ++i) {
    std::ostringstream os;
    os << "w[" << i << "]";
    w_col[i] = lp.add_col(lambda, 0.0, kInfinity, false, os.str());
  }
  for (int n = 0; n < inst.num_nurses; ++n) {
    std::ostringstream os;
    os << "o[" << n << "]";
    o_col[n] = lp.add_col(1.0 - lambda, 0.0, inst.overtime_limit_minutes, false, os.str());
  }

  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j || !sol.precedence.before(i, j)) continue;
      const double base = sol.appointments[i] - sol.appointments[j];
      if (sol.nurse_of[i] == sol.nurse_of[j]) {
        lp.add_row(base + s, kInfinity, std::vector<int>{w_col[j], w_col[i]},
                   std::vector<double>{1.0, -1.0}, "nurse_seq");
      }
      if (sol.chair_of[i] == sol.chair_of[j]) {
        lp.add_row(base + s + t[i], kInfinity, std::vector<int>{w_col[j], w_col[i]},
                   std::vector<double>{1.0, -1.0}, "chair_seq");
      }
    }
  }
  const auto last = last_patient_per_nurse(inst, sol);
  for (int n = 0; n < inst.num_nurses; ++n) {
    const int i = last[n];
    if (i < 0) continue;
    lp.add_row(sol.appointments[i] + s + t[i] - inst.shift_minutes, kInfinity,
               std::vector<int>{o_col[n], w_col[i]}, std::vector<double>{1.0, -1.0},
               "overtime");
  }
  return lp;
}

double evaluate_fixed_first_stage_lp(const Instance& inst, const FirstStageSolution& sol,
                                     const std::vector<int>& scenario_subset,
                                     SolverBackend& backend) {
  const auto& subset = scenario_subset.empty() ? all_scenarios(inst) : scenario_subset;
  if (subset.empty()) throw Error("scenario subset must not be empty");
  double total = 0.0;
  for (int omega : subset) {
    const MipProblem lp = build_second_stage_lp(inst, sol, omega);
    const BackendSolution out = backend.solve(lp, SolveLimits{});
    if (out.status == SolveStatus::Infeasible) {
      std::ostringstream os;
      os << "second stage infeasible in scenario " << omega << " (overtime limit exceeded)";
      throw InfeasibleError(os.str());
    }
    if (!out.has_solution()) throw Error("second-stage LP failed: " + out.detail);
    total += out.objective;
  }
  return total / static_cast<double>(subset.size());
}

FixedStructureLp build_fixed_structure_lp(const Instance& inst, const std::vector<int>& order,
                                          const std::vector<int>& nurse_of,
                                          const std::vector<int>& chair_of,
                                          const std::vector<int>& scenario_subset) {
  const int P = inst.num_patients();
  if (static_cast<int>(order.size()) != P) throw Error("order must cover all patients");
  const auto& subset = scenario_subset.empty() ? all_scenarios(inst) : scenario_subset;
  const int K = static_cast<int>(subset.size());
  const double s = inst.premed_minutes;
  const double lambda = inst.lambda_weight;

  FirstStageSolution shape;
  shape.precedence = PrecedenceMatrix::from_order(order);
  shape.nurse_of = nurse_of;
  shape.chair_of = chair_of;
  shape.appointments.assign(P, 0.0);

  FixedStructureLp out;
  MipProblem& lp = out.problem;
  out.a_cols.resize(P);
  for (int i = 0; i < P; ++i) {
    std::ostringstream os;
    os << "a[" << i << "]";
    out.a_cols[i] = lp.add_col(0.0, 0.0, kInfinity, false, os.str());
  }
  std::vector<int> w_col(K * P), o_col(K * inst.num_nurses);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < P; ++i) {
      w_col[k * P + i] = lp.add_col(lambda / K, 0.0, kInfinity, false, "w");
    }
    for (int n = 0; n < inst.num_nurses; ++n) {
      o_col[k * inst.num_nurses + n] =
          lp.add_col((1.0 - lambda) / K, 0.0, inst.overtime_limit_minutes, false, "o");
    }
  }

  // Appointment order consistency along the fixed sequence.
  for (int p = 0; p + 1 < P; ++p) {
    lp.add_row(0.0, kInfinity, std::vector<int>{out.a_cols[order[p + 1]], out.a_cols[order[p]]},
               std::vector<double>{1.0, -1.0}, "order");
  }

  const auto last = last_patient_per_nurse(inst, shape);
  for (int k = 0; k < K; ++k) {
    const auto& t = inst.scenario_durations[subset[k]];
    for (int i = 0; i < P; ++i) {
      for (int j = 0; j < P; ++j) {
        if (i == j || !shape.precedence.before(i, j)) continue;
        const bool same_nurse = nurse_of[i] == nurse_of[j];
        const bool same_chair = chair_of[i] == chair_of[j];
        if (!same_nurse && !same_chair) continue;
        const double delay = same_chair ? s + t[i] : s;
        lp.add_row(delay, kInfinity,
                   std::vector<int>{out.a_cols[j], w_col[k * P + j], out.a_cols[i],
                                    w_col[k * P + i]},
                   std::vector<double>{1.0, 1.0, -1.0, -1.0}, "seq");
      }
    }
    for (int n = 0; n < inst.num_nurses; ++n) {
      const int i = last[n];
      if (i < 0) continue;
      lp.add_row(s + t[i] - inst.shift_minutes, kInfinity,
                 std::vector<int>{o_col[k * inst.num_nurses + n], out.a_cols[i],
                                  w_col[k * P + i]},
                 std::vector<double>{1.0, -1.0, -1.0}, "overtime");
    }
  }
  return out;
}

}  // namespace chemosched
