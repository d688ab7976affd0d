#pragma once

#include <map>
#include <string>
#include <vector>

#include "chemosched/backend.hpp"
#include "chemosched/types.hpp"

namespace chemosched {

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class NoIncumbentError : public Error {
 public:
  using Error::Error;
};

struct BuildOptions {
  bool integer_appointments = false;    // appointment times as integers instead of continuous
  bool chair_symmetry_breaking = true;  // lexicographic chair usage (chairs are identical)
  bool order_transitivity_cuts = true;  // u(i,j)+u(j,k)-u(i,k) <= 1 strengthening cuts
};

/// The extensive-form model (or a scenario-subset restriction of it),
/// with registries mapping every column to a model symbol instance and
/// every row to its constraint family.
///
/// Families 2..6 are the first-stage constraints, 12..15 the per-scenario
/// second stage. Family 14 keeps one row per (patient, eligible nurse) and
/// scenario but is relaxed, through the family-90 linking columns
/// q(i,j,n) <= u(i,j), q(i,j,n) <= x(j,n), for every patient that is not
/// the nurse's u-last: overtime runs until the finish of the last patient
/// a nurse serves. Family 91 holds the optional chair symmetry cuts.
class ModelHandle {
 public:
  const MipProblem& problem() const { return problem_; }
  MipProblem& problem() { return problem_; }
  const Instance& instance() const { return instance_; }
  const std::vector<int>& scenario_subset() const { return subset_; }
  const BuildOptions& options() const { return options_; }

  int col_u(int i, int j) const { return u_cols_[flat(i, j)]; }
  int col_a(int i) const { return a_cols_[i]; }
  int col_x(int i, int n) const { return x_cols_[i * instance_.num_nurses + n]; }
  int col_y(int i, int c) const { return y_cols_[i * instance_.num_chairs + c]; }
  int col_w(int k, int i) const { return w_cols_[k * instance_.num_patients() + i]; }
  int col_o(int k, int n) const { return o_cols_[k * instance_.num_nurses + n]; }
  int col_q(int i, int j, int n) const {
    return q_cols_[flat(i, j) * instance_.num_nurses + n];
  }

  int count_cols(char symbol) const;
  int count_rows(int family) const;

 private:
  friend ModelHandle build_extensive_form(const Instance&, const std::vector<int>&,
                                          const BuildOptions&);

  int flat(int i, int j) const { return i * instance_.num_patients() + j; }

  Instance instance_;  // owned copy; handles outlive their source instance
  std::vector<int> subset_;
  BuildOptions options_;
  MipProblem problem_;
  std::vector<int> u_cols_, a_cols_, x_cols_, y_cols_, w_cols_, o_cols_, q_cols_;
  std::map<char, int> col_counts_;
  std::map<int, int> row_counts_;
};

/// Extensive form over a non-empty scenario subset: first stage (2)-(10),
/// per-scenario second stage (12)-(15), objective = mean over the subset
/// of lambda*sum(w) + (1-lambda)*sum(o).
///
/// Deactivation constants are row-specific. Every feasible point has
/// treatment starts below H + L (the overtime cap bounds each nurse's last
/// finish, and same-nurse sequencing chains everyone else underneath), so
/// appointments and waits carry that upper bound and each relaxed row only
/// needs slack for the worst start it can see. The instance-level big_m()
/// stays the safe ceiling for all of them.
ModelHandle build_extensive_form(const Instance& inst, const std::vector<int>& scenario_subset,
                                 const BuildOptions& options = {});

/// Column values of a full model point matching a given first stage (waits
/// and overtimes from the evaluator), usable as a MIP warm start.
std::vector<double> warm_start_values(const ModelHandle& model, const FirstStageSolution& sol);

/// Single-scenario model with every duration replaced by its mean over
/// all scenarios of the instance.
ModelHandle build_mean_value_problem(const Instance& inst, const BuildOptions& options = {});

struct MilpResult {
  FirstStageSolution solution;
  SolveReport report;
  BackendSolution raw;
};

/// Solve and extract a validated first stage. The report's objective and
/// wait/overtime are recomputed by the evaluator over the model's own
/// scenario subset (so the weighted-sum identity holds exactly); the raw
/// backend incumbent objective and bound ride along.
///
/// `hint`, when given, is passed to the backend as a MIP start and kept in
/// the incumbent pool: if the extracted solution does not beat it under
/// the exact evaluation, the hint is returned instead. Heuristic-vs-exact
/// gaps measured against a hinted solve are therefore never negative.
MilpResult solve_model(const ModelHandle& model, SolverBackend& backend,
                       const SolveLimits& limits,
                       const FirstStageSolution* hint = nullptr);

/// Expected objective of a fixed first stage over a scenario subset
/// (empty = all scenarios); the closed-form evaluator path.
double evaluate_fixed_first_stage(const Instance& inst, const FirstStageSolution& sol,
                                  const std::vector<int>& scenario_subset = {});

/// Backend-LP path for the same quantity: one second-stage LP per scenario,
/// averaged. Exists to cross-check the evaluator.
double evaluate_fixed_first_stage_lp(const Instance& inst, const FirstStageSolution& sol,
                                     const std::vector<int>& scenario_subset,
                                     SolverBackend& backend);

/// Second-stage LP of one scenario for a fixed first stage (variables w, o).
MipProblem build_second_stage_lp(const Instance& inst, const FirstStageSolution& sol,
                                 int scenario);

/// LP that optimizes appointment times for a fixed (sequence, nurse, chair)
/// structure: variables a, w, o over the given scenario subset. This is the
/// appointment-optimization step of exhaustive enumeration.
struct FixedStructureLp {
  MipProblem problem;
  std::vector<int> a_cols;
};
FixedStructureLp build_fixed_structure_lp(const Instance& inst, const std::vector<int>& order,
                                          const std::vector<int>& nurse_of,
                                          const std::vector<int>& chair_of,
                                          const std::vector<int>& scenario_subset = {});

}  // namespace chemosched
