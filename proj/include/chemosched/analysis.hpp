#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chemosched/backend.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/sampler.hpp"
#include "chemosched/sgbd.hpp"
#include "chemosched/types.hpp"

namespace chemosched {

/// The clinic's two-slot rule: patients sorted by expected infusion
/// duration (typed patients use their interval midpoint, untyped the
/// scenario mean), longer treatments first; the first ceil(P/2) arrive at
/// minute 0, the rest at minute 150. Nurses stay primary; chairs go
/// first-fit to the chair with the earliest expected availability.
FirstStageSolution baseline_schedule(const Instance& inst);

/// How a single instance gets solved: drives the CLI, VSS and the sweeps.
struct MethodSpec {
  std::string method = "exact";  // exact | f-sgbd | c-sgbd | r-sgbd | p-sgbd | baseline | mvp
  int group_size = 8;            // Z, static SGBD variants
  int merge_factor = 2;          // alpha, progressive variant
  int iteration_limit = 4;       // T, progressive variant
  std::uint64_t grouping_seed = 0;
  SolveLimits limits;  // total wall budget; SGBD divides it across subproblems
  BuildOptions build;
  int jobs = 1;
};

struct MethodResult {
  FirstStageSolution solution;
  SolveReport report;
  std::optional<GroupingPlan> plan;  // static SGBD methods only
};

MethodResult solve_with_method(const Instance& inst, const MethodSpec& spec,
                               const BackendFactory& make_backend);

struct VssResult {
  double z_stochastic = 0.0;  // objective of the stochastic solve
  double z_mean_value = 0.0;  // mean-value first stage evaluated on all scenarios
  double vss_percent = 0.0;   // 100 * (z_mean_value - z_stochastic) / z_mean_value
  SolveReport stochastic_report;
  SolveReport mean_value_report;
};

/// Solve the stochastic model (exact or an SGBD variant per `spec`), then
/// the mean value problem; evaluate the MVP first stage over the full
/// scenario set and report the relative improvement.
VssResult compute_vss(const Instance& inst, const MethodSpec& spec,
                      const BackendFactory& make_backend);

struct SweepSpec {
  std::string parameter;  // J | lambda | nurses | chairs
  std::vector<double> values;
  std::vector<std::uint64_t> instance_seeds;
  SamplerSpec sampler;  // template; rng_seed is replaced per instance
  ResourceParams base;
  MethodSpec method;
};

struct SweepRow {
  double value = 0.0;
  double mean_objective = 0.0;
  double mean_wait = 0.0;
  double mean_overtime = 0.0;
  int instances_solved = 0;
  int instances_failed = 0;
};

std::vector<std::string> validate_sweep_spec(const SweepSpec& spec);

/// Re-sample and re-solve every (value, seed) point; per-point failures are
/// counted and the sweep continues. Rows average over the solved instances.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const BackendFactory& make_backend);

/// Comma-separated table, one row per swept value.
std::string sweep_table_csv(const std::string& parameter, const std::vector<SweepRow>& rows);

}  // namespace chemosched
