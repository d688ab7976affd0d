#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chemosched/analysis.hpp"
#include "chemosched/evaluator.hpp"

namespace chemosched {

namespace {

// Number of subproblem solves a method will issue, for dividing the total
// wall budget (the paper-style cap is a whole-run cap).
int planned_subproblems(const Instance& inst, const MethodSpec& spec) {
  if (spec.method == "p-sgbd") {
    int total = 0;
    int ng = inst.num_scenarios();
    for (int iter = 1; iter <= spec.iteration_limit; ++iter) {
      total += ng;
      ng = (ng + spec.merge_factor - 1) / spec.merge_factor;
    }
    return total;
  }
  const int Z = std::max(1, spec.group_size);
  return (inst.num_scenarios() + Z - 1) / Z;
}

SgbdOptions sgbd_options_for(const Instance& inst, const MethodSpec& spec) {
  SgbdOptions options;
  options.build = spec.build;
  options.jobs = spec.jobs;
  options.subproblem_limits = spec.limits;
  const int n = std::max(1, planned_subproblems(inst, spec));
  options.subproblem_limits.time_limit_seconds =
      spec.limits.time_limit_seconds / static_cast<double>(n);
  return options;
}

}  // namespace

MethodResult solve_with_method(const Instance& inst, const MethodSpec& spec,
                               const BackendFactory& make_backend) {
  MethodResult result;
  if (spec.method == "exact") {
    std::vector<int> all(inst.num_scenarios());
    std::iota(all.begin(), all.end(), 0);
    ModelHandle model = build_extensive_form(inst, all, spec.build);
    auto backend = make_backend();
    const FirstStageSolution hint = baseline_schedule(inst);
    MilpResult r = solve_model(model, *backend, spec.limits, &hint);
    result.solution = std::move(r.solution);
    result.report = std::move(r.report);
    return result;
  }
  if (spec.method == "f-sgbd" || spec.method == "c-sgbd" || spec.method == "r-sgbd") {
    GroupingPlan plan;
    if (spec.method == "f-sgbd") {
      plan = group_furthest(inst, spec.group_size, spec.grouping_seed);
    } else if (spec.method == "c-sgbd") {
      plan = group_closest(inst, spec.group_size, spec.grouping_seed);
    } else {
      plan = group_random(inst, spec.group_size, spec.grouping_seed);
    }
    SgbdResult r = run_static_sgbd(inst, plan, make_backend, sgbd_options_for(inst, spec));
    result.solution = std::move(r.solution);
    result.report = std::move(r.report);
    result.plan = std::move(plan);
    return result;
  }
  if (spec.method == "p-sgbd") {
    SgbdResult r = run_progressive_sgbd(inst, spec.merge_factor, spec.iteration_limit,
                                        make_backend, sgbd_options_for(inst, spec));
    result.solution = std::move(r.solution);
    result.report = std::move(r.report);
    return result;
  }
  if (spec.method == "baseline") {
    const auto t0 = std::chrono::steady_clock::now();
    result.solution = baseline_schedule(inst);
    result.report = evaluate_expected(inst, result.solution);
    result.report.method = "baseline";
    result.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }
  if (spec.method == "mvp") {
    const auto t0 = std::chrono::steady_clock::now();
    ModelHandle model = build_mean_value_problem(inst, spec.build);
    auto backend = make_backend();
    const FirstStageSolution hint = baseline_schedule(model.instance());
    MilpResult r = solve_model(model, *backend, spec.limits, &hint);
    result.solution = std::move(r.solution);
    // Report the mean-value first stage measured on the real scenario set.
    result.report = evaluate_expected(inst, result.solution);
    result.report.method = "mvp";
    result.report.status = r.report.status;
    result.report.params["mvp_model_objective"] = nlohmann::json(r.report.objective).dump();
    result.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }
  throw InvalidArgumentError("unknown method: " + spec.method);
}

VssResult compute_vss(const Instance& inst, const MethodSpec& spec,
                      const BackendFactory& make_backend) {
  if (spec.method != "exact" && spec.method.find("sgbd") == std::string::npos) {
    throw InvalidArgumentError("the stochastic side of a VSS run must use exact or an SGBD method");
  }
  VssResult out;
  MethodResult stochastic = solve_with_method(inst, spec, make_backend);
  out.stochastic_report = stochastic.report;
  out.z_stochastic = stochastic.report.objective;

  MethodSpec mvp = spec;
  mvp.method = "mvp";
  MethodResult mean_value = solve_with_method(inst, mvp, make_backend);
  out.mean_value_report = mean_value.report;
  out.z_mean_value = mean_value.report.objective;

  out.vss_percent = std::abs(out.z_mean_value) < 1e-12
                        ? 0.0
                        : 100.0 * (out.z_mean_value - out.z_stochastic) / out.z_mean_value;
  return out;
}

std::vector<std::string> validate_sweep_spec(const SweepSpec& spec) {
  std::vector<std::string> out;
  const bool known = spec.parameter == "J" || spec.parameter == "lambda" ||
                     spec.parameter == "nurses" || spec.parameter == "chairs";
  if (!known) out.push_back("parameter: must be one of J, lambda, nurses, chairs");
  if (spec.values.empty()) out.push_back("values: at least one value required");
  if (spec.instance_seeds.empty()) out.push_back("instance_seeds: at least one seed required");
  for (double v : spec.values) {
    if (spec.parameter == "lambda") {
      if (v < 0.0 || v > 1.0) out.push_back("values: lambda must lie in [0,1]");
    } else {
      if (v < 0.0 || v != std::floor(v)) {
        out.push_back("values: " + spec.parameter + " takes nonnegative integers");
      }
      if ((spec.parameter == "nurses" || spec.parameter == "chairs") && v < 1.0) {
        out.push_back("values: " + spec.parameter + " must be at least 1");
      }
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const BackendFactory& make_backend) {
  const auto problems = validate_sweep_spec(spec);
  if (!problems.empty()) throw InvalidArgumentError("invalid sweep spec: " + problems.front());

  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    SweepRow row;
    row.value = value;
    double objective = 0.0, wait = 0.0, overtime = 0.0;
    for (std::uint64_t seed : spec.instance_seeds) {
      SamplerSpec sampler = spec.sampler;
      sampler.rng_seed = seed;
      ResourceParams base = spec.base;
      if (spec.parameter == "J") base.flexibility_limit = static_cast<int>(value);
      if (spec.parameter == "lambda") base.lambda_weight = value;
      if (spec.parameter == "nurses") base.num_nurses = static_cast<int>(value);
      if (spec.parameter == "chairs") base.num_chairs = static_cast<int>(value);
      try {
        const Instance inst = sample_instance(sampler, base);
        const MethodResult solved = solve_with_method(inst, spec.method, make_backend);
        objective += solved.report.objective;
        wait += solved.report.expected_wait;
        overtime += solved.report.expected_overtime;
        ++row.instances_solved;
      } catch (const Error&) {
        ++row.instances_failed;
      }
    }
    if (row.instances_solved > 0) {
      row.mean_objective = objective / row.instances_solved;
      row.mean_wait = wait / row.instances_solved;
      row.mean_overtime = overtime / row.instances_solved;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_table_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << parameter << ",mean_objective,mean_waiting_time,mean_overtime,instances_solved,"
     << "instances_failed\n";
  auto num = [](double v) { return nlohmann::json(v).dump(); };
  for (const auto& row : rows) {
    os << num(row.value) << "," << num(row.mean_objective) << "," << num(row.mean_wait) << ","
       << num(row.mean_overtime) << "," << row.instances_solved << "," << row.instances_failed
       << "\n";
  }
  return os.str();
}

}  // namespace chemosched
