#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "chemosched/evaluator.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/sampler.hpp"
#include "chemosched/validate.hpp"
#include "support/brute_force.hpp"
#include "support/test_instances.hpp"

using namespace chemosched;

namespace {

std::vector<int> all_scenarios(const Instance& inst) {
  std::vector<int> all(inst.num_scenarios());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

SolverBackend& shared_backend() {
  static std::unique_ptr<SolverBackend> backend = make_highs_backend();
  return *backend;
}

}  // namespace

TEST_CASE("extensive form has the published variable and constraint counts") {
  SamplerSpec spec;
  spec.explicit_types = paper_instance_types(1);
  spec.num_scenarios = 2;
  spec.rng_seed = 1;
  const Instance inst = sample_instance(spec, ResourceParams{});  // |P|=9, |N|=2, |C|=3

  const ModelHandle one = build_extensive_form(inst, {0});
  CHECK(one.count_cols('u') == 72);    // |P|(|P|-1)
  CHECK(one.count_cols('a') == 9);
  CHECK(one.count_cols('x') == 18);    // sum of |N_i|
  CHECK(one.count_cols('y') == 27);    // |P||C|
  CHECK(one.count_cols('w') == 9);     // per scenario
  CHECK(one.count_cols('o') == 2);
  CHECK(one.count_rows(2) == 36);      // C(9,2)
  CHECK(one.count_rows(3) == 72);
  CHECK(one.count_rows(4) == 9);
  CHECK(one.count_rows(5) == 9);
  CHECK(one.count_rows(6) == 1);
  CHECK(one.count_rows(12) == 144);    // pairs sharing an eligible nurse
  CHECK(one.count_rows(13) == 216);    // |P|(|P|-1)|C|
  CHECK(one.count_rows(14) == 18);     // sum of |N_i| per scenario
  CHECK(one.count_rows(15) == 2);      // overtime caps (column bounds)

  const ModelHandle two = build_extensive_form(inst, {0, 1});
  CHECK(two.count_cols('w') == 18);
  CHECK(two.count_cols('o') == 4);
  CHECK(two.count_rows(13) == 432);
  CHECK(two.count_rows(2) == 36);  // first stage does not scale with scenarios

  CHECK_THROWS_AS(build_extensive_form(inst, {}), Error);
  CHECK_THROWS_AS(build_extensive_form(inst, {7}), Error);
}

TEST_CASE("two patients forced onto one nurse and chair sit 75 minutes apart") {
  Instance inst = testsup::make_instance(2, 1, 1, {{60.0, 60.0}}, 0.5, 2);
  const ModelHandle model = build_extensive_form(inst, {0});
  const MilpResult result = solve_model(model, shared_backend(), SolveLimits{});
  CHECK(result.report.status == "optimal");
  CHECK(result.report.objective == doctest::Approx(0.0).epsilon(1e-9));
  const double gap = std::abs(result.solution.appointments[0] - result.solution.appointments[1]);
  CHECK(gap >= 75.0 - 1e-6);
  CHECK(validate_first_stage(inst, result.solution).empty());
}

TEST_CASE("tiny extensive form solves to proven optimality") {
  SamplerSpec spec;
  spec.num_patients = 3;
  spec.num_scenarios = 2;
  spec.rng_seed = 4;
  const Instance inst = sample_instance(spec, ResourceParams{});
  const ModelHandle model = build_extensive_form(inst, all_scenarios(inst));
  const MilpResult result = solve_model(model, shared_backend(), SolveLimits{});
  CHECK(result.report.status == "optimal");
  REQUIRE(result.report.solver_bound.has_value());
  CHECK(result.report.objective ==
        doctest::Approx(*result.report.solver_bound).epsilon(1e-6));
  CHECK(validate_first_stage(inst, result.solution).empty());
}

TEST_CASE("fixed first stage: evaluator path and backend-LP path agree") {
  SUBCASE("worked example") {
    const Instance inst = testsup::worked_example_instance();
    const FirstStageSolution sol = testsup::worked_example_solution();
    CHECK(evaluate_fixed_first_stage(inst, sol, {0}) == doctest::Approx(66.6).epsilon(1e-12));
    CHECK(evaluate_fixed_first_stage_lp(inst, sol, {0}, shared_backend()) ==
          doctest::Approx(66.6).epsilon(1e-7));
  }
  SUBCASE("random instances") {
    std::mt19937_64 rng(2025);
    int compared = 0;
    for (int round = 0; round < 16; ++round) {
      const Instance inst = testsup::random_instance(rng, 5, 2);
      const FirstStageSolution sol = testsup::random_first_stage(inst, rng);
      if (!evaluate_expected(inst, sol).scenarios_over_limit.empty()) {
        // over the overtime cap: the LP must agree by being infeasible
        CHECK_THROWS_AS(
            evaluate_fixed_first_stage_lp(inst, sol, all_scenarios(inst), shared_backend()),
            InfeasibleError);
        continue;
      }
      const double via_recursion = evaluate_fixed_first_stage(inst, sol);
      const double via_lp =
          evaluate_fixed_first_stage_lp(inst, sol, all_scenarios(inst), shared_backend());
      CHECK(via_recursion == doctest::Approx(via_lp).epsilon(1e-6));
      ++compared;
    }
    CHECK(compared >= 8);
  }
  SUBCASE("full-set call equals evaluate_expected") {
    const Instance inst = testsup::worked_example_instance();
    const FirstStageSolution sol = testsup::worked_example_solution();
    CHECK(evaluate_fixed_first_stage(inst, sol) ==
          evaluate_expected(inst, sol).objective);
  }
}

TEST_CASE("mean value problem") {
  SUBCASE("durations become scenario means") {
    const Instance inst = testsup::make_instance(1, 1, 1, {{100.0}, {140.0}}, 0.3, 0);
    const ModelHandle mvp = build_mean_value_problem(inst);
    REQUIRE(mvp.instance().num_scenarios() == 1);
    CHECK(mvp.instance().scenario_durations[0][0] == doctest::Approx(120.0));
  }
  SUBCASE("single-scenario instance gives the extensive form itself") {
    const Instance inst = testsup::worked_example_instance();
    const ModelHandle mvp = build_mean_value_problem(inst);
    const ModelHandle ef = build_extensive_form(inst, {0});
    CHECK(mvp.problem().cost == ef.problem().cost);
    CHECK(mvp.problem().row_lower == ef.problem().row_lower);
    CHECK(mvp.problem().row_upper == ef.problem().row_upper);
    CHECK(mvp.problem().coeff == ef.problem().coeff);
    CHECK(mvp.problem().col_index == ef.problem().col_index);
  }
}

TEST_CASE("relaxing the flexibility budget never hurts") {
  SamplerSpec spec;
  spec.num_patients = 4;
  spec.num_scenarios = 2;
  spec.rng_seed = 12;
  ResourceParams base;
  base.num_chairs = 2;
  base.flexibility_limit = 0;
  const Instance rigid = sample_instance(spec, base);
  base.flexibility_limit = 4;
  const Instance flexible = sample_instance(spec, base);

  const double z_rigid =
      solve_model(build_extensive_form(rigid, all_scenarios(rigid)), shared_backend(),
                  SolveLimits{})
          .report.objective;
  const double z_flexible =
      solve_model(build_extensive_form(flexible, all_scenarios(flexible)), shared_backend(),
                  SolveLimits{})
          .report.objective;
  CHECK(z_flexible <= z_rigid + 1e-6);
}

TEST_CASE("restricting scenarios then re-evaluating is never better than the full solve") {
  SamplerSpec spec;
  spec.num_patients = 4;
  spec.num_scenarios = 4;
  spec.rng_seed = 21;
  ResourceParams base;
  base.num_chairs = 2;
  base.flexibility_limit = 1;
  const Instance inst = sample_instance(spec, base);

  const MilpResult full =
      solve_model(build_extensive_form(inst, all_scenarios(inst)), shared_backend(),
                  SolveLimits{});
  const MilpResult partial =
      solve_model(build_extensive_form(inst, {0, 1}), shared_backend(), SolveLimits{});
  const double partial_on_full = evaluate_fixed_first_stage(inst, partial.solution);
  CHECK(partial_on_full >= full.report.objective - 1e-6);
}

TEST_CASE("chair labels are interchangeable") {
  SamplerSpec spec;
  spec.num_patients = 4;
  spec.num_scenarios = 2;
  spec.rng_seed = 33;
  ResourceParams base;
  base.num_chairs = 2;
  const Instance inst = sample_instance(spec, base);
  const MilpResult result = solve_model(build_extensive_form(inst, all_scenarios(inst)),
                                        shared_backend(), SolveLimits{});
  FirstStageSolution swapped = result.solution;
  for (auto& c : swapped.chair_of) c = 1 - c;
  CHECK(validate_first_stage(inst, swapped).empty());
  CHECK(evaluate_expected(inst, swapped).objective ==
        doctest::Approx(result.report.objective).epsilon(1e-12));
}

TEST_CASE("brute force agrees with the solver on a small instance") {
  SamplerSpec spec;
  spec.num_patients = 3;
  spec.num_scenarios = 2;
  spec.rng_seed = 55;
  ResourceParams base;
  base.num_chairs = 2;
  base.flexibility_limit = 1;
  const Instance inst = sample_instance(spec, base);
  const testsup::BruteForceResult oracle = testsup::brute_force_optimum(inst, shared_backend());
  const MilpResult solver = solve_model(build_extensive_form(inst, all_scenarios(inst)),
                                        shared_backend(), SolveLimits{});
  CHECK(solver.report.objective == doctest::Approx(oracle.objective).epsilon(1e-5));
}

TEST_CASE("integer appointment mode") {
  SamplerSpec spec;
  spec.num_patients = 3;
  spec.num_scenarios = 2;
  spec.rng_seed = 8;
  ResourceParams base;
  base.num_chairs = 2;
  const Instance inst = sample_instance(spec, base);
  BuildOptions options;
  options.integer_appointments = true;
  const MilpResult result = solve_model(build_extensive_form(inst, all_scenarios(inst), options),
                                        shared_backend(), SolveLimits{});
  for (double a : result.solution.appointments) {
    CHECK(std::abs(a - std::round(a)) < 1e-6);
  }
}

TEST_CASE("infeasible overtime cap raises InfeasibleError") {
  Instance inst = testsup::make_instance(1, 1, 1, {{300.0}}, 0.5, 0);
  inst.overtime_limit_minutes = 0.0;  // finish is at least 315 > 240
  CHECK_THROWS_AS(
      solve_model(build_extensive_form(inst, {0}), shared_backend(), SolveLimits{}),
      InfeasibleError);
}

TEST_CASE("warm start vector matches the model and does not change the optimum") {
  SamplerSpec spec;
  spec.num_patients = 4;
  spec.num_scenarios = 3;
  spec.rng_seed = 77;
  ResourceParams base;
  base.num_chairs = 2;
  const Instance inst = sample_instance(spec, base);
  const ModelHandle model = build_extensive_form(inst, all_scenarios(inst));

  std::mt19937_64 rng(3);
  const FirstStageSolution hint = testsup::random_first_stage(inst, rng);
  const std::vector<double> values = warm_start_values(model, hint);
  CHECK(static_cast<int>(values.size()) == model.problem().num_cols());

  SolveLimits plain, warmed;
  warmed.warm_start = values;
  const double z_plain = solve_model(model, shared_backend(), plain).report.objective;
  const double z_warm = solve_model(model, shared_backend(), warmed).report.objective;
  CHECK(z_plain == doctest::Approx(z_warm).epsilon(1e-6));
}

TEST_CASE("MPS export of the extensive form") {
  const Instance inst = testsup::worked_example_instance();
  const ModelHandle model = build_extensive_form(inst, {0});
  const auto path = std::filesystem::temp_directory_path() / "chemosched_ef.mps";
  shared_backend().export_mps(model.problem(), path.string());
  REQUIRE(std::filesystem::exists(path));
  CHECK(std::filesystem::file_size(path) > 1000);
  std::filesystem::remove(path);
}
