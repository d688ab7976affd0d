// Acceptance suite: the headline end-to-end behaviors, one PASS/FAIL line
// per criterion. Exits nonzero when any criterion fails. Solver-backed
// criteria take minutes; run through ctest (-R acceptance) or directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chemosched/analysis.hpp"
#include "chemosched/evaluator.hpp"
#include "chemosched/io.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/sampler.hpp"
#include "chemosched/sgbd.hpp"
#include "chemosched/validate.hpp"
#include "support/brute_force.hpp"
#include "support/test_instances.hpp"

using namespace chemosched;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<int> all_scenarios(const Instance& inst) {
  std::vector<int> all(inst.num_scenarios());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

MilpResult exact_solve(const Instance& inst, SolverBackend& backend,
                       const FirstStageSolution* hint = nullptr,
                       const SolveLimits& limits = SolveLimits{}) {
  ModelHandle model = build_extensive_form(inst, all_scenarios(inst));
  const FirstStageSolution fallback = hint ? FirstStageSolution{} : baseline_schedule(inst);
  return solve_model(model, backend, limits, hint ? hint : &fallback);
}

Instance typed_instance(const std::vector<int>& types, int scenarios, std::uint64_t seed,
                        int chairs, int flexibility, double lambda = 0.3) {
  SamplerSpec spec;
  spec.explicit_types = types;
  spec.num_scenarios = scenarios;
  spec.rng_seed = seed;
  ResourceParams base;
  base.num_chairs = chairs;
  base.flexibility_limit = flexibility;
  base.lambda_weight = lambda;
  return sample_instance(spec, base);
}

// ---------------------------------------------------------------- 1 ----
// The worked half-day example: exact waits/overtimes and the weighted
// objective, evaluated in under a millisecond.
bool c1_worked_example(std::string& detail) {
  const Instance inst = testsup::worked_example_instance();
  const FirstStageSolution sol = testsup::worked_example_solution();

  const ScenarioOutcome outcome = evaluate_scenario(inst, sol, 0);
  const std::vector<double> expected_waits{0, 0, 0, 23, 34, 0, 8, 0, 10};
  bool ok = outcome.waits == expected_waits;
  ok = ok && outcome.overtimes == std::vector<double>{59.0, 4.0};
  const SolveReport report = evaluate_expected(inst, sol);
  ok = ok && std::abs(report.objective - 66.6) <= 1e-9;

  const int repeats = 2000;
  const double t0 = now_seconds();
  double checksum = 0.0;
  for (int r = 0; r < repeats; ++r) {
    checksum += evaluate_scenario(inst, sol, 0).cost;
  }
  const double per_eval_ms = (now_seconds() - t0) * 1000.0 / repeats;
  ok = ok && per_eval_ms < 1.0 && checksum > 0.0;

  std::ostringstream os;
  os << "objective " << report.objective << ", " << per_eval_ms << " ms/eval";
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------- 2 ----
// Evaluator vs the second-stage LP on random small triples.
bool c2_lp_oracle(std::string& detail) {
  auto backend = make_highs_backend();
  std::mt19937_64 rng(1234321);
  int compared = 0, over_limit = 0;
  double worst = 0.0;
  while (compared < 200) {
    const Instance inst = testsup::random_instance(rng, 6, 3);
    const FirstStageSolution sol = testsup::random_first_stage(inst, rng);
    const int scenario = static_cast<int>(rng() % inst.num_scenarios());
    const ScenarioOutcome outcome = evaluate_scenario(inst, sol, scenario);
    const MipProblem lp = build_second_stage_lp(inst, sol, scenario);
    const BackendSolution out = backend->solve(lp, SolveLimits{});
    if (!outcome.within_overtime_limit) {
      ++over_limit;
      if (out.status != SolveStatus::Infeasible) return false;
      continue;
    }
    if (out.status != SolveStatus::Optimal) return false;
    worst = std::max(worst, std::abs(out.objective - outcome.cost));
    if (worst > 1e-6) {
      std::ostringstream os;
      os << "disagreement " << worst << " after " << compared << " triples";
      detail = os.str();
      return false;
    }
    ++compared;
  }
  std::ostringstream os;
  os << compared << " triples agree, worst |diff| " << worst << " ("
     << over_limit << " over-limit triples matched by LP infeasibility)";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------- 3 ----
// Exact solver vs exhaustive enumeration with LP-optimized appointments.
bool c3_brute_force(std::string& detail) {
  auto backend = make_highs_backend();
  std::mt19937_64 rng(777000);
  double worst = 0.0;
  for (int round = 0; round < 20; ++round) {
    SamplerSpec spec;
    spec.num_patients = round < 12 ? 3 : 4;
    spec.num_scenarios = 2 + static_cast<int>(rng() % 2);
    spec.rng_seed = 9000 + round;
    ResourceParams base;
    base.num_chairs = 2;
    base.num_nurses = 2;
    base.flexibility_limit = static_cast<int>(rng() % 3);
    base.lambda_weight = 0.1 + 0.2 * static_cast<double>(round % 5);
    const Instance inst = sample_instance(spec, base);

    const testsup::BruteForceResult oracle = testsup::brute_force_optimum(inst, *backend);
    const MilpResult exact = exact_solve(inst, *backend);
    worst = std::max(worst, std::abs(oracle.objective - exact.report.objective));
    if (worst > 1e-5) {
      std::ostringstream os;
      os << "instance " << round << ": enumeration " << oracle.objective << " vs solver "
         << exact.report.objective;
      detail = os.str();
      return false;
    }
  }
  std::ostringstream os;
  os << "20 instances, worst |diff| " << worst;
  detail = os.str();
  return true;
}

// ------------------------------------------------------------- 4, 6 ----
// F-SGBD quality against exact optima, and dominance over the clinic
// baseline, on the same ten congested desk-scale instances.
struct Desk {
  std::vector<double> gaps_percent;
  std::vector<double> ratios;
  bool solved = false;
};
Desk desk_runs;

const std::vector<std::vector<int>> kDeskTypeSets = {
    {4, 3, 4, 3, 4, 3}, {4, 4, 3, 3, 4, 2}, {3, 4, 4, 3, 3, 4},
    {4, 3, 3, 4, 2, 4}, {4, 4, 4, 3, 3, 3},
};

void run_desk_instances() {
  if (desk_runs.solved) return;
  for (std::uint64_t seed = 201; seed <= 210; ++seed) {
    const Instance inst = typed_instance(kDeskTypeSets[seed % kDeskTypeSets.size()], 16, seed,
                                         3, (seed % 2) ? 1 : 2);
    MethodSpec sgbd_spec;
    sgbd_spec.method = "f-sgbd";
    sgbd_spec.group_size = 4;
    sgbd_spec.grouping_seed = seed;
    sgbd_spec.jobs = 2;
    const MethodResult sgbd = solve_with_method(inst, sgbd_spec, make_highs_backend);

    auto backend = make_highs_backend();
    SolveLimits loose;
    loose.primal_tolerance = 1e-7;
    loose.dual_tolerance = 1e-7;
    loose.integrality_tolerance = 1e-6;
    const MilpResult exact = exact_solve(inst, *backend, &sgbd.solution, loose);

    desk_runs.gaps_percent.push_back(
        100.0 * (sgbd.report.objective - exact.report.objective) / exact.report.objective);
    const double z_base = evaluate_expected(inst, baseline_schedule(inst)).objective;
    desk_runs.ratios.push_back(z_base / exact.report.objective);
  }
  desk_runs.solved = true;
}

bool c4_sgbd_quality(std::string& detail) {
  run_desk_instances();
  double mean = 0.0, low = 1e300;
  for (double g : desk_runs.gaps_percent) {
    mean += g;
    low = std::min(low, g);
  }
  mean /= static_cast<double>(desk_runs.gaps_percent.size());
  std::ostringstream os;
  os << "mean gap " << mean << "%, min " << low << "%, max "
     << *std::max_element(desk_runs.gaps_percent.begin(), desk_runs.gaps_percent.end()) << "%";
  detail = os.str();
  return desk_runs.gaps_percent.size() == 10 && mean <= 5.0 && low >= -1e-6;
}

bool c6_baseline_dominance(std::string& detail) {
  run_desk_instances();
  double mean_ratio = 0.0;
  bool each = true;
  for (double r : desk_runs.ratios) {
    mean_ratio += r;
    each = each && r > 1.0;
  }
  mean_ratio /= static_cast<double>(desk_runs.ratios.size());
  std::ostringstream os;
  os << "baseline/optimized mean " << mean_ratio << ", min "
     << *std::min_element(desk_runs.ratios.begin(), desk_runs.ratios.end());
  detail = os.str();
  return each && mean_ratio > 1.5;
}

// ---------------------------------------------------------------- 5 ----
// Grouping hand traces and the partition property.
bool c5_grouping(std::string& detail) {
  const Instance ladder =
      testsup::make_instance(1, 1, 1, {{0.0}, {1.0}, {10.0}, {11.0}}, 0.3, 0);
  std::uint64_t seed0 = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    if (std::mt19937_64(s)() % 4 == 0) {
      seed0 = s;
      break;
    }
  }
  auto set_of = [](const std::vector<int>& v) { return std::set<int>(v.begin(), v.end()); };
  const GroupingPlan furthest = group_furthest(ladder, 2, seed0);
  bool ok = set_of(furthest.groups[0]) == std::set<int>{0, 3} &&
            set_of(furthest.groups[1]) == std::set<int>{1, 2};
  const GroupingPlan closest = group_closest(ladder, 2, seed0);
  ok = ok && set_of(closest.groups[0]) == std::set<int>{0, 1} &&
       set_of(closest.groups[1]) == std::set<int>{2, 3};

  std::mt19937_64 rng(5150);
  std::vector<std::vector<double>> rows(23, std::vector<double>(3));
  for (auto& r : rows) {
    for (auto& t : r) t = 10.0 + static_cast<double>(rng() % 300);
  }
  const Instance wide = testsup::make_instance(3, 1, 1, rows, 0.3, 0);
  for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
    for (auto maker : {group_furthest, group_closest, group_random}) {
      const GroupingPlan plan = maker(wide, 5, seed);
      std::vector<int> seen(23, 0);
      for (const auto& g : plan.groups) {
        for (int w : g) ++seen[w];
      }
      for (int h : seen) ok = ok && h == 1;
    }
  }
  detail = ok ? "hand traces exact; 300 plans are disjoint covers" : "mismatch";
  return ok;
}

// ---------------------------------------------------------------- 7 ----
// Flexibility: objective non-increasing in J, strict gain J=0 -> 1 on at
// least half the instances.
bool c7_flexibility(std::string& detail) {
  auto backend = make_highs_backend();
  const std::vector<std::uint64_t> seeds{302, 303, 306, 307, 308, 310, 312, 301};
  int strict = 0;
  bool monotone = true;
  for (std::uint64_t seed : seeds) {
    SamplerSpec spec;
    spec.num_patients = 5;
    spec.num_scenarios = 6;
    spec.rng_seed = seed;
    ResourceParams base;
    base.num_chairs = 2;
    auto z_at = [&](int J) {
      base.flexibility_limit = J;
      return exact_solve(sample_instance(spec, base), *backend).report.objective;
    };
    const double z0 = z_at(0), z1 = z_at(1), z_free = z_at(5);
    monotone = monotone && z0 >= z1 - 1e-6 && z1 >= z_free - 1e-6;
    if (z0 - z1 > 1e-6) ++strict;
  }
  std::ostringstream os;
  os << "monotone on " << seeds.size() << " instances, strict J=0->1 gain on " << strict;
  detail = os.str();
  return monotone && strict * 2 >= static_cast<int>(seeds.size());
}

// ---------------------------------------------------------------- 8 ----
// Cost-weight trend: mean optimal wait falls, overtime rises with lambda.
bool c8_lambda_trend(std::string& detail) {
  auto backend = make_highs_backend();
  const std::vector<double> lambdas{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<std::uint64_t> seeds{302, 303, 306, 308, 310, 312};
  std::vector<double> mean_wait(lambdas.size(), 0.0), mean_overtime(lambdas.size(), 0.0);
  for (std::uint64_t seed : seeds) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      SamplerSpec spec;
      spec.num_patients = 5;
      spec.num_scenarios = 6;
      spec.rng_seed = seed;
      ResourceParams base;
      base.num_chairs = 2;
      base.flexibility_limit = 1;
      base.lambda_weight = lambdas[k];
      const MilpResult r = exact_solve(sample_instance(spec, base), *backend);
      mean_wait[k] += r.report.expected_wait;
      mean_overtime[k] += r.report.expected_overtime;
    }
  }
  bool ok = true;
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    ok = ok && mean_wait[k] <= mean_wait[k - 1] + 1e-6;
    ok = ok && mean_overtime[k] >= mean_overtime[k - 1] - 1e-6;
  }
  std::ostringstream os;
  os << "wait " << mean_wait.front() / seeds.size() << " -> " << mean_wait.back() / seeds.size()
     << ", overtime " << mean_overtime.front() / seeds.size() << " -> "
     << mean_overtime.back() / seeds.size();
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------- 9 ----
// Value of the stochastic solution: zero without uncertainty, positive on
// at least 8 of 10 stochastic instances.
bool c9_vss(std::string& detail) {
  const std::vector<double> row{120.0, 60.0, 90.0, 45.0};
  Instance certain = testsup::make_instance(4, 2, 2, {row, row, row}, 0.3, 1);
  MethodSpec exact_spec;
  exact_spec.method = "exact";
  const VssResult fixed_case = compute_vss(certain, exact_spec, make_highs_backend);
  if (std::abs(fixed_case.vss_percent) > 1e-6) {
    detail = "nonzero VSS on a deterministic instance";
    return false;
  }

  int positive = 0;
  double mean = 0.0;
  for (std::uint64_t seed = 501; seed <= 510; ++seed) {
    SamplerSpec spec;
    spec.num_patients = 5;
    spec.num_scenarios = 8;
    spec.rng_seed = seed;
    ResourceParams base;
    base.num_chairs = 2;
    base.flexibility_limit = 1;
    const Instance inst = sample_instance(spec, base);
    const VssResult vss = compute_vss(inst, exact_spec, make_highs_backend);
    if (vss.vss_percent > 0.0 && vss.z_mean_value > vss.z_stochastic) ++positive;
    mean += vss.vss_percent;
  }
  std::ostringstream os;
  os << "VSS(deterministic) = " << fixed_case.vss_percent << "; positive on " << positive
     << "/10, mean " << mean / 10.0 << "%";
  detail = os.str();
  return positive >= 8;
}

// --------------------------------------------------------------- 10 ----
// Byte-level determinism of the CLI: instances, plans, reports.
#ifndef ACCEPTANCE_CLI_PATH
#define ACCEPTANCE_CLI_PATH "chemosched"
#endif

bool c10_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  const char* env = std::getenv("CHEMOSCHED_CLI");
  const std::string cli = env && *env ? env : ACCEPTANCE_CLI_PATH;
  const fs::path work = fs::temp_directory_path() / "chemosched_acceptance_c10";
  fs::remove_all(work);
  fs::create_directories(work);

  auto run = [&](const std::string& args) {
    const std::string cmd = "cd " + work.string() + " && " + cli + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  auto same = [&](const char* a, const char* b) {
    return read_text_file((work / a).string()) == read_text_file((work / b).string());
  };

  bool ok = true;
  ok = ok && run("sample --patients 4 --scenarios 6 --seed 99 --chairs 2 --out s_a");
  ok = ok && run("sample --patients 4 --scenarios 6 --seed 99 --chairs 2 --out s_b");
  ok = ok && same("s_a/instance_01.json", "s_b/instance_01.json");
  ok = ok && same("s_a/manifest.json", "s_b/manifest.json");

  ok = ok && run("groups --instance s_a/instance_01.json --method f-sgbd --group-size 2 "
                 "--grouping-seed 5 --out g_a");
  ok = ok && run("groups --instance s_a/instance_01.json --method f-sgbd --group-size 2 "
                 "--grouping-seed 5 --out g_b");
  ok = ok && same("g_a/plan.json", "g_b/plan.json");

  ok = ok && run("solve --instance s_a/instance_01.json --method f-sgbd --group-size 2 "
                 "--grouping-seed 5 --out r_a");
  ok = ok && run("solve --instance s_a/instance_01.json --method f-sgbd --group-size 2 "
                 "--grouping-seed 5 --out r_b");
  ok = ok && same("r_a/report.json", "r_b/report.json");
  ok = ok && same("r_a/solution.json", "r_b/solution.json");
  ok = ok && same("r_a/plan.json", "r_b/plan.json");
  ok = ok && same("r_a/manifest.json", "r_b/manifest.json");

  fs::remove_all(work);
  detail = ok ? "instances, plans, reports byte-identical across reruns"
              : "byte difference between reruns";
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "worked-example golden values", 1.0, c1_worked_example},
    {2, "evaluator matches the second-stage LP (200 triples)", 120.0, c2_lp_oracle},
    {3, "exact solver matches exhaustive enumeration (20 instances)", 600.0, c3_brute_force},
    {4, "F-SGBD mean gap <= 5% vs exact (10 instances)", 1800.0, c4_sgbd_quality},
    {5, "grouping hand traces and partition property", 1.0, c5_grouping},
    {6, "optimized schedules dominate the clinic baseline", 1800.0, c6_baseline_dominance},
    {7, "objective non-increasing in the flexibility budget", 900.0, c7_flexibility},
    {8, "waits fall and overtimes rise with lambda", 900.0, c8_lambda_trend},
    {9, "value of the stochastic solution", 900.0, c9_vss},
    {10, "byte-identical reruns", 300.0, c10_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  double shared_desk_time = 0.0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    const double t0 = now_seconds();
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = now_seconds() - t0;
    if (c.id == 4) shared_desk_time = elapsed;  // criterion 6 reuses these solves
    if (c.id == 6) elapsed += shared_desk_time;
    const bool in_budget = elapsed <= c.budget_seconds;
    if (!in_budget && detail.find("budget") == std::string::npos) {
      detail += " [over budget]";
    }
    ok = ok && in_budget;
    std::printf("criterion %2d %s  %s (%s) [%.2fs]\n", c.id, ok ? "PASS" : "FAIL", c.name,
                detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
