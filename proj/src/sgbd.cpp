#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "chemosched/analysis.hpp"
#include "chemosched/evaluator.hpp"
#include "chemosched/sgbd.hpp"
#include "chemosched/validate.hpp"

namespace chemosched {

namespace {

struct Candidate {
  bool valid = false;
  FirstStageSolution solution;
  double objective = std::numeric_limits<double>::quiet_NaN();  // over the full scenario set
  std::string note;
};

void check_partition(const Instance& inst, const std::vector<std::vector<int>>& groups) {
  std::vector<int> hits(inst.num_scenarios(), 0);
  for (const auto& g : groups) {
    if (g.empty()) throw Error("grouping plan contains an empty group");
    for (int w : g) {
      if (w < 0 || w >= inst.num_scenarios()) throw Error("grouping plan indexes a missing scenario");
      ++hits[w];
    }
  }
  for (int h : hits) {
    if (h != 1) throw Error("grouping plan is not a disjoint cover of the scenario set");
  }
}

// Solve one subproblem per group and evaluate its first stage on the full
// scenario set. Order of results is the group order; parallel execution
// changes nothing observable.
std::vector<Candidate> solve_groups(const Instance& inst,
                                    const std::vector<std::vector<int>>& groups,
                                    const BackendFactory& make_backend,
                                    const SgbdOptions& options) {
  std::vector<Candidate> out(groups.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> hard_errors(groups.size());
  const FirstStageSolution baseline =
      options.warm_start_baseline ? baseline_schedule(inst) : FirstStageSolution{};

  auto run = [&]() {
    std::unique_ptr<SolverBackend> backend;
    while (true) {
      const std::size_t g = next.fetch_add(1);
      if (g >= groups.size()) return;
      try {
        if (!backend) backend = make_backend();
        ModelHandle model = build_extensive_form(inst, groups[g], options.build);
        MilpResult sub =
            solve_model(model, *backend, options.subproblem_limits,
                        options.warm_start_baseline ? &baseline : nullptr);
        Candidate cand;
        cand.solution = std::move(sub.solution);
        const SolveReport eval = evaluate_expected(inst, cand.solution);
        if (!eval.scenarios_over_limit.empty()) {
          std::ostringstream os;
          os << "candidate exceeds the overtime limit in " << eval.scenarios_over_limit.size()
             << " scenario(s)";
          cand.note = os.str();
        } else {
          cand.valid = true;
          cand.objective = eval.objective;
        }
        out[g] = std::move(cand);
      } catch (const InfeasibleError& e) {
        out[g].note = e.what();
      } catch (const NoIncumbentError& e) {
        out[g].note = e.what();
      } catch (...) {
        hard_errors[g] = std::current_exception();
        return;
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(groups.size())));
  if (jobs == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : hard_errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

int best_candidate(const std::vector<Candidate>& candidates) {
  int best = -1;
  for (int g = 0; g < static_cast<int>(candidates.size()); ++g) {
    if (!candidates[g].valid) continue;
    if (best < 0 || candidates[g].objective < candidates[best].objective) best = g;
  }
  return best;
}

SolveReport make_report(const Instance& inst, const std::string& method,
                        const std::vector<Candidate>& candidates, int best) {
  SolveReport report = evaluate_expected(inst, candidates[best].solution);
  report.method = method;
  report.status = "heuristic";
  report.candidate_objectives.clear();
  std::ostringstream failed;
  for (int g = 0; g < static_cast<int>(candidates.size()); ++g) {
    report.candidate_objectives.push_back(candidates[g].objective);  // NaN when failed
    if (!candidates[g].valid) {
      if (failed.tellp() > 0) failed << "; ";
      failed << "group " << g << ": " << candidates[g].note;
    }
  }
  if (failed.tellp() > 0) report.params["skipped_groups"] = failed.str();
  return report;
}

std::string method_tag(const std::string& grouping_method) {
  if (grouping_method == "furthest") return "f-sgbd";
  if (grouping_method == "closest") return "c-sgbd";
  if (grouping_method == "random") return "r-sgbd";
  return "sgbd";
}

}  // namespace

SgbdResult run_static_sgbd(const Instance& inst, const GroupingPlan& plan,
                           const BackendFactory& make_backend, const SgbdOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  check_partition(inst, plan.groups);
  const auto candidates = solve_groups(inst, plan.groups, make_backend, options);
  const int best = best_candidate(candidates);
  if (best < 0) {
    throw Error("every group subproblem failed; no first stage available");
  }

  SgbdResult result;
  result.solution = candidates[best].solution;
  result.report = make_report(inst, method_tag(plan.method), candidates, best);
  result.report.params["Z"] = std::to_string(plan.group_size);
  result.report.params["grouping_seed"] = std::to_string(plan.seed);
  result.report.params["num_groups"] = std::to_string(plan.groups.size());
  result.report.params["best_group"] = std::to_string(best);
  result.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SgbdResult run_progressive_sgbd(const Instance& inst, int merge_factor, int iteration_limit,
                                const BackendFactory& make_backend, const SgbdOptions& options) {
  if (merge_factor < 2) throw Error("merge factor must be at least 2");
  if (iteration_limit < 1) throw Error("iteration limit must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::vector<int>> groups(inst.num_scenarios());
  for (int w = 0; w < inst.num_scenarios(); ++w) groups[w] = {w};

  for (int iter = 1; iter <= iteration_limit; ++iter) {
    const auto candidates = solve_groups(inst, groups, make_backend, options);
    const int ng = static_cast<int>(groups.size());

    // Sort group indices by evaluated objective, failures last, ties by index.
    std::vector<int> sorted(ng);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      const double oa =
          candidates[a].valid ? candidates[a].objective : std::numeric_limits<double>::infinity();
      const double ob =
          candidates[b].valid ? candidates[b].objective : std::numeric_limits<double>::infinity();
      return oa < ob;
    });

    if (iter == iteration_limit) {
      const int best = sorted.front();
      if (!candidates[best].valid) {
        throw Error("every group subproblem failed in the final iteration");
      }
      SgbdResult result;
      result.solution = candidates[best].solution;
      result.report = make_report(inst, "p-sgbd", candidates, best);
      result.report.params["alpha"] = std::to_string(merge_factor);
      result.report.params["iterations"] = std::to_string(iteration_limit);
      result.report.params["final_num_groups"] = std::to_string(ng);
      result.report.params["best_group"] = std::to_string(best);
      {
        // Final grouping for audit; groups in their iteration order.
        std::ostringstream os;
        os << "[";
        for (std::size_t g = 0; g < groups.size(); ++g) {
          os << (g ? "," : "") << "[";
          for (std::size_t m = 0; m < groups[g].size(); ++m) {
            os << (m ? "," : "") << groups[g][m];
          }
          os << "]";
        }
        os << "]";
        result.report.params["final_groups"] = os.str();
      }
      result.report.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return result;
    }

    // Merge every merge_factor consecutive sorted groups; the tail chunk
    // may be smaller.
    std::vector<std::vector<int>> merged;
    for (int start = 0; start < ng; start += merge_factor) {
      std::vector<int> members;
      for (int p = start; p < std::min(ng, start + merge_factor); ++p) {
        const auto& g = groups[sorted[p]];
        members.insert(members.end(), g.begin(), g.end());
      }
      std::sort(members.begin(), members.end());
      merged.push_back(std::move(members));
    }
    groups = std::move(merged);
  }
  throw Error("unreachable");
}

}  // namespace chemosched
