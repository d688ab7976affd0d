// Command-line front end. Everything domain-related goes through the
// shared library's C API (chemosched.h); this file only handles flags,
// files and exit codes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chemosched.h"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Exit codes, also documented in the README:
//   0 ok, 1 internal, 2 configuration error, 3 infeasible/invalid,
//   4 time limit without incumbent, 5 I/O error, 6 solver backend error
int exit_code_for(cs_status status) {
  switch (status) {
    case CS_OK: return 0;
    case CS_ERROR_INVALID_ARGUMENT: return 2;
    case CS_ERROR_PARSE: return 2;
    case CS_ERROR_IO: return 5;
    case CS_ERROR_INFEASIBLE: return 3;
    case CS_ERROR_TIME_LIMIT: return 4;
    case CS_ERROR_BACKEND: return 6;
    case CS_ERROR_INTERNAL: return 1;
  }
  return 1;
}

struct CliError {
  int code;
  std::string message;
};

void check(cs_status status, const std::string& what) {
  if (status != CS_OK) {
    throw CliError{exit_code_for(status), what + ": " + cs_last_error()};
  }
}

std::string take_string(char* owned) {
  std::string out = owned ? owned : "";
  cs_string_free(owned);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{5, "cannot write " + path.string()};
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{5, "cannot read " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Options shared by the sampling-based subcommands.
struct SampleFlags {
  int patients = 9;
  int scenarios = 48;
  std::uint64_t seed = 1;
  int paper_instance = 0;  // 1..10; 0 = off
  std::vector<int> types;
  int nurses = 2;
  int chairs = 3;
  double premed = 15.0;
  double shift = 240.0;
  double overtime_limit = -1.0;  // <0: default to the shift length
  double lambda = 0.3;
  int flex_limit = 2;

  void attach(CLI::App* cmd) {
    cmd->add_option("--patients", patients, "Number of patients (types drawn from the table)");
    cmd->add_option("--scenarios", scenarios, "Number of infusion-duration scenarios");
    cmd->add_option("--seed", seed, "Sampling seed");
    cmd->add_option("--paper-instance", paper_instance,
                    "Use the published type row of instance 1..10");
    cmd->add_option("--types", types, "Explicit per-patient types (e.g. --types 1,3,4)")
        ->delimiter(',');
    cmd->add_option("--nurses", nurses, "Number of nurses");
    cmd->add_option("--chairs", chairs, "Number of chairs");
    cmd->add_option("--premed", premed, "Premedication minutes");
    cmd->add_option("--shift", shift, "Shift length in minutes");
    cmd->add_option("--overtime-limit", overtime_limit,
                    "Overtime cap in minutes (default: shift length)");
    cmd->add_option("--lambda", lambda, "Waiting-time weight in [0,1]");
    cmd->add_option("--flex-limit,-J", flex_limit, "Alternative-nurse budget J");
  }

  ordered_json spec_json(std::uint64_t use_seed) const {
    ordered_json spec;
    if (paper_instance > 0) {
      spec["paper_instance"] = paper_instance;
    } else if (!types.empty()) {
      spec["explicit_types"] = types;
    } else {
      spec["num_patients"] = patients;
    }
    spec["num_scenarios"] = scenarios;
    spec["seed"] = use_seed;
    spec["nurses"] = nurses;
    spec["chairs"] = chairs;
    spec["premed"] = premed;
    spec["shift"] = shift;
    if (overtime_limit >= 0.0) spec["overtime_limit"] = overtime_limit;
    spec["lambda"] = lambda;
    spec["flexibility_limit"] = flex_limit;
    return spec;
  }
};

struct MethodFlags {
  std::string method = "exact";
  int group_size = 8;
  int alpha = 2;
  int iters = 4;
  std::uint64_t grouping_seed = 0;
  double time_limit = 3600.0;
  double gap = 0.0;
  int solver_seed = 0;
  int jobs = 1;
  bool integer_appointments = false;
  bool no_symmetry = false;
  bool no_transitivity = false;

  void attach(CLI::App* cmd, bool with_method = true) {
    if (with_method) {
      cmd->add_option("--method", method,
                      "exact | f-sgbd | c-sgbd | r-sgbd | p-sgbd | baseline | mvp")
          ->check(CLI::IsMember(
              {"exact", "f-sgbd", "c-sgbd", "r-sgbd", "p-sgbd", "baseline", "mvp"}));
    }
    cmd->add_option("--group-size,-Z", group_size, "Scenario group size Z (static SGBD)");
    cmd->add_option("--alpha", alpha, "Groups merged per step (p-sgbd)");
    cmd->add_option("--iters,-T", iters, "Iteration limit T (p-sgbd)");
    cmd->add_option("--grouping-seed", grouping_seed, "Seed for scenario grouping");
    cmd->add_option("--time-limit", time_limit, "Whole-run solver budget in seconds");
    cmd->add_option("--gap", gap, "Relative MIP gap target (0 = prove optimality)");
    cmd->add_option("--solver-seed", solver_seed, "Deterministic seed passed to the backend");
    cmd->add_option("--jobs", jobs, "Concurrent subproblem solves");
    cmd->add_flag("--integer-appointments", integer_appointments,
                  "Restrict appointment times to integer minutes");
    cmd->add_flag("--no-symmetry-breaking", no_symmetry, "Drop the chair symmetry cuts");
    cmd->add_flag("--no-transitivity-cuts", no_transitivity, "Drop the order transitivity cuts");
  }

  ordered_json to_json() const {
    ordered_json o;
    o["method"] = method;
    o["group_size"] = group_size;
    o["merge_factor"] = alpha;
    o["iteration_limit"] = iters;
    o["grouping_seed"] = grouping_seed;
    o["time_limit"] = time_limit;
    o["rel_gap"] = gap;
    o["solver_seed"] = solver_seed;
    o["jobs"] = jobs;
    o["integer_appointments"] = integer_appointments;
    o["chair_symmetry_breaking"] = !no_symmetry;
    o["order_transitivity_cuts"] = !no_transitivity;
    return o;
  }
};

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError{5, "cannot create output directory " + out};
  return dir;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ordered_json& options, const ordered_json& inputs,
                    const std::vector<std::string>& outputs) {
  ordered_json m;
  m["format"] = "chemosched-manifest";
  m["format_version"] = 1;
  m["tool_version"] = cs_version();
  m["command"] = command;
  m["options"] = options;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

cs_instance* load_instance(const std::string& path) {
  cs_instance* inst = nullptr;
  check(cs_instance_read(path.c_str(), &inst), "loading " + path);
  return inst;
}

int cmd_sample(const SampleFlags& flags, bool paper_set, int count, const std::string& out) {
  const auto dir = ensure_out_dir(out);
  std::vector<std::string> files;
  const int total = paper_set ? 10 : count;
  for (int k = 0; k < total; ++k) {
    SampleFlags one = flags;
    if (paper_set) one.paper_instance = k + 1;
    const ordered_json spec = one.spec_json(flags.seed + static_cast<std::uint64_t>(k));
    cs_instance* inst = nullptr;
    check(cs_instance_sample(spec.dump().c_str(), &inst), "sampling instance");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "instance_%02d.json", k + 1);
    check(cs_instance_write(inst, (dir / buf).string().c_str()), "writing instance");
    cs_instance_free(inst);
    files.push_back(buf);
    std::cout << "wrote " << (dir / buf).string() << "\n";
  }
  ordered_json options = flags.spec_json(flags.seed);
  options["paper_set"] = paper_set;
  options["count"] = total;
  write_manifest(dir, "sample", options, ordered_json::object(), files);
  return 0;
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path) {
  cs_instance* inst = load_instance(instance_path);
  std::string violations_text;
  if (solution_path.empty()) {
    char* text = nullptr;
    check(cs_instance_validate(inst, &text), "validating instance");
    violations_text = take_string(text);
  } else {
    cs_solution* sol = nullptr;
    check(cs_solution_read(solution_path.c_str(), &sol), "loading " + solution_path);
    char* text = nullptr;
    check(cs_solution_validate(inst, sol, &text), "validating solution");
    violations_text = take_string(text);
    cs_solution_free(sol);
  }
  cs_instance_free(inst);
  const json violations = json::parse(violations_text);
  if (violations.empty()) {
    std::cout << "ok: all invariants hold\n";
    return 0;
  }
  for (const auto& v : violations) std::cout << "violation: " << v.get<std::string>() << "\n";
  return 3;
}

int cmd_evaluate(const std::string& instance_path, const std::string& solution_path,
                 const std::string& out) {
  cs_instance* inst = load_instance(instance_path);
  cs_solution* sol = nullptr;
  check(cs_solution_read(solution_path.c_str(), &sol), "loading " + solution_path);
  char* report_text = nullptr;
  check(cs_evaluate(inst, sol, &report_text), "evaluating");
  const std::string report = take_string(report_text);
  cs_solution_free(sol);
  cs_instance_free(inst);

  const json r = json::parse(report);
  std::cout << "objective " << r["objective"] << "  wait " << r["expected_wait"]
            << "  overtime " << r["expected_overtime"] << "\n";
  if (!out.empty()) {
    const auto dir = ensure_out_dir(out);
    write_file(dir / "report.json", report + "\n");
    ordered_json inputs;
    inputs["instance"] = instance_path;
    inputs["solution"] = solution_path;
    write_manifest(dir, "evaluate", ordered_json::object(), inputs, {"report.json"});
  }
  return 0;
}

int cmd_solve(const std::string& instance_path, const MethodFlags& method,
              const std::string& reference_path, const std::string& export_mps,
              const std::string& out) {
  cs_instance* inst = load_instance(instance_path);
  const ordered_json options = method.to_json();

  if (!export_mps.empty()) {
    check(cs_export_mps(inst, options.dump().c_str(), export_mps.c_str()), "exporting MPS");
    std::cout << "wrote " << export_mps << "\n";
  }

  const double t0 = now_seconds();
  cs_solution* sol = nullptr;
  char* report_text = nullptr;
  check(cs_solve(inst, options.dump().c_str(), &sol, &report_text), "solving");
  const double wall = now_seconds() - t0;
  ordered_json report = ordered_json::parse(take_string(report_text));

  if (!reference_path.empty()) {
    const json ref = json::parse(read_file(reference_path));
    const double z_ref = ref.at("objective").get<double>();
    const double z = report.at("objective").get<double>();
    report["exact_reference"] = z_ref;
    report["gap_percent"] = z_ref == 0.0 ? 0.0 : 100.0 * (z - z_ref) / z_ref;
  }

  std::cout << "method " << method.method << "  objective " << report["objective"]
            << "  status " << report["status"].get<std::string>() << "\n";

  if (!out.empty()) {
    const auto dir = ensure_out_dir(out);
    std::vector<std::string> outputs = {"solution.json", "report.json"};
    char* sol_text = nullptr;
    check(cs_solution_to_json(sol, &sol_text), "serializing solution");
    write_file(dir / "solution.json", take_string(sol_text) + "\n");
    write_file(dir / "report.json", report.dump(2) + "\n");
    if (method.method == "f-sgbd" || method.method == "c-sgbd" || method.method == "r-sgbd") {
      char* plan_text = nullptr;
      check(cs_grouping_plan(inst, options.dump().c_str(), &plan_text), "grouping");
      write_file(dir / "plan.json", take_string(plan_text) + "\n");
      outputs.push_back("plan.json");
    }
    // Wall time stays out of report.json so reruns are byte-identical.
    std::ostringstream timing;
    timing << "wall_time_seconds=" << wall << "\n";
    write_file(dir / "timing.txt", timing.str());
    ordered_json inputs;
    inputs["instance"] = instance_path;
    if (!reference_path.empty()) inputs["reference"] = reference_path;
    write_manifest(dir, "solve", options, inputs, outputs);
  }
  cs_solution_free(sol);
  cs_instance_free(inst);
  return 0;
}

int cmd_groups(const std::string& instance_path, const MethodFlags& method,
               const std::string& out) {
  cs_instance* inst = load_instance(instance_path);
  char* plan_text = nullptr;
  check(cs_grouping_plan(inst, method.to_json().dump().c_str(), &plan_text), "grouping");
  const std::string plan = take_string(plan_text);
  cs_instance_free(inst);
  if (out.empty()) {
    std::cout << plan << "\n";
  } else {
    const auto dir = ensure_out_dir(out);
    write_file(dir / "plan.json", plan + "\n");
    ordered_json inputs;
    inputs["instance"] = instance_path;
    write_manifest(dir, "groups", method.to_json(), inputs, {"plan.json"});
  }
  return 0;
}

int cmd_vss(const std::string& instance_path, const MethodFlags& method,
            const std::string& out) {
  cs_instance* inst = load_instance(instance_path);
  char* result_text = nullptr;
  check(cs_compute_vss(inst, method.to_json().dump().c_str(), &result_text), "computing VSS");
  const std::string result = take_string(result_text);
  cs_instance_free(inst);

  const json r = json::parse(result);
  std::cout << "z_stochastic " << r["z_stochastic"] << "  z_mean_value " << r["z_mean_value"]
            << "  vss_percent " << r["vss_percent"] << "\n";
  if (!out.empty()) {
    const auto dir = ensure_out_dir(out);
    write_file(dir / "vss.json", result + "\n");
    ordered_json inputs;
    inputs["instance"] = instance_path;
    write_manifest(dir, "vss", method.to_json(), inputs, {"vss.json"});
  }
  return 0;
}

int cmd_sweep(const std::string& parameter, const std::vector<double>& values,
              const std::vector<std::uint64_t>& seeds, const SampleFlags& sample,
              const MethodFlags& method, const std::string& out) {
  ordered_json spec;
  spec["parameter"] = parameter;
  spec["values"] = values;
  spec["instance_seeds"] = seeds;
  spec["sampler"] = sample.spec_json(sample.seed);
  spec["method"] = method.to_json();

  char* table_text = nullptr;
  char* rows_text = nullptr;
  check(cs_run_sweep(spec.dump().c_str(), &table_text, &rows_text), "running sweep");
  const std::string table = take_string(table_text);
  const std::string rows = take_string(rows_text);

  std::cout << table;
  if (!out.empty()) {
    const auto dir = ensure_out_dir(out);
    write_file(dir / "sweep.csv", table);
    write_file(dir / "sweep_rows.json", rows + "\n");
    write_manifest(dir, "sweep", spec, ordered_json::object(), {"sweep.csv", "sweep_rows.json"});
  }
  return 0;
}

// --config FILE: JSON object whose keys are long option names; values are
// injected before the explicit flags so the command line wins.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args;
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--config" && i + 1 < argc) {
      config_path = argv[++i];
    } else {
      args.push_back(argv[i]);
    }
  }
  if (config_path.empty()) return args;

  const json config = json::parse(read_file(config_path));
  if (!config.is_object()) throw CliError{2, "config file must hold a JSON object"};
  std::vector<std::string> merged;
  if (!args.empty()) merged.push_back(args.front());  // subcommand stays first
  for (const auto& [key, value] : config.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back("--" + key);
      continue;
    }
    merged.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ",";
        joined += v.is_string() ? v.get<std::string>() : json(v).dump();
      }
      merged.push_back(joined);
    } else {
      merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Daily chemotherapy appointment scheduling under uncertain infusion durations"};
  app.set_version_flag("--version", std::string("chemosched ") + cs_version());
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "Sample instance files");
  SampleFlags sample_flags;
  sample_flags.attach(sample);
  bool paper_set = false;
  int count = 1;
  std::string sample_out = "out";
  sample->add_flag("--paper-set", paper_set, "Emit the ten published type rows");
  sample->add_option("--count", count, "Number of instances (seeds seed, seed+1, ...)");
  sample->add_option("--out", sample_out, "Output directory");

  auto* validate = app.add_subcommand("validate", "Check instance (and solution) invariants");
  std::string val_instance, val_solution;
  validate->add_option("--instance", val_instance, "Instance file")->required();
  validate->add_option("--solution", val_solution, "Optional first-stage solution file");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a fixed first stage");
  std::string eval_instance, eval_solution, eval_out;
  evaluate->add_option("--instance", eval_instance, "Instance file")->required();
  evaluate->add_option("--solution", eval_solution, "First-stage solution file")->required();
  evaluate->add_option("--out", eval_out, "Output directory (optional)");

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string solve_instance, solve_out, solve_reference, solve_mps;
  MethodFlags solve_flags;
  solve->add_option("--instance", solve_instance, "Instance file")->required();
  solve_flags.attach(solve);
  solve->add_option("--reference", solve_reference,
                    "report.json of a reference run; fills the gap field");
  solve->add_option("--export-mps", solve_mps, "Also write the extensive form as MPS");
  solve->add_option("--out", solve_out, "Output directory");

  auto* groups = app.add_subcommand("groups", "Emit a scenario grouping plan");
  std::string groups_instance, groups_out;
  MethodFlags groups_flags;
  groups_flags.method = "f-sgbd";
  groups->add_option("--instance", groups_instance, "Instance file")->required();
  groups_flags.attach(groups);
  groups->add_option("--out", groups_out, "Output directory (default: print)");

  auto* vss = app.add_subcommand("vss", "Value of the stochastic solution");
  std::string vss_instance, vss_out;
  MethodFlags vss_flags;
  vss->add_option("--instance", vss_instance, "Instance file")->required();
  vss_flags.attach(vss);
  vss->add_option("--out", vss_out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Parameter sensitivity sweep");
  std::string sweep_param, sweep_out;
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> sweep_seeds;
  SampleFlags sweep_sample;
  MethodFlags sweep_method;
  sweep->add_option("--param", sweep_param, "J | lambda | nurses | chairs")->required();
  sweep->add_option("--values", sweep_values, "Swept values")->delimiter(',')->required();
  sweep->add_option("--seeds", sweep_seeds, "Instance seeds")->delimiter(',');
  sweep_sample.attach(sweep);
  sweep_method.attach(sweep);
  sweep->add_option("--out", sweep_out, "Output directory");

  for (auto* sub : app.get_subcommands({})) {
    for (auto* opt : sub->get_options()) {
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);  // CLI11 consumes args back to front

    if (*sample) return cmd_sample(sample_flags, paper_set, count, sample_out);
    if (*validate) return cmd_validate(val_instance, val_solution);
    if (*evaluate) return cmd_evaluate(eval_instance, eval_solution, eval_out);
    if (*solve) {
      return cmd_solve(solve_instance, solve_flags, solve_reference, solve_mps, solve_out);
    }
    if (*groups) return cmd_groups(groups_instance, groups_flags, groups_out);
    if (*vss) return cmd_vss(vss_instance, vss_flags, vss_out);
    if (*sweep) {
      if (sweep_seeds.empty()) sweep_seeds = {sweep_sample.seed};
      return cmd_sweep(sweep_param, sweep_values, sweep_seeds, sweep_sample, sweep_method,
                       sweep_out);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
