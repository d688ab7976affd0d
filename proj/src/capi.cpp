#include "chemosched.h"

#include <cstring>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "chemosched/analysis.hpp"
#include "chemosched/evaluator.hpp"
#include "chemosched/io.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/sampler.hpp"
#include "chemosched/sgbd.hpp"
#include "chemosched/validate.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

struct cs_instance {
  chemosched::Instance value;
};

struct cs_solution {
  chemosched::FirstStageSolution value;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
cs_status guarded(Fn&& fn) {
  try {
    fn();
    return CS_OK;
  } catch (const chemosched::InvalidArgumentError& e) {
    g_last_error = e.what();
    return CS_ERROR_INVALID_ARGUMENT;
  } catch (const chemosched::ParseError& e) {
    g_last_error = e.what();
    return CS_ERROR_PARSE;
  } catch (const chemosched::IoError& e) {
    g_last_error = e.what();
    return CS_ERROR_IO;
  } catch (const chemosched::InfeasibleError& e) {
    g_last_error = e.what();
    return CS_ERROR_INFEASIBLE;
  } catch (const chemosched::NoIncumbentError& e) {
    g_last_error = e.what();
    return CS_ERROR_TIME_LIMIT;
  } catch (const chemosched::BackendError& e) {
    g_last_error = e.what();
    return CS_ERROR_BACKEND;
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return CS_ERROR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CS_ERROR_INTERNAL;
  }
}

void require_arg(bool cond, const char* what) {
  if (!cond) throw chemosched::InvalidArgumentError(what);
}

json parse_json(const char* text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw chemosched::ParseError(std::string("malformed JSON in ") + what);
  }
  return j;
}

chemosched::SamplerSpec sampler_spec_from_json(const json& j) {
  chemosched::SamplerSpec spec;
  if (j.contains("type_table")) {
    spec.type_table.clear();
    for (const auto& row : j.at("type_table")) {
      chemosched::PatientTypeRow r;
      r.type = row.at("type").get<int>();
      r.fraction = row.at("fraction").get<double>();
      r.low_minutes = row.at("low").get<double>();
      r.high_minutes = row.at("high").get<double>();
      spec.type_table.push_back(r);
    }
  }
  if (j.contains("paper_instance")) {
    spec.explicit_types = chemosched::paper_instance_types(j.at("paper_instance").get<int>());
  } else if (j.contains("explicit_types")) {
    spec.explicit_types = j.at("explicit_types").get<std::vector<int>>();
  }
  spec.num_patients = j.value("num_patients", 0);
  if (!j.contains("num_scenarios")) {
    throw chemosched::InvalidArgumentError("sampling spec needs num_scenarios");
  }
  spec.num_scenarios = j.at("num_scenarios").get<int>();
  if (!j.contains("seed")) {
    throw chemosched::InvalidArgumentError("sampling spec needs a seed");
  }
  spec.rng_seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

chemosched::ResourceParams resource_params_from_json(const json& j) {
  chemosched::ResourceParams base;
  base.num_nurses = j.value("nurses", base.num_nurses);
  base.num_chairs = j.value("chairs", base.num_chairs);
  base.premed_minutes = j.value("premed", base.premed_minutes);
  base.shift_minutes = j.value("shift", base.shift_minutes);
  if (j.contains("overtime_limit") && !j.at("overtime_limit").is_null()) {
    base.overtime_limit_minutes = j.at("overtime_limit").get<double>();
  }
  base.lambda_weight = j.value("lambda", base.lambda_weight);
  base.flexibility_limit = j.value("flexibility_limit", base.flexibility_limit);
  return base;
}

chemosched::MethodSpec method_spec_from_json(const json& j) {
  chemosched::MethodSpec spec;
  spec.method = j.value("method", spec.method);
  spec.group_size = j.value("group_size", spec.group_size);
  spec.merge_factor = j.value("merge_factor", spec.merge_factor);
  spec.iteration_limit = j.value("iteration_limit", spec.iteration_limit);
  spec.grouping_seed = j.value("grouping_seed", spec.grouping_seed);
  spec.limits.time_limit_seconds = j.value("time_limit", spec.limits.time_limit_seconds);
  spec.limits.rel_gap = j.value("rel_gap", spec.limits.rel_gap);
  spec.limits.seed = j.value("solver_seed", spec.limits.seed);
  spec.jobs = j.value("jobs", spec.jobs);
  spec.build.integer_appointments =
      j.value("integer_appointments", spec.build.integer_appointments);
  spec.build.chair_symmetry_breaking =
      j.value("chair_symmetry_breaking", spec.build.chair_symmetry_breaking);
  return spec;
}

ordered_json violations_to_json(const std::vector<std::string>& violations) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : violations) arr.push_back(v);
  return arr;
}

ordered_json vss_to_json(const chemosched::VssResult& vss) {
  ordered_json out;
  out["z_stochastic"] = vss.z_stochastic;
  out["z_mean_value"] = vss.z_mean_value;
  out["vss_percent"] = vss.vss_percent;
  out["stochastic_report"] = chemosched::report_to_json(vss.stochastic_report);
  out["mean_value_report"] = chemosched::report_to_json(vss.mean_value_report);
  return out;
}

}  // namespace

extern "C" {

const char* cs_version(void) { return chemosched::kVersion; }

const char* cs_last_error(void) { return g_last_error.c_str(); }

void cs_string_free(char* text) { delete[] text; }

void cs_instance_free(cs_instance* inst) { delete inst; }

void cs_solution_free(cs_solution* sol) { delete sol; }

cs_status cs_instance_read(const char* path, cs_instance** out) {
  return guarded([&] {
    require_arg(path && out, "cs_instance_read: null argument");
    *out = new cs_instance{chemosched::read_instance(path)};
  });
}

cs_status cs_instance_from_json(const char* json_text, cs_instance** out) {
  return guarded([&] {
    require_arg(json_text && out, "cs_instance_from_json: null argument");
    *out = new cs_instance{
        chemosched::instance_from_json(parse_json(json_text, "instance document"))};
  });
}

cs_status cs_instance_write(const cs_instance* inst, const char* path) {
  return guarded([&] {
    require_arg(inst && path, "cs_instance_write: null argument");
    chemosched::write_instance(inst->value, path);
  });
}

cs_status cs_instance_to_json(const cs_instance* inst, char** out_json) {
  return guarded([&] {
    require_arg(inst && out_json, "cs_instance_to_json: null argument");
    *out_json = dup_string(chemosched::instance_to_json(inst->value).dump(2));
  });
}

cs_status cs_instance_sample(const char* spec_json, cs_instance** out) {
  return guarded([&] {
    require_arg(spec_json && out, "cs_instance_sample: null argument");
    const json j = parse_json(spec_json, "sampling spec");
    *out = new cs_instance{
        chemosched::sample_instance(sampler_spec_from_json(j), resource_params_from_json(j))};
  });
}

cs_status cs_instance_validate(const cs_instance* inst, char** out_violations_json) {
  return guarded([&] {
    require_arg(inst && out_violations_json, "cs_instance_validate: null argument");
    *out_violations_json =
        dup_string(violations_to_json(chemosched::validate_instance(inst->value)).dump(2));
  });
}

int cs_instance_num_patients(const cs_instance* inst) {
  return inst ? inst->value.num_patients() : -1;
}

int cs_instance_num_scenarios(const cs_instance* inst) {
  return inst ? inst->value.num_scenarios() : -1;
}

cs_status cs_solution_read(const char* path, cs_solution** out) {
  return guarded([&] {
    require_arg(path && out, "cs_solution_read: null argument");
    *out = new cs_solution{chemosched::read_solution(path)};
  });
}

cs_status cs_solution_from_json(const char* json_text, cs_solution** out) {
  return guarded([&] {
    require_arg(json_text && out, "cs_solution_from_json: null argument");
    *out = new cs_solution{
        chemosched::solution_from_json(parse_json(json_text, "solution document"))};
  });
}

cs_status cs_solution_write(const cs_solution* sol, const char* path) {
  return guarded([&] {
    require_arg(sol && path, "cs_solution_write: null argument");
    chemosched::write_solution(sol->value, path);
  });
}

cs_status cs_solution_to_json(const cs_solution* sol, char** out_json) {
  return guarded([&] {
    require_arg(sol && out_json, "cs_solution_to_json: null argument");
    *out_json = dup_string(chemosched::solution_to_json(sol->value).dump(2));
  });
}

cs_status cs_solution_validate(const cs_instance* inst, const cs_solution* sol,
                               char** out_violations_json) {
  return guarded([&] {
    require_arg(inst && sol && out_violations_json, "cs_solution_validate: null argument");
    *out_violations_json = dup_string(
        violations_to_json(chemosched::validate_first_stage(inst->value, sol->value)).dump(2));
  });
}

cs_status cs_evaluate(const cs_instance* inst, const cs_solution* sol,
                      char** out_report_json) {
  return guarded([&] {
    require_arg(inst && sol && out_report_json, "cs_evaluate: null argument");
    const chemosched::SolveReport report =
        chemosched::evaluate_expected(inst->value, sol->value);
    *out_report_json = dup_string(chemosched::report_to_json(report).dump(2));
  });
}

cs_status cs_solve(const cs_instance* inst, const char* options_json,
                   cs_solution** out_solution, char** out_report_json) {
  return guarded([&] {
    require_arg(inst && out_solution && out_report_json, "cs_solve: null argument");
    const json options = options_json ? parse_json(options_json, "solve options") : json::object();
    const chemosched::MethodSpec spec = method_spec_from_json(options);
    chemosched::MethodResult result =
        chemosched::solve_with_method(inst->value, spec, chemosched::make_highs_backend);
    *out_solution = new cs_solution{std::move(result.solution)};
    *out_report_json = dup_string(chemosched::report_to_json(result.report).dump(2));
  });
}

cs_status cs_grouping_plan(const cs_instance* inst, const char* options_json,
                           char** out_plan_json) {
  return guarded([&] {
    require_arg(inst && options_json && out_plan_json, "cs_grouping_plan: null argument");
    const json options = parse_json(options_json, "grouping options");
    const std::string method = options.value("method", "f-sgbd");
    const int group_size = options.value("group_size", 8);
    const std::uint64_t seed = options.value("grouping_seed", std::uint64_t{0});
    chemosched::GroupingPlan plan;
    if (method == "f-sgbd" || method == "furthest") {
      plan = chemosched::group_furthest(inst->value, group_size, seed);
    } else if (method == "c-sgbd" || method == "closest") {
      plan = chemosched::group_closest(inst->value, group_size, seed);
    } else if (method == "r-sgbd" || method == "random") {
      plan = chemosched::group_random(inst->value, group_size, seed);
    } else {
      throw chemosched::InvalidArgumentError("unknown grouping method: " + method);
    }
    *out_plan_json = dup_string(chemosched::plan_to_json(plan).dump(2));
  });
}

cs_status cs_compute_vss(const cs_instance* inst, const char* options_json,
                         char** out_result_json) {
  return guarded([&] {
    require_arg(inst && out_result_json, "cs_compute_vss: null argument");
    const json options = options_json ? parse_json(options_json, "vss options") : json::object();
    const chemosched::MethodSpec spec = method_spec_from_json(options);
    const chemosched::VssResult vss =
        chemosched::compute_vss(inst->value, spec, chemosched::make_highs_backend);
    *out_result_json = dup_string(vss_to_json(vss).dump(2));
  });
}

cs_status cs_run_sweep(const char* spec_json, char** out_table_csv, char** out_rows_json) {
  return guarded([&] {
    require_arg(spec_json && out_table_csv && out_rows_json, "cs_run_sweep: null argument");
    const json j = parse_json(spec_json, "sweep spec");
    chemosched::SweepSpec spec;
    spec.parameter = j.value("parameter", "");
    spec.values = j.value("values", std::vector<double>{});
    spec.instance_seeds = j.value("instance_seeds", std::vector<std::uint64_t>{});
    if (j.contains("sampler")) {
      spec.sampler = sampler_spec_from_json(j.at("sampler"));
      spec.base = resource_params_from_json(j.at("sampler"));
    } else {
      throw chemosched::InvalidArgumentError("sweep spec needs a 'sampler' object");
    }
    if (j.contains("method")) spec.method = method_spec_from_json(j.at("method"));
    const auto rows = chemosched::run_sweep(spec, chemosched::make_highs_backend);
    *out_table_csv = dup_string(chemosched::sweep_table_csv(spec.parameter, rows));
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json r;
      r["value"] = row.value;
      r["mean_objective"] = row.mean_objective;
      r["mean_waiting_time"] = row.mean_wait;
      r["mean_overtime"] = row.mean_overtime;
      r["instances_solved"] = row.instances_solved;
      r["instances_failed"] = row.instances_failed;
      arr.push_back(std::move(r));
    }
    *out_rows_json = dup_string(arr.dump(2));
  });
}

cs_status cs_export_mps(const cs_instance* inst, const char* options_json, const char* path) {
  return guarded([&] {
    require_arg(inst && path, "cs_export_mps: null argument");
    const json options = options_json ? parse_json(options_json, "export options") : json::object();
    const chemosched::MethodSpec spec = method_spec_from_json(options);
    std::vector<int> all(inst->value.num_scenarios());
    std::iota(all.begin(), all.end(), 0);
    const chemosched::ModelHandle model =
        chemosched::build_extensive_form(inst->value, all, spec.build);
    auto backend = chemosched::make_highs_backend();
    backend->export_mps(model.problem(), path);
  });
}

}  // extern "C"
