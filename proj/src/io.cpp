#include "chemosched/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace chemosched {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ParseError("invalid document: " + what);
}

json get(const json& j, const char* key) {
  require(j.contains(key), std::string("missing field '") + key + "'");
  return j.at(key);
}

void check_format(const json& j, const char* expected) {
  require(j.is_object(), "top level must be an object");
  const std::string fmt = get(j, "format").get<std::string>();
  require(fmt == expected, "field 'format' is '" + fmt + "', expected '" + expected + "'");
}

}  // namespace

ordered_json instance_to_json(const Instance& inst) {
  ordered_json j;
  j["format"] = "chemosched-instance";
  j["format_version"] = 1;
  ordered_json patients = ordered_json::array();
  for (const auto& p : inst.patients) {
    ordered_json row;
    row["index"] = p.index;
    if (p.patient_type) row["type"] = *p.patient_type;
    row["primary_nurse"] = inst.primary_nurse[p.index];
    row["eligible_nurses"] = inst.eligible_nurses[p.index];
    patients.push_back(std::move(row));
  }
  j["patients"] = std::move(patients);
  j["num_nurses"] = inst.num_nurses;
  j["num_chairs"] = inst.num_chairs;
  j["premed_minutes"] = inst.premed_minutes;
  j["shift_minutes"] = inst.shift_minutes;
  j["overtime_limit_minutes"] = inst.overtime_limit_minutes;
  j["lambda_weight"] = inst.lambda_weight;
  j["flexibility_limit"] = inst.flexibility_limit;
  j["scenario_durations"] = inst.scenario_durations;
  if (inst.big_m_override) {
    j["big_m"] = *inst.big_m_override;
  } else {
    j["big_m"] = nullptr;
  }
  j["meta"] = inst.meta;
  return j;
}

Instance instance_from_json(const json& j) {
  check_format(j, "chemosched-instance");
  Instance inst;
  const auto& patients = get(j, "patients");
  require(patients.is_array(), "'patients' must be an array");
  inst.num_nurses = get(j, "num_nurses").get<int>();
  inst.num_chairs = get(j, "num_chairs").get<int>();
  inst.premed_minutes = get(j, "premed_minutes").get<double>();
  inst.shift_minutes = get(j, "shift_minutes").get<double>();
  inst.overtime_limit_minutes = get(j, "overtime_limit_minutes").get<double>();
  inst.lambda_weight = get(j, "lambda_weight").get<double>();
  inst.flexibility_limit = get(j, "flexibility_limit").get<int>();
  for (const auto& row : patients) {
    PatientSpec p;
    p.index = get(row, "index").get<int>();
    if (row.contains("type") && !row.at("type").is_null()) {
      p.patient_type = row.at("type").get<int>();
    }
    inst.patients.push_back(p);
    inst.primary_nurse.push_back(get(row, "primary_nurse").get<int>());
    inst.eligible_nurses.push_back(get(row, "eligible_nurses").get<std::vector<int>>());
  }
  const auto& scen = get(j, "scenario_durations");
  require(scen.is_array(), "'scenario_durations' must be an array of per-scenario rows");
  inst.scenario_durations = scen.get<std::vector<std::vector<double>>>();
  if (j.contains("big_m") && !j.at("big_m").is_null()) {
    inst.big_m_override = j.at("big_m").get<double>();
  }
  if (j.contains("meta")) {
    inst.meta = j.at("meta").get<std::map<std::string, std::string>>();
  }
  return inst;
}

ordered_json solution_to_json(const FirstStageSolution& sol) {
  ordered_json j;
  j["format"] = "chemosched-solution";
  j["format_version"] = 1;
  j["appointment_minutes"] = sol.appointments;
  j["nurse_of_patient"] = sol.nurse_of;
  j["chair_of_patient"] = sol.chair_of;
  const int n = sol.precedence.size();
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<int> row(n, 0);
    for (int k = 0; k < n; ++k) row[k] = (i != k && sol.precedence.before(i, k)) ? 1 : 0;
    rows.push_back(row);
  }
  j["precedence"] = std::move(rows);
  return j;
}

FirstStageSolution solution_from_json(const json& j) {
  check_format(j, "chemosched-solution");
  FirstStageSolution sol;
  sol.appointments = get(j, "appointment_minutes").get<std::vector<double>>();
  sol.nurse_of = get(j, "nurse_of_patient").get<std::vector<int>>();
  sol.chair_of = get(j, "chair_of_patient").get<std::vector<int>>();
  const auto rows = get(j, "precedence").get<std::vector<std::vector<int>>>();
  const int n = static_cast<int>(rows.size());
  sol.precedence = PrecedenceMatrix(n);
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(rows[i].size()) == n, "'precedence' must be a square matrix");
    for (int k = 0; k < n; ++k) sol.precedence.set(i, k, rows[i][k] != 0);
  }
  return sol;
}

ordered_json report_to_json(const SolveReport& report) {
  ordered_json j;
  j["format"] = "chemosched-report";
  j["format_version"] = 1;
  j["method"] = report.method;
  j["status"] = report.status;
  j["objective"] = report.objective;
  j["expected_wait"] = report.expected_wait;
  j["expected_overtime"] = report.expected_overtime;
  j["solver_bound"] = report.solver_bound ? ordered_json(*report.solver_bound) : ordered_json();
  j["exact_reference"] =
      report.exact_reference ? ordered_json(*report.exact_reference) : ordered_json();
  j["gap_percent"] = report.gap_percent ? ordered_json(*report.gap_percent) : ordered_json();
  j["candidate_objectives"] = report.candidate_objectives;
  j["scenarios_over_limit"] = report.scenarios_over_limit;
  j["params"] = report.params;
  return j;
}

SolveReport report_from_json(const json& j) {
  check_format(j, "chemosched-report");
  SolveReport r;
  r.method = get(j, "method").get<std::string>();
  r.status = get(j, "status").get<std::string>();
  r.objective = get(j, "objective").get<double>();
  r.expected_wait = get(j, "expected_wait").get<double>();
  r.expected_overtime = get(j, "expected_overtime").get<double>();
  if (j.contains("solver_bound") && !j.at("solver_bound").is_null()) {
    r.solver_bound = j.at("solver_bound").get<double>();
  }
  if (j.contains("exact_reference") && !j.at("exact_reference").is_null()) {
    r.exact_reference = j.at("exact_reference").get<double>();
  }
  if (j.contains("gap_percent") && !j.at("gap_percent").is_null()) {
    r.gap_percent = j.at("gap_percent").get<double>();
  }
  if (j.contains("candidate_objectives")) {
    for (const auto& v : j.at("candidate_objectives")) {
      // null marks a skipped group (NaN in memory; JSON has no NaN)
      r.candidate_objectives.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                   : v.get<double>());
    }
  }
  if (j.contains("scenarios_over_limit")) {
    r.scenarios_over_limit = j.at("scenarios_over_limit").get<std::vector<int>>();
  }
  if (j.contains("params")) {
    r.params = j.at("params").get<std::map<std::string, std::string>>();
  }
  return r;
}

ordered_json plan_to_json(const GroupingPlan& plan) {
  ordered_json j;
  j["format"] = "chemosched-grouping";
  j["format_version"] = 1;
  j["method"] = plan.method;
  j["group_size"] = plan.group_size;
  j["seed"] = plan.seed;
  j["groups"] = plan.groups;
  return j;
}

GroupingPlan plan_from_json(const json& j) {
  check_format(j, "chemosched-grouping");
  GroupingPlan plan;
  plan.method = get(j, "method").get<std::string>();
  plan.group_size = get(j, "group_size").get<int>();
  plan.seed = get(j, "seed").get<std::uint64_t>();
  plan.groups = get(j, "groups").get<std::vector<std::vector<int>>>();
  return plan;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

json parse_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + path);
  return j;
}

void write_json_file(const ordered_json& j, const std::string& path) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace

Instance read_instance(const std::string& path) {
  try {
    return instance_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw ParseError("bad instance file " + path + ": " + e.what());
  }
}

void write_instance(const Instance& inst, const std::string& path) {
  write_json_file(instance_to_json(inst), path);
}

FirstStageSolution read_solution(const std::string& path) {
  try {
    return solution_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw ParseError("bad solution file " + path + ": " + e.what());
  }
}

void write_solution(const FirstStageSolution& sol, const std::string& path) {
  write_json_file(solution_to_json(sol), path);
}

SolveReport read_report(const std::string& path) {
  try {
    return report_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw ParseError("bad report file " + path + ": " + e.what());
  }
}

void write_report(const SolveReport& report, const std::string& path) {
  write_json_file(report_to_json(report), path);
}

GroupingPlan read_plan(const std::string& path) {
  try {
    return plan_from_json(parse_file(path));
  } catch (const json::exception& e) {
    throw ParseError("bad grouping file " + path + ": " + e.what());
  }
}

void write_plan(const GroupingPlan& plan, const std::string& path) {
  write_json_file(plan_to_json(plan), path);
}

}  // namespace chemosched
