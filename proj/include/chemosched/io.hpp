#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "chemosched/types.hpp"

namespace chemosched {

// One JSON document per instance/solution/report/plan. Field names mirror
// the domain types; exact schemas are documented in docs/formats.md.
// Writers are deterministic: fixed key order, shortest round-trip floats,
// no timestamps. Volatile data (wall time) never enters these files.

nlohmann::ordered_json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::ordered_json solution_to_json(const FirstStageSolution& sol);
FirstStageSolution solution_from_json(const nlohmann::json& j);

nlohmann::ordered_json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

nlohmann::ordered_json plan_to_json(const GroupingPlan& plan);
GroupingPlan plan_from_json(const nlohmann::json& j);

Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

FirstStageSolution read_solution(const std::string& path);
void write_solution(const FirstStageSolution& sol, const std::string& path);

SolveReport read_report(const std::string& path);
void write_report(const SolveReport& report, const std::string& path);

GroupingPlan read_plan(const std::string& path);
void write_plan(const GroupingPlan& plan, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace chemosched
