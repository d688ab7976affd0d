/*
 * chemosched — daily chemotherapy appointment scheduling under uncertain
 * infusion durations.
 *
 * C interface of the shared library. All functions return a cs_status;
 * every non-CS_OK return leaves a human-readable message in
 * cs_last_error() (thread-local). Objects returned through out-parameters
 * are owned by the caller and released with the matching *_free function;
 * strings with cs_string_free.
 *
 * Structured inputs and outputs travel as JSON text in the documented
 * schemas (see docs/formats.md in the source tree).
 */
#ifndef CHEMOSCHED_H
#define CHEMOSCHED_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cs_instance cs_instance;
typedef struct cs_solution cs_solution;

typedef enum cs_status {
  CS_OK = 0,
  CS_ERROR_INVALID_ARGUMENT = 1,
  CS_ERROR_PARSE = 2,
  CS_ERROR_IO = 3,
  CS_ERROR_INFEASIBLE = 4,
  CS_ERROR_TIME_LIMIT = 5, /* limit reached without an incumbent */
  CS_ERROR_BACKEND = 6,    /* MILP worker unavailable or misbehaving */
  CS_ERROR_INTERNAL = 7
} cs_status;

/* Library version string, static storage. */
const char* cs_version(void);

/* Message of the last failing call on this thread, static storage. */
const char* cs_last_error(void);

void cs_string_free(char* text);
void cs_instance_free(cs_instance* inst);
void cs_solution_free(cs_solution* sol);

/* ---- instances ---- */

cs_status cs_instance_read(const char* path, cs_instance** out);
cs_status cs_instance_from_json(const char* json_text, cs_instance** out);
cs_status cs_instance_write(const cs_instance* inst, const char* path);
cs_status cs_instance_to_json(const cs_instance* inst, char** out_json);

/*
 * Sample an instance. spec_json keys:
 *   num_scenarios (required), seed (required),
 *   num_patients | explicit_types | paper_instance (1..10),
 *   type_table: [{type,fraction,low,high}, ...]        (default: published table)
 *   nurses, chairs, premed, shift, overtime_limit, lambda, flexibility_limit
 */
cs_status cs_instance_sample(const char* spec_json, cs_instance** out);

/* JSON array of violation strings; empty array means all invariants hold. */
cs_status cs_instance_validate(const cs_instance* inst, char** out_violations_json);

int cs_instance_num_patients(const cs_instance* inst);
int cs_instance_num_scenarios(const cs_instance* inst);

/* ---- first-stage solutions ---- */

cs_status cs_solution_read(const char* path, cs_solution** out);
cs_status cs_solution_from_json(const char* json_text, cs_solution** out);
cs_status cs_solution_write(const cs_solution* sol, const char* path);
cs_status cs_solution_to_json(const cs_solution* sol, char** out_json);
cs_status cs_solution_validate(const cs_instance* inst, const cs_solution* sol,
                               char** out_violations_json);

/* ---- evaluation, solving, analysis ---- */

/* Closed-form evaluation of a fixed first stage over all scenarios. */
cs_status cs_evaluate(const cs_instance* inst, const cs_solution* sol, char** out_report_json);

/*
 * Solve an instance. options_json keys (all optional):
 *   method: "exact" | "f-sgbd" | "c-sgbd" | "r-sgbd" | "p-sgbd" | "baseline" | "mvp"
 *   group_size (Z), merge_factor (alpha), iteration_limit (T), grouping_seed,
 *   time_limit (seconds, whole run), rel_gap, solver_seed, jobs,
 *   integer_appointments, chair_symmetry_breaking
 */
cs_status cs_solve(const cs_instance* inst, const char* options_json, cs_solution** out_solution,
                   char** out_report_json);

/*
 * Scenario grouping plan for audit. options_json keys:
 *   method: "f-sgbd" | "c-sgbd" | "r-sgbd" (or "furthest"/"closest"/"random"),
 *   group_size, grouping_seed
 */
cs_status cs_grouping_plan(const cs_instance* inst, const char* options_json,
                           char** out_plan_json);

/* Value of the stochastic solution; options as in cs_solve (exact or SGBD). */
cs_status cs_compute_vss(const cs_instance* inst, const char* options_json,
                         char** out_result_json);

/*
 * Parameter sweep. spec_json keys:
 *   parameter: "J" | "lambda" | "nurses" | "chairs"
 *   values: [..], instance_seeds: [..],
 *   sampler: sampling spec as in cs_instance_sample (its seed is replaced
 *            per instance), method: solve options as in cs_solve
 * Returns the comma-separated table and the rows as JSON.
 */
cs_status cs_run_sweep(const char* spec_json, char** out_table_csv, char** out_rows_json);

/* Write the extensive form (all scenarios) in MPS format. */
cs_status cs_export_mps(const cs_instance* inst, const char* options_json, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CHEMOSCHED_H */
