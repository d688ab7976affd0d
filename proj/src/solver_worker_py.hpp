#pragma once

namespace chemosched {

// Source of the HiGHS worker process, executed as `python3 -c <script>`.
// One JSON request per stdin line, one JSON response per stdout line.
// Bounds with magnitude >= 1e30 travel as finite sentinels because JSON
// has no infinity; the worker maps them onto HiGHS infinities and clamps
// reported bounds the same way on the way out.
inline constexpr const char* kSolverWorkerScript = R"PYWORKER(
import json
import sys

import numpy as np


def load_core():
    try:
        from scipy.optimize._highspy import _core
        return _core
    except Exception:
        import highspy
        return highspy._core


core = load_core()
HIGHS_CLS = getattr(core, "_Highs", None) or getattr(core, "Highs")
INF = core.kHighsInf
SENTINEL = 1e30


def finite(x):
    return max(min(float(x), SENTINEL), -SENTINEL)


def as_bounds(values):
    arr = np.asarray(values, dtype=np.float64)
    arr[arr >= SENTINEL] = INF
    arr[arr <= -SENTINEL] = -INF
    return arr


def build_lp(req):
    lp = core.HighsLp()
    lp.num_col_ = len(req["cost"])
    lp.num_row_ = len(req["row_lower"])
    lp.col_cost_ = np.asarray(req["cost"], dtype=np.float64)
    lp.col_lower_ = as_bounds(req["col_lower"])
    lp.col_upper_ = as_bounds(req["col_upper"])
    lp.row_lower_ = as_bounds(req["row_lower"])
    lp.row_upper_ = as_bounds(req["row_upper"])
    lp.offset_ = float(req.get("offset", 0.0))
    lp.a_matrix_.format_ = core.MatrixFormat.kRowwise
    lp.a_matrix_.start_ = np.asarray(req["row_start"], dtype=np.int32)
    lp.a_matrix_.index_ = np.asarray(req["col_index"], dtype=np.int32)
    lp.a_matrix_.value_ = np.asarray(req["coeff"], dtype=np.float64)
    integrality = req.get("integer")
    if integrality and any(integrality):
        lp.integrality_ = np.asarray(
            [core.HighsVarType.kInteger if flag else core.HighsVarType.kContinuous
             for flag in integrality])
    if req.get("col_names"):
        lp.col_names_ = [str(n) for n in req["col_names"]]
    if req.get("row_names"):
        lp.row_names_ = [str(n) for n in req["row_names"]]
    return lp


def new_highs(options):
    h = HIGHS_CLS()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("log_to_console", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", int(options.get("random_seed", 0)))
    h.setOptionValue("time_limit", float(options.get("time_limit", 1e10)))
    h.setOptionValue("mip_rel_gap", float(options.get("mip_rel_gap", 0.0)))
    h.setOptionValue("mip_abs_gap", float(options.get("mip_abs_gap", 0.0)))
    h.setOptionValue("primal_feasibility_tolerance",
                     float(options.get("primal_tolerance", 1e-9)))
    h.setOptionValue("dual_feasibility_tolerance",
                     float(options.get("dual_tolerance", 1e-9)))
    h.setOptionValue("mip_feasibility_tolerance",
                     float(options.get("integrality_tolerance", 1e-9)))
    return h


def handle_solve(req):
    h = new_highs(req.get("options", {}))
    lp = build_lp(req)
    if h.passModel(lp) == core.HighsStatus.kError:
        return {"ok": False, "error": "HiGHS rejected the model"}
    start = req.get("mip_start")
    if start:
        sol = core.HighsSolution()
        sol.col_value = np.asarray(start, dtype=np.float64)
        h.setSolution(sol)
    path = req.get("write_mps")
    if path:
        if h.writeModel(path) == core.HighsStatus.kError:
            return {"ok": False, "error": "HiGHS could not write %s" % path}
    if not req.get("solve", True):
        return {"ok": True, "model_status": "Not run", "primal_feasible": False}
    h.run()
    info = h.getInfo()
    resp = {
        "ok": True,
        "model_status": h.modelStatusToString(h.getModelStatus()),
        "primal_feasible": bool(info.primal_solution_status == core.kSolutionStatusFeasible),
    }
    is_mip = bool(req.get("integer")) and any(req["integer"])
    if resp["primal_feasible"]:
        resp["objective"] = finite(info.objective_function_value)
        resp["values"] = [float(v) for v in h.getSolution().col_value]
        resp["bound"] = finite(info.mip_dual_bound) if is_mip else resp["objective"]
    elif is_mip:
        resp["bound"] = finite(info.mip_dual_bound)
    return resp


def main():
    h = HIGHS_CLS()
    version = h.version()
    del h
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            op = req.get("op")
            if op == "quit":
                print(json.dumps({"ok": True}), flush=True)
                return
            if op == "ping":
                resp = {"ok": True, "engine": "HiGHS", "version": version}
            elif op == "solve":
                resp = handle_solve(req)
            else:
                resp = {"ok": False, "error": "unknown op %r" % (op,)}
        except Exception as exc:
            resp = {"ok": False, "error": "%s: %s" % (type(exc).__name__, exc)}
        print(json.dumps(resp), flush=True)


main()
)PYWORKER";

}  // namespace chemosched
