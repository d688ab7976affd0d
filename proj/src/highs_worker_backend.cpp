#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "chemosched/backend.hpp"
#include "solver_worker_py.hpp"

namespace chemosched {
namespace {

using nlohmann::json;

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

const char* python_interpreter() {
  const char* env = std::getenv("CHEMOSCHED_PYTHON");
  return (env && *env) ? env : "python3";
}

class HighsWorkerBackend : public SolverBackend {
 public:
  HighsWorkerBackend() {
    ignore_sigpipe_once();
    spawn();
    const json pong = request({{"op", "ping"}});
    engine_ = pong.value("engine", "HiGHS");
    version_ = pong.value("version", "unknown");
  }

  ~HighsWorkerBackend() override {
    if (to_child_) {
      // Closing stdin ends the worker's request loop.
      std::fclose(to_child_);
      to_child_ = nullptr;
    }
    if (from_child_) {
      std::fclose(from_child_);
      from_child_ = nullptr;
    }
    if (pid_ > 0) {
      int status = 0;
      for (int attempt = 0; attempt < 200; ++attempt) {
        const pid_t r = waitpid(pid_, &status, WNOHANG);
        if (r != 0) return;
        usleep(10'000);
      }
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
    }
  }

  BackendCapabilities capabilities() override {
    BackendCapabilities caps;
    caps.engine = engine_;
    caps.version = version_;
    caps.binary_variables = true;
    caps.continuous_variables = true;
    caps.linear_constraints = true;
    caps.minimization = true;
    caps.time_limit = true;
    caps.gap_target = true;
    caps.deterministic_seed = true;
    return caps;
  }

  BackendSolution solve(const MipProblem& problem, const SolveLimits& limits) override {
    json req = make_request(problem, limits);
    req["solve"] = true;
    if (!limits.warm_start.empty()) {
      if (static_cast<int>(limits.warm_start.size()) != problem.num_cols()) {
        throw Error("warm start length does not match the model");
      }
      req["mip_start"] = limits.warm_start;
    }
    return parse_solution(request(req), problem);
  }

  void export_mps(const MipProblem& problem, const std::string& path) override {
    json req = make_request(problem, SolveLimits{});
    req["solve"] = false;
    req["write_mps"] = path;
    req["col_names"] = problem.col_names;
    req["row_names"] = problem.row_names;
    request(req);
  }

 private:
  static json make_request(const MipProblem& p, const SolveLimits& limits) {
    auto clamp = [](const std::vector<double>& v) {
      std::vector<double> out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::max(std::min(v[i], kInfinity), -kInfinity);
      }
      return out;
    };
    json req;
    req["op"] = "solve";
    req["cost"] = p.cost;
    req["col_lower"] = clamp(p.col_lower);
    req["col_upper"] = clamp(p.col_upper);
    req["integer"] = p.integer_col;
    req["row_start"] = p.row_start;
    req["col_index"] = p.col_index;
    req["coeff"] = p.coeff;
    req["row_lower"] = clamp(p.row_lower);
    req["row_upper"] = clamp(p.row_upper);
    req["offset"] = p.objective_offset;
    req["options"] = {
        {"time_limit", limits.time_limit_seconds},
        {"mip_rel_gap", limits.rel_gap},
        {"mip_abs_gap", limits.abs_gap},
        {"random_seed", limits.seed},
        {"primal_tolerance", limits.primal_tolerance},
        {"dual_tolerance", limits.dual_tolerance},
        {"integrality_tolerance", limits.integrality_tolerance},
    };
    return req;
  }

  BackendSolution parse_solution(const json& resp, const MipProblem& problem) {
    BackendSolution out;
    const std::string model_status = resp.value("model_status", "unknown");
    const bool feasible = resp.value("primal_feasible", false);
    out.detail = model_status;
    if (model_status == "Optimal" && feasible) {
      out.status = SolveStatus::Optimal;
    } else if (model_status == "Infeasible") {
      out.status = SolveStatus::Infeasible;
    } else if (feasible) {
      out.status = SolveStatus::FeasibleWithGap;
    } else if (model_status == "Time limit reached") {
      out.status = SolveStatus::TimeLimitNoIncumbent;
    } else {
      out.status = SolveStatus::Error;
    }
    if (feasible) {
      out.objective = resp.at("objective").get<double>();
      out.values = resp.at("values").get<std::vector<double>>();
      if (static_cast<int>(out.values.size()) != problem.num_cols()) {
        throw BackendError("solver worker returned a solution of the wrong length");
      }
    }
    if (resp.contains("bound")) out.bound = resp.at("bound").get<double>();
    return out;
  }

  void spawn() {
    int to_pipe[2];
    int from_pipe[2];
    if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0) {
      throw BackendError("cannot create pipes for the solver worker");
    }
    pid_ = fork();
    if (pid_ < 0) throw BackendError("cannot fork the solver worker");
    if (pid_ == 0) {
      dup2(to_pipe[0], STDIN_FILENO);
      dup2(from_pipe[1], STDOUT_FILENO);
      close(to_pipe[0]);
      close(to_pipe[1]);
      close(from_pipe[0]);
      close(from_pipe[1]);
      const char* python = python_interpreter();
      execlp(python, python, "-c", kSolverWorkerScript, static_cast<char*>(nullptr));
      std::perror("chemosched: exec solver worker");
      _exit(127);
    }
    close(to_pipe[0]);
    close(from_pipe[1]);
    to_child_ = fdopen(to_pipe[1], "w");
    from_child_ = fdopen(from_pipe[0], "r");
    if (!to_child_ || !from_child_) throw BackendError("cannot attach to the solver worker pipes");
  }

  json request(const json& req) {
    const std::string line = req.dump();
    if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size() ||
        std::fputc('\n', to_child_) == EOF || std::fflush(to_child_) != 0) {
      throw BackendError("solver worker is not accepting requests (is python3 with scipy available?)");
    }
    char* buf = nullptr;
    std::size_t cap = 0;
    // Skip anything that is not a protocol line; solver libraries may chat.
    while (true) {
      const ssize_t n = getline(&buf, &cap, from_child_);
      if (n < 0) {
        std::free(buf);
        throw BackendError(
            "solver worker terminated unexpectedly; the default backend needs python3 with "
            "scipy >= 1.9 (set CHEMOSCHED_PYTHON to pick an interpreter)");
      }
      json resp = json::parse(buf, buf + n, nullptr, false);
      if (resp.is_object() && resp.contains("ok")) {
        std::free(buf);
        if (!resp.at("ok").get<bool>()) {
          throw BackendError("solver worker error: " + resp.value("error", "unknown"));
        }
        return resp;
      }
    }
  }

  pid_t pid_ = -1;
  FILE* to_child_ = nullptr;
  FILE* from_child_ = nullptr;
  std::string engine_;
  std::string version_;
};

}  // namespace

std::unique_ptr<SolverBackend> make_highs_backend() {
  return std::make_unique<HighsWorkerBackend>();
}

}  // namespace chemosched
