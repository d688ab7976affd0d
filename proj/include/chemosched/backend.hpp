#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "chemosched/types.hpp"

namespace chemosched {

/// Bounds at or beyond this magnitude are treated as infinite.
inline constexpr double kInfinity = 1e30;

/// A mixed-integer linear program in row-wise sparse form, minimization.
struct MipProblem {
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<std::uint8_t> integer_col;
  std::vector<std::string> col_names;

  std::vector<int> row_start{0};
  std::vector<int> col_index;
  std::vector<double> coeff;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;

  double objective_offset = 0.0;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }
  bool is_mip() const;

  int add_col(double cost_coeff, double lower, double upper, bool integer,
              std::string name = {});
  int add_row(double lower, double upper, std::span<const int> cols,
              std::span<const double> vals, std::string name = {});
};

enum class SolveStatus {
  Optimal,             // proved optimal (within the requested gap)
  FeasibleWithGap,     // limit reached with an incumbent
  Infeasible,
  TimeLimitNoIncumbent,
  Error,
};

const char* to_string(SolveStatus status);

struct SolveLimits {
  double time_limit_seconds = 1e10;
  double rel_gap = 0.0;  // relative MIP gap target; 0 = prove optimality
  double abs_gap = 0.0;
  int seed = 0;
  double primal_tolerance = 1e-9;       // solver feasibility tolerances; the
  double dual_tolerance = 1e-9;         // defaults keep big-M noise far below
  double integrality_tolerance = 1e-9;  // the documented comparison slack
  std::vector<double> warm_start;  // full column vector; empty = no start
};

struct BackendCapabilities {
  std::string engine;
  std::string version;
  bool binary_variables = false;
  bool continuous_variables = false;
  bool linear_constraints = false;
  bool minimization = false;
  bool time_limit = false;
  bool gap_target = false;
  bool deterministic_seed = false;
};

struct BackendSolution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;  // incumbent objective (valid when has_solution())
  double bound = 0.0;      // best proved bound
  std::vector<double> values;
  std::string detail;

  bool has_solution() const {
    return status == SolveStatus::Optimal || status == SolveStatus::FeasibleWithGap;
  }
};

/// Contract every MILP engine must honor: binaries, continuous variables,
/// linear constraints, minimization, a wall-time limit, a relative-gap
/// target, and a deterministic seed where the engine supports one.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual BackendCapabilities capabilities() = 0;
  virtual BackendSolution solve(const MipProblem& problem, const SolveLimits& limits) = 0;
  /// Standard MPS text export of the model, for external-solver debugging.
  virtual void export_mps(const MipProblem& problem, const std::string& path) = 0;
};

/// Default backend: HiGHS, driven through a persistent worker process
/// (see src/highs_worker_backend.cpp for the wire protocol). Each call
/// creates an independent context, so concurrent solves need one backend
/// instance each.
std::unique_ptr<SolverBackend> make_highs_backend();

using BackendFactory = std::function<std::unique_ptr<SolverBackend>()>;

}  // namespace chemosched
