#include "chemosched/backend.hpp"

namespace chemosched {

bool MipProblem::is_mip() const {
  for (auto flag : integer_col) {
    if (flag) return true;
  }
  return false;
}

int MipProblem::add_col(double cost_coeff, double lower, double upper, bool integer,
                        std::string name) {
  cost.push_back(cost_coeff);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  integer_col.push_back(integer ? 1 : 0);
  col_names.push_back(std::move(name));
  return num_cols() - 1;
}

int MipProblem::add_row(double lower, double upper, std::span<const int> cols,
                        std::span<const double> vals, std::string name) {
  if (cols.size() != vals.size()) throw Error("row has mismatched index/value lengths");
  col_index.insert(col_index.end(), cols.begin(), cols.end());
  coeff.insert(coeff.end(), vals.begin(), vals.end());
  row_start.push_back(static_cast<int>(col_index.size()));
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_names.push_back(std::move(name));
  return num_rows() - 1;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleWithGap: return "feasible-with-gap";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimitNoIncumbent: return "time-limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

}  // namespace chemosched
