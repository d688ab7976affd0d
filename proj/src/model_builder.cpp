#include <algorithm>
#include <sstream>

#include "chemosched/milp.hpp"

namespace chemosched {

namespace {

std::string name2(const char* base, int i, int j) {
  std::ostringstream os;
  os << base << "[" << i << "," << j << "]";
  return os.str();
}

std::string name3(const char* base, int i, int j, int k) {
  std::ostringstream os;
  os << base << "[" << i << "," << j << "," << k << "]";
  return os.str();
}

}  // namespace

int ModelHandle::count_cols(char symbol) const {
  const auto it = col_counts_.find(symbol);
  return it == col_counts_.end() ? 0 : it->second;
}

int ModelHandle::count_rows(int family) const {
  const auto it = row_counts_.find(family);
  return it == row_counts_.end() ? 0 : it->second;
}

ModelHandle build_extensive_form(const Instance& inst, const std::vector<int>& scenario_subset,
                                 const BuildOptions& options) {
  if (scenario_subset.empty()) throw Error("scenario subset must not be empty");
  for (int w : scenario_subset) {
    if (w < 0 || w >= inst.num_scenarios()) throw Error("scenario subset index out of range");
  }

  ModelHandle model;
  model.instance_ = inst;
  model.subset_ = scenario_subset;
  model.options_ = options;
  MipProblem& mp = model.problem_;

  const int P = inst.num_patients();
  const int N = inst.num_nurses;
  const int C = inst.num_chairs;
  const int K = static_cast<int>(scenario_subset.size());
  const double s = inst.premed_minutes;
  const double H = inst.shift_minutes;
  const double L = inst.overtime_limit_minutes;
  const double lambda = inst.lambda_weight;
  // No treatment can start later than this in any feasible schedule.
  const double start_bound = H + L;

  auto& counts = model.col_counts_;

  model.u_cols_.assign(P * P, -1);
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j) continue;
      model.u_cols_[model.flat(i, j)] = mp.add_col(0.0, 0.0, 1.0, true, name2("u", i, j));
      ++counts['u'];
    }
  }
  model.a_cols_.assign(P, -1);
  for (int i = 0; i < P; ++i) {
    std::ostringstream os;
    os << "a[" << i << "]";
    model.a_cols_[i] =
        mp.add_col(0.0, 0.0, start_bound, options.integer_appointments, os.str());
    ++counts['a'];
  }
  model.x_cols_.assign(P * N, -1);
  for (int i = 0; i < P; ++i) {
    for (int n : inst.eligible_nurses[i]) {
      model.x_cols_[i * N + n] = mp.add_col(0.0, 0.0, 1.0, true, name2("x", i, n));
      ++counts['x'];
    }
  }
  model.y_cols_.assign(P * C, -1);
  for (int i = 0; i < P; ++i) {
    for (int c = 0; c < C; ++c) {
      // Chair symmetry breaking, part 1: patient i uses chairs 0..i only.
      const double upper = (options.chair_symmetry_breaking && c > i) ? 0.0 : 1.0;
      model.y_cols_[i * C + c] = mp.add_col(0.0, 0.0, upper, true, name2("y", i, c));
      ++counts['y'];
    }
  }
  model.w_cols_.assign(K * P, -1);
  model.o_cols_.assign(K * N, -1);
  for (int k = 0; k < K; ++k) {
    const int omega = scenario_subset[k];
    for (int i = 0; i < P; ++i) {
      model.w_cols_[k * P + i] =
          mp.add_col(lambda / K, 0.0, start_bound, false, name2("w", omega, i));
      ++counts['w'];
    }
    for (int n = 0; n < N; ++n) {
      model.o_cols_[k * N + n] =
          mp.add_col((1.0 - lambda) / K, 0.0, L, false, name2("o", omega, n));
      ++counts['o'];
    }
  }
  // Linking columns: q(i,j,n) = 1 when patient j is assigned to nurse n and
  // comes after patient i; they disarm the overtime row of every patient
  // that is not the nurse's last.
  model.q_cols_.assign(P * P * N, -1);
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j) continue;
      for (int n : inst.eligible_nurses[i]) {
        if (!inst.nurse_eligible(j, n)) continue;
        model.q_cols_[model.flat(i, j) * N + n] =
            mp.add_col(0.0, 0.0, 1.0, false, name3("q", i, j, n));
        ++counts['q'];
      }
    }
  }

  auto& rows = model.row_counts_;
  auto add_row = [&](int family, double lower, double upper, std::vector<int> cols,
                     std::vector<double> vals, std::string name) {
    mp.add_row(lower, upper, cols, vals, std::move(name));
    ++rows[family];
  };

  // (2) tournament
  for (int i = 0; i < P; ++i) {
    for (int j = i + 1; j < P; ++j) {
      add_row(2, 1.0, 1.0, {model.col_u(i, j), model.col_u(j, i)}, {1.0, 1.0},
              name2("eq2", i, j));
    }
  }
  // (3) appointment order consistency
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j) continue;
      add_row(3, -start_bound, kInfinity,
              {model.col_a(j), model.col_a(i), model.col_u(i, j)}, {1.0, -1.0, -start_bound},
              name2("eq3", i, j));
    }
  }
  // (4) one chair, (5) one nurse
  for (int i = 0; i < P; ++i) {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int c = 0; c < C; ++c) {
      cols.push_back(model.col_y(i, c));
      vals.push_back(1.0);
    }
    std::ostringstream os;
    os << "eq4[" << i << "]";
    add_row(4, 1.0, 1.0, cols, vals, os.str());
  }
  for (int i = 0; i < P; ++i) {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int n : inst.eligible_nurses[i]) {
      cols.push_back(model.col_x(i, n));
      vals.push_back(1.0);
    }
    std::ostringstream os;
    os << "eq5[" << i << "]";
    add_row(5, 1.0, 1.0, cols, vals, os.str());
  }
  // (6) flexibility budget
  {
    std::vector<int> cols;
    std::vector<double> vals;
    for (int i = 0; i < P; ++i) {
      for (int n : inst.eligible_nurses[i]) {
        if (n == inst.primary_nurse[i]) continue;
        cols.push_back(model.col_x(i, n));
        vals.push_back(1.0);
      }
    }
    add_row(6, -kInfinity, static_cast<double>(inst.flexibility_limit), cols, vals, "eq6");
  }
  // (90) caps making q(i,j,n) <= u(i,j) * x(j,n)
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < P; ++j) {
      if (i == j) continue;
      for (int n = 0; n < N; ++n) {
        const int q = model.col_q(i, j, n);
        if (q < 0) continue;
        add_row(90, -kInfinity, 0.0, {q, model.col_u(i, j)}, {1.0, -1.0},
                name3("eq90a", i, j, n));
        add_row(90, -kInfinity, 0.0, {q, model.col_x(j, n)}, {1.0, -1.0},
                name3("eq90b", i, j, n));
      }
    }
  }
  // (91) chair symmetry breaking, part 2: chair c opens only after some
  // earlier-indexed patient opened chair c-1.
  if (options.chair_symmetry_breaking) {
    for (int c = 1; c < C; ++c) {
      for (int i = c; i < P; ++i) {
        std::vector<int> cols{model.col_y(i, c)};
        std::vector<double> vals{1.0};
        for (int j = c - 1; j < i; ++j) {
          cols.push_back(model.col_y(j, c - 1));
          vals.push_back(-1.0);
        }
        add_row(91, -kInfinity, 0.0, cols, vals, name2("eq91", i, c));
      }
    }
  }

  // (92) order transitivity: cyclic triples only ever matter for patients
  // sharing no resource, and any optimum can be expressed with a total
  // order, so these cuts sharpen the relaxation without losing solutions.
  if (options.order_transitivity_cuts) {
    for (int i = 0; i < P; ++i) {
      for (int j = 0; j < P; ++j) {
        if (j == i) continue;
        for (int k = i + 1; k < P; ++k) {
          if (k == j) continue;
          add_row(92, -kInfinity, 1.0,
                  {model.col_u(i, j), model.col_u(j, k), model.col_u(i, k)},
                  {1.0, 1.0, -1.0}, name3("eq92", i, j, k));
        }
      }
    }
  }

  // Second stage, one block per scenario in the subset.
  for (int k = 0; k < K; ++k) {
    const int omega = scenario_subset[k];
    const auto& t = inst.scenario_durations[omega];
    // (12) same nurse: premedication is one patient at a time
    for (int i = 0; i < P; ++i) {
      for (int j = 0; j < P; ++j) {
        if (i == j) continue;
        for (int n : inst.eligible_nurses[i]) {
          if (!inst.nurse_eligible(j, n)) continue;
          const double m12 = start_bound + s;
          add_row(12, s - 3.0 * m12, kInfinity,
                  {model.col_a(j), model.col_w(k, j), model.col_a(i), model.col_w(k, i),
                   model.col_u(i, j), model.col_x(i, n), model.col_x(j, n)},
                  {1.0, 1.0, -1.0, -1.0, -m12, -m12, -m12},
                  name3("eq12", omega, i, j) + "n" + std::to_string(n));
        }
      }
    }
    // (13) same chair: held through premedication and infusion
    for (int i = 0; i < P; ++i) {
      for (int j = 0; j < P; ++j) {
        if (i == j) continue;
        const double m13 = start_bound + s + t[i];
        for (int c = 0; c < C; ++c) {
          add_row(13, s + t[i] - 3.0 * m13, kInfinity,
                  {model.col_a(j), model.col_w(k, j), model.col_a(i), model.col_w(k, i),
                   model.col_u(i, j), model.col_y(i, c), model.col_y(j, c)},
                  {1.0, 1.0, -1.0, -1.0, -m13, -m13, -m13},
                  name3("eq13", omega, i, j) + "c" + std::to_string(c));
        }
      }
    }
    // (14) overtime of the nurse's last patient
    for (int i = 0; i < P; ++i) {
      for (int n : inst.eligible_nurses[i]) {
        const double m14 = L + s + t[i];
        std::vector<int> cols{model.col_o(k, n), model.col_a(i), model.col_w(k, i),
                              model.col_x(i, n)};
        std::vector<double> vals{1.0, -1.0, -1.0, -m14};
        for (int j = 0; j < P; ++j) {
          if (j == i) continue;
          const int q = model.col_q(i, j, n);
          if (q < 0) continue;
          cols.push_back(q);
          vals.push_back(m14);
        }
        add_row(14, s + t[i] - H - m14, kInfinity, cols, vals, name3("eq14", omega, i, n));
      }
    }
    // (15) lives in the upper bounds of the o columns; registered for counting.
    model.row_counts_[15] += N;
  }

  return model;
}

ModelHandle build_mean_value_problem(const Instance& inst, const BuildOptions& options) {
  Instance mean = inst;
  const int P = inst.num_patients();
  std::vector<double> avg(P, 0.0);
  for (const auto& row : inst.scenario_durations) {
    for (int i = 0; i < P; ++i) avg[i] += row[i];
  }
  for (int i = 0; i < P; ++i) avg[i] /= static_cast<double>(inst.num_scenarios());
  mean.scenario_durations = {avg};
  mean.meta["derived"] = "mean-value-problem";
  return build_extensive_form(mean, {0}, options);
}

}  // namespace chemosched
