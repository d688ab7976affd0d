#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemosched {

inline constexpr const char* kVersion = "0.1.0";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

struct PatientSpec {
  int index = 0;
  std::optional<int> patient_type;  // 1..4 when drawn from a type table, absent for hand-built instances
};

/// Square 0/1 precedence matrix u. u(i,j)=1 means patient i precedes
/// patient j in the daily appointment list. Diagonal is unused.
class PrecedenceMatrix {
 public:
  PrecedenceMatrix() = default;
  explicit PrecedenceMatrix(int n) : n_(n), bits_(static_cast<std::size_t>(n) * n, 0) {}

  /// Tournament induced by a total order (order[k] = patient at position k).
  static PrecedenceMatrix from_order(const std::vector<int>& order);

  int size() const { return n_; }
  bool before(int i, int j) const { return bits_[index(i, j)] != 0; }
  void set(int i, int j, bool value) { bits_[index(i, j)] = value ? 1 : 0; }

  bool operator==(const PrecedenceMatrix& other) const = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// One daily scheduling problem: patients, resources, cost parameters and
/// the scenario matrix of infusion durations (uniform scenario weights).
struct Instance {
  std::vector<PatientSpec> patients;
  int num_nurses = 0;
  int num_chairs = 0;
  std::vector<std::vector<int>> eligible_nurses;  // N_i per patient, sorted
  std::vector<int> primary_nurse;                 // one nurse index per patient

  double premed_minutes = 0.0;          // s
  double shift_minutes = 0.0;           // H
  double overtime_limit_minutes = 0.0;  // L
  double lambda_weight = 0.0;           // weight on waiting time, in [0,1]
  int flexibility_limit = 0;            // J, max assignments to non-primary nurses

  std::vector<std::vector<double>> scenario_durations;  // [scenario][patient], minutes

  std::optional<double> big_m_override;     // absent: derived, see big_m()
  std::map<std::string, std::string> meta;  // provenance (seeds, generator), round-tripped verbatim

  int num_patients() const { return static_cast<int>(patients.size()); }
  int num_scenarios() const { return static_cast<int>(scenario_durations.size()); }
  double scenario_probability() const { return 1.0 / static_cast<double>(num_scenarios()); }
  bool nurse_eligible(int patient, int nurse) const;

  /// H + L + max over scenarios of sum_i (s + t_i): large enough to
  /// deactivate any relaxed sequencing or overtime constraint.
  double big_m() const;
};

struct FirstStageSolution {
  PrecedenceMatrix precedence;       // u
  std::vector<double> appointments;  // a, minutes
  std::vector<int> nurse_of;         // x as an index map
  std::vector<int> chair_of;         // y as an index map
};

struct ScenarioOutcome {
  std::vector<double> waits;      // per patient, minutes
  std::vector<double> overtimes;  // per nurse, minutes
  double cost = 0.0;              // lambda*sum(waits) + (1-lambda)*sum(overtimes)
  bool within_overtime_limit = true;
};

/// Partition of the scenario index set produced by a grouping strategy.
struct GroupingPlan {
  std::string method;     // furthest | closest | random | singletons
  int group_size = 0;     // Z (0 when the method has no size parameter)
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> groups;  // disjoint cover of 0..num_scenarios-1
};

struct SolveReport {
  std::string method;              // exact | p-sgbd | f-sgbd | c-sgbd | r-sgbd | baseline | mvp | evaluate
  std::string status;              // optimal | feasible-with-gap | heuristic | evaluated
  double objective = 0.0;          // expected cost over the scenario set
  double expected_wait = 0.0;      // mean over scenarios of total waiting minutes
  double expected_overtime = 0.0;  // mean over scenarios of total overtime minutes
  double wall_time_seconds = 0.0;  // kept out of report files; see io.hpp

  std::optional<double> solver_bound;     // best bound proved by the MILP backend
  std::optional<double> exact_reference;  // reference objective, when one is known
  std::optional<double> gap_percent;      // 100*(objective - exact_reference)/exact_reference

  std::vector<double> candidate_objectives;  // SGBD: one evaluated objective per group
  std::vector<int> scenarios_over_limit;     // scenarios where some nurse overtime exceeds L
  std::map<std::string, std::string> params; // method parameters (Z, alpha, T, seeds, ...)
};

}  // namespace chemosched
