#include <algorithm>
#include <numeric>

#include "chemosched/analysis.hpp"
#include "chemosched/evaluator.hpp"

namespace chemosched {

namespace {

// Expected infusion duration used for baseline construction only: the
// published interval midpoint for typed patients (no peeking at sampled
// scenarios), the scenario mean as a fallback for hand-built patients.
double expected_duration(const Instance& inst, int patient) {
  if (inst.patients[patient].patient_type) {
    for (const auto& row : default_type_table()) {
      if (row.type == *inst.patients[patient].patient_type) {
        return 0.5 * (row.low_minutes + row.high_minutes);
      }
    }
  }
  double mean = 0.0;
  for (const auto& scenario : inst.scenario_durations) mean += scenario[patient];
  return mean / static_cast<double>(inst.num_scenarios());
}

}  // namespace

FirstStageSolution baseline_schedule(const Instance& inst) {
  const int P = inst.num_patients();
  const double kSecondSlotMinutes = 150.0;  // 10:30 on a shift that opens 8:00

  std::vector<double> expected(P);
  for (int i = 0; i < P; ++i) expected[i] = expected_duration(inst, i);

  // Longer expected treatments first; ties by patient index.
  std::vector<int> order(P);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return expected[a] > expected[b]; });

  FirstStageSolution sol;
  sol.precedence = PrecedenceMatrix::from_order(order);
  sol.appointments.assign(P, 0.0);
  const int first_slot = (P + 1) / 2;
  for (int pos = 0; pos < P; ++pos) {
    sol.appointments[order[pos]] = pos < first_slot ? 0.0 : kSecondSlotMinutes;
  }
  sol.nurse_of = inst.primary_nurse;

  // First fit on expected timelines: each patient in sequence takes the
  // chair that frees up earliest (ties to the lowest chair index).
  sol.chair_of.assign(P, 0);
  std::vector<double> chair_free(inst.num_chairs, 0.0);
  for (int pos = 0; pos < P; ++pos) {
    const int i = order[pos];
    int chair = 0;
    for (int c = 1; c < inst.num_chairs; ++c) {
      if (chair_free[c] < chair_free[chair]) chair = c;
    }
    const double start = std::max(sol.appointments[i], chair_free[chair]);
    chair_free[chair] = start + inst.premed_minutes + expected[i];
    sol.chair_of[i] = chair;
  }
  return sol;
}

}  // namespace chemosched
