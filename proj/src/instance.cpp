#include "chemosched/types.hpp"

#include <algorithm>

namespace chemosched {

PrecedenceMatrix PrecedenceMatrix::from_order(const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  PrecedenceMatrix u(n);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      u.set(order[p], order[q], true);
    }
  }
  return u;
}

bool Instance::nurse_eligible(int patient, int nurse) const {
  const auto& set = eligible_nurses[patient];
  return std::find(set.begin(), set.end(), nurse) != set.end();
}

double Instance::big_m() const {
  if (big_m_override) return *big_m_override;
  double worst = 0.0;
  for (const auto& row : scenario_durations) {
    double total = 0.0;
    for (double t : row) total += premed_minutes + t;
    worst = std::max(worst, total);
  }
  return shift_minutes + overtime_limit_minutes + worst;
}

}  // namespace chemosched
