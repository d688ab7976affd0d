#include "chemosched/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace chemosched {
namespace {

std::string fmt_patient(int i) {
  std::ostringstream os;
  os << "patient " << i;
  return os.str();
}

// A tournament restricted to `members` is acyclic iff it is a total order,
// i.e. out-degrees within the group are a permutation of 0..k-1.
bool restriction_acyclic(const PrecedenceMatrix& u, const std::vector<int>& members) {
  const int k = static_cast<int>(members.size());
  std::set<int> degrees;
  for (int i : members) {
    int out = 0;
    for (int j : members) {
      if (i != j && u.before(i, j)) ++out;
    }
    degrees.insert(out);
  }
  if (static_cast<int>(degrees.size()) != k) return false;
  return degrees.empty() || (*degrees.begin() == 0 && *degrees.rbegin() == k - 1);
}

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  std::ostringstream os;
  auto add = [&](const std::string& msg) { out.push_back(msg); };

  const int P = inst.num_patients();
  if (P == 0) add("patients: instance has no patients");
  if (inst.num_nurses < 1) add("nurses: count must be at least 1");
  if (inst.num_chairs < 1) add("chairs: count must be at least 1");

  std::set<int> seen;
  for (int i = 0; i < P; ++i) {
    const auto& p = inst.patients[i];
    if (p.index != i) {
      os.str("");
      os << "patients: entry " << i << " carries index " << p.index << " (expected 0.." << P - 1
         << " in order)";
      add(os.str());
    }
    if (!seen.insert(p.index).second) {
      os.str("");
      os << "patients: duplicate index " << p.index;
      add(os.str());
    }
    if (p.patient_type && (*p.patient_type < 1 || *p.patient_type > 4)) {
      os.str("");
      os << "patients: " << fmt_patient(i) << " has type " << *p.patient_type
         << " outside {1,2,3,4}";
      add(os.str());
    }
  }

  if (static_cast<int>(inst.eligible_nurses.size()) != P) {
    add("eligible_nurses: one set per patient required");
  }
  if (static_cast<int>(inst.primary_nurse.size()) != P) {
    add("primary_nurse: one nurse per patient required");
  }
  for (int i = 0; i < P && i < static_cast<int>(inst.eligible_nurses.size()); ++i) {
    const auto& set = inst.eligible_nurses[i];
    if (set.empty()) {
      add("eligible_nurses: " + fmt_patient(i) + " has an empty eligible set");
    }
    for (int n : set) {
      if (n < 0 || n >= inst.num_nurses) {
        os.str("");
        os << "eligible_nurses: " << fmt_patient(i) << " lists nurse " << n << " outside 0.."
           << inst.num_nurses - 1;
        add(os.str());
      }
    }
    if (i < static_cast<int>(inst.primary_nurse.size())) {
      const int pn = inst.primary_nurse[i];
      if (pn < 0 || pn >= inst.num_nurses) {
        os.str("");
        os << "primary_nurse: " << fmt_patient(i) << " names nurse " << pn << " outside 0.."
           << inst.num_nurses - 1;
        add(os.str());
      } else if (!inst.nurse_eligible(i, pn)) {
        os.str("");
        os << "primary_nurse: " << fmt_patient(i) << "'s primary nurse " << pn
           << " is not in its eligible set";
        add(os.str());
      }
    }
  }

  if (inst.premed_minutes < 0.0) add("premed_duration_s: must be >= 0");
  if (!(inst.shift_minutes > 0.0)) add("shift_length_H: must be > 0");
  if (inst.overtime_limit_minutes < 0.0) add("overtime_limit_L: must be >= 0");
  if (inst.lambda_weight < 0.0 || inst.lambda_weight > 1.0) {
    add("lambda_weight: must lie in [0,1]");
  }
  if (inst.flexibility_limit < 0) add("flexibility_limit_J: must be >= 0");

  if (inst.num_scenarios() == 0) add("scenarios: at least one scenario required");
  for (int w = 0; w < inst.num_scenarios(); ++w) {
    const auto& row = inst.scenario_durations[w];
    if (static_cast<int>(row.size()) != P) {
      os.str("");
      os << "scenarios: scenario " << w << " covers " << row.size() << " patients (expected " << P
         << ")";
      add(os.str());
      continue;
    }
    for (int i = 0; i < P; ++i) {
      if (!(row[i] > 0.0)) {
        os.str("");
        os << "scenarios: duration of " << fmt_patient(i) << " in scenario " << w
           << " must be > 0";
        add(os.str());
      }
    }
  }

  if (inst.big_m_override && inst.num_scenarios() > 0 &&
      static_cast<int>(inst.scenario_durations[0].size()) == P) {
    Instance derived = inst;
    derived.big_m_override.reset();
    if (*inst.big_m_override < derived.big_m() - 1e-9) {
      os.str("");
      os << "big_M: override " << *inst.big_m_override << " is below the safe value "
         << derived.big_m();
      add(os.str());
    }
  }
  return out;
}

std::vector<std::string> validate_first_stage(const Instance& inst, const FirstStageSolution& sol,
                                              double tol) {
  std::vector<std::string> out;
  std::ostringstream os;
  const int P = inst.num_patients();

  if (sol.precedence.size() != P || static_cast<int>(sol.appointments.size()) != P ||
      static_cast<int>(sol.nurse_of.size()) != P || static_cast<int>(sol.chair_of.size()) != P) {
    out.push_back("solution: dimensions do not match the instance");
    return out;
  }

  for (int i = 0; i < P; ++i) {
    for (int j = i + 1; j < P; ++j) {
      const int sum = (sol.precedence.before(i, j) ? 1 : 0) + (sol.precedence.before(j, i) ? 1 : 0);
      if (sum != 1) {
        os.str("");
        os << "precedence_u: pair (" << i << "," << j << ") violates u_ij + u_ji = 1";
        out.push_back(os.str());
      }
    }
  }

  for (int i = 0; i < P; ++i) {
    if (sol.appointments[i] < -tol) {
      os.str("");
      os << "appointment_a: " << fmt_patient(i) << " has negative appointment time";
      out.push_back(os.str());
    }
    for (int j = 0; j < P; ++j) {
      if (i != j && sol.precedence.before(i, j) &&
          sol.appointments[j] < sol.appointments[i] - tol) {
        os.str("");
        os << "appointment_a: u(" << i << "," << j << ")=1 but a_" << j << " < a_" << i;
        out.push_back(os.str());
      }
    }
  }

  int reassigned = 0;
  for (int i = 0; i < P; ++i) {
    const int n = sol.nurse_of[i];
    if (n < 0 || n >= inst.num_nurses || !inst.nurse_eligible(i, n)) {
      os.str("");
      os << "nurse_x: " << fmt_patient(i) << " assigned to ineligible nurse " << n;
      out.push_back(os.str());
    } else if (n != inst.primary_nurse[i]) {
      ++reassigned;
    }
    const int c = sol.chair_of[i];
    if (c < 0 || c >= inst.num_chairs) {
      os.str("");
      os << "chair_y: " << fmt_patient(i) << " assigned to chair " << c << " outside 0.."
         << inst.num_chairs - 1;
      out.push_back(os.str());
    }
  }
  if (reassigned > inst.flexibility_limit) {
    os.str("");
    os << "flexibility: " << reassigned << " non-primary assignments exceed the limit J="
       << inst.flexibility_limit;
    out.push_back(os.str());
  }

  for (int n = 0; n < inst.num_nurses; ++n) {
    std::vector<int> members;
    for (int i = 0; i < P; ++i) {
      if (sol.nurse_of[i] == n) members.push_back(i);
    }
    if (!restriction_acyclic(sol.precedence, members)) {
      os.str("");
      os << "precedence_u: cycle among the patients of nurse " << n;
      out.push_back(os.str());
    }
  }
  for (int c = 0; c < inst.num_chairs; ++c) {
    std::vector<int> members;
    for (int i = 0; i < P; ++i) {
      if (sol.chair_of[i] == c) members.push_back(i);
    }
    if (!restriction_acyclic(sol.precedence, members)) {
      os.str("");
      os << "precedence_u: cycle among the patients of chair " << c;
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace chemosched
