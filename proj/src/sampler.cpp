#include "chemosched/sampler.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace chemosched {

std::vector<PatientTypeRow> default_type_table() {
  return {
      {1, 0.2696, 16.0, 44.0},
      {2, 0.0785, 29.0, 80.0},
      {3, 0.3333, 74.0, 132.0},
      {4, 0.3186, 125.0, 217.0},
  };
}

std::vector<int> paper_instance_types(int instance_no) {
  // Rows as published (type labels 0..3), remapped to 1..4.
  static const int rows[10][9] = {
      {0, 2, 0, 0, 3, 2, 1, 3, 2},
      {0, 3, 2, 2, 1, 2, 3, 3, 0},
      {2, 0, 2, 2, 2, 2, 3, 2, 3},
      {3, 0, 3, 0, 2, 0, 3, 2, 2},
      {3, 0, 3, 2, 0, 2, 2, 2, 2},
      {3, 2, 0, 2, 1, 0, 3, 2, 0},
      {0, 3, 3, 2, 0, 2, 2, 3, 0},
      {1, 2, 3, 3, 3, 2, 3, 0, 0},
      {2, 0, 1, 2, 2, 3, 0, 1, 3},
      {0, 0, 3, 2, 2, 3, 0, 2, 0},
  };
  if (instance_no < 1 || instance_no > 10) {
    std::ostringstream os;
    os << "instance_no " << instance_no << " outside 1..10";
    throw InvalidArgumentError(os.str());
  }
  std::vector<int> types(9);
  for (int i = 0; i < 9; ++i) types[i] = rows[instance_no - 1][i] + 1;
  return types;
}

std::vector<std::string> validate_sampler_spec(const SamplerSpec& spec) {
  std::vector<std::string> out;
  if (spec.type_table.empty()) out.push_back("type_table: must not be empty");
  double total = 0.0;
  for (const auto& row : spec.type_table) {
    total += row.fraction;
    if (row.fraction < 0.0) out.push_back("type_table: negative fraction");
    if (!(row.low_minutes <= row.high_minutes)) {
      out.push_back("type_table: interval low must not exceed high");
    }
    if (!(row.low_minutes > 0.0)) out.push_back("type_table: interval low must be > 0");
  }
  if (!spec.type_table.empty() && std::abs(total - 1.0) > 1e-9) {
    out.push_back("type_table: fractions must sum to 1");
  }
  if (spec.num_scenarios < 1) out.push_back("n_scenarios: must be >= 1");
  if (spec.explicit_types) {
    if (spec.explicit_types->empty()) out.push_back("explicit_types: must not be empty");
    for (int t : *spec.explicit_types) {
      bool known = false;
      for (const auto& row : spec.type_table) known = known || row.type == t;
      if (!known) {
        std::ostringstream os;
        os << "explicit_types: type " << t << " missing from the type table";
        out.push_back(os.str());
      }
    }
  } else if (spec.num_patients < 1) {
    out.push_back("num_patients: must be >= 1 when no explicit types are given");
  }
  return out;
}

namespace {

// Portable uniform in [0,1): top 53 bits of the raw draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const PatientTypeRow& row_for_type(const SamplerSpec& spec, int type) {
  for (const auto& row : spec.type_table) {
    if (row.type == type) return row;
  }
  throw Error("type table has no entry for the requested patient type");
}

}  // namespace

Instance sample_instance(const SamplerSpec& spec, const ResourceParams& base) {
  const auto problems = validate_sampler_spec(spec);
  if (!problems.empty()) throw InvalidArgumentError("invalid sampler spec: " + problems.front());
  if (base.num_nurses < 1 || base.num_chairs < 1) {
    throw InvalidArgumentError("invalid sampler base: nurse and chair counts must be >= 1");
  }

  std::mt19937_64 rng(spec.rng_seed);

  std::vector<int> types;
  if (spec.explicit_types) {
    types = *spec.explicit_types;
  } else {
    types.resize(spec.num_patients);
    for (int i = 0; i < spec.num_patients; ++i) {
      const double u = unit_uniform(rng);
      double cum = 0.0;
      types[i] = spec.type_table.back().type;
      for (const auto& row : spec.type_table) {
        cum += row.fraction;
        if (u < cum) {
          types[i] = row.type;
          break;
        }
      }
    }
  }

  const int P = static_cast<int>(types.size());
  Instance inst;
  inst.num_nurses = base.num_nurses;
  inst.num_chairs = base.num_chairs;
  inst.premed_minutes = base.premed_minutes;
  inst.shift_minutes = base.shift_minutes;
  inst.overtime_limit_minutes =
      base.overtime_limit_minutes ? *base.overtime_limit_minutes : base.shift_minutes;
  inst.lambda_weight = base.lambda_weight;
  inst.flexibility_limit = base.flexibility_limit;

  std::vector<int> all_nurses(base.num_nurses);
  for (int n = 0; n < base.num_nurses; ++n) all_nurses[n] = n;
  for (int i = 0; i < P; ++i) {
    PatientSpec p;
    p.index = i;
    p.patient_type = types[i];
    inst.patients.push_back(p);
    inst.primary_nurse.push_back(i % base.num_nurses);
    inst.eligible_nurses.push_back(all_nurses);
  }

  inst.scenario_durations.resize(spec.num_scenarios);
  for (int w = 0; w < spec.num_scenarios; ++w) {
    auto& row = inst.scenario_durations[w];
    row.resize(P);
    for (int i = 0; i < P; ++i) {
      const auto& t = row_for_type(spec, types[i]);
      row[i] = t.low_minutes + unit_uniform(rng) * (t.high_minutes - t.low_minutes);
    }
  }

  inst.meta["generator"] = "chemosched-sampler";
  inst.meta["rng"] = "mt19937_64";
  {
    std::ostringstream os;
    os << spec.rng_seed;
    inst.meta["seed"] = os.str();
  }
  return inst;
}

}  // namespace chemosched
