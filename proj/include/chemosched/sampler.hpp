#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chemosched/types.hpp"

namespace chemosched {

struct PatientTypeRow {
  int type = 0;           // 1..4 in the published table
  double fraction = 0.0;  // share of patients of this type
  double low_minutes = 0.0;
  double high_minutes = 0.0;  // infusion durations drawn uniformly from [low, high]
};

/// The published four-type table: fractions and duration intervals.
std::vector<PatientTypeRow> default_type_table();

/// Per-patient type vector of one of the ten published 9-patient instances
/// (the source table labels types 0..3; returned values are 1..4).
std::vector<int> paper_instance_types(int instance_no);

struct SamplerSpec {
  std::vector<PatientTypeRow> type_table = default_type_table();
  std::optional<std::vector<int>> explicit_types;  // per-patient types; sampled from fractions when absent
  int num_patients = 0;                            // ignored when explicit_types is given
  int num_scenarios = 0;
  std::uint64_t rng_seed = 0;
};

/// Resource-and-parameter bundle the sampler attaches to every instance.
struct ResourceParams {
  int num_nurses = 2;
  int num_chairs = 3;
  double premed_minutes = 15.0;
  double shift_minutes = 240.0;
  std::optional<double> overtime_limit_minutes;  // default: equal to the shift length
  double lambda_weight = 0.3;
  int flexibility_limit = 2;
};

std::vector<std::string> validate_sampler_spec(const SamplerSpec& spec);

/// Draw an instance: patient types (explicit or sampled by fraction), then
/// one duration per (scenario, patient) from the type's interval.
///
/// Determinism contract: the generator is std::mt19937_64 seeded with
/// spec.rng_seed; uniforms are (x >> 11) * 2^-53 mapped to [low, high);
/// draw order is all patient types (when sampled), then durations scenario
/// by scenario, patient by patient. Identical seeds give bit-identical
/// instances on any platform.
///
/// Primary nurses follow the round-robin rule: patient i -> nurse i mod N,
/// which reproduces the published odd/even split for two nurses. Eligible
/// sets default to all nurses.
Instance sample_instance(const SamplerSpec& spec, const ResourceParams& base);

}  // namespace chemosched
