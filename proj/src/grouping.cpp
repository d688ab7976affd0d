#include <cmath>
#include <limits>
#include <random>

#include "chemosched/sgbd.hpp"

namespace chemosched {

double scenario_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("duration vectors differ in length");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

namespace {

struct GroupShape {
  int num_groups = 0;
  int regular_size = 0;
  int last_size = 0;
};

GroupShape shape_for(int num_scenarios, int group_size) {
  if (group_size < 1 || group_size > num_scenarios) {
    throw Error("group size must lie in 1..num_scenarios");
  }
  GroupShape shape;
  shape.num_groups = (num_scenarios + group_size - 1) / group_size;
  shape.regular_size = group_size;
  shape.last_size = num_scenarios - group_size * (shape.num_groups - 1);
  return shape;
}

// Seeded-uniform pick among the still-ungrouped scenarios.
int pick_ungrouped(const std::vector<bool>& grouped, int remaining, std::mt19937_64& rng) {
  const auto target = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(remaining));
  std::size_t seen = 0;
  for (std::size_t w = 0; w < grouped.size(); ++w) {
    if (grouped[w]) continue;
    if (seen == target) return static_cast<int>(w);
    ++seen;
  }
  throw Error("internal: no ungrouped scenario left");
}

GroupingPlan centroid_grouping(const Instance& inst, int group_size, std::uint64_t seed,
                               bool furthest) {
  const int total = inst.num_scenarios();
  const auto shape = shape_for(total, group_size);
  const int P = inst.num_patients();

  GroupingPlan plan;
  plan.method = furthest ? "furthest" : "closest";
  plan.group_size = group_size;
  plan.seed = seed;

  std::mt19937_64 rng(seed);
  std::vector<bool> grouped(total, false);
  int remaining = total;

  for (int g = 0; g < shape.num_groups; ++g) {
    const int want = (g == shape.num_groups - 1) ? shape.last_size : shape.regular_size;
    std::vector<int> members;
    const int first = pick_ungrouped(grouped, remaining, rng);
    grouped[first] = true;
    --remaining;
    members.push_back(first);
    std::vector<double> centroid = inst.scenario_durations[first];

    while (static_cast<int>(members.size()) < want) {
      int chosen = -1;
      double best = furthest ? -1.0 : std::numeric_limits<double>::infinity();
      for (int w = 0; w < total; ++w) {
        if (grouped[w]) continue;
        const double d = scenario_distance(centroid, inst.scenario_durations[w]);
        const bool better = furthest ? d > best : d < best;
        if (better) {  // ties keep the lowest scenario index
          best = d;
          chosen = w;
        }
      }
      grouped[chosen] = true;
      --remaining;
      members.push_back(chosen);
      // Incremental centroid update: r <- (z*r + t_new) / (z+1).
      const double z = static_cast<double>(members.size() - 1);
      const auto& t = inst.scenario_durations[chosen];
      for (int i = 0; i < P; ++i) centroid[i] = (z * centroid[i] + t[i]) / (z + 1.0);
    }
    plan.groups.push_back(std::move(members));
  }
  return plan;
}

}  // namespace

GroupingPlan group_furthest(const Instance& inst, int group_size, std::uint64_t seed) {
  return centroid_grouping(inst, group_size, seed, true);
}

GroupingPlan group_closest(const Instance& inst, int group_size, std::uint64_t seed) {
  return centroid_grouping(inst, group_size, seed, false);
}

GroupingPlan group_random(const Instance& inst, int group_size, std::uint64_t seed) {
  const int total = inst.num_scenarios();
  const auto shape = shape_for(total, group_size);

  GroupingPlan plan;
  plan.method = "random";
  plan.group_size = group_size;
  plan.seed = seed;

  std::mt19937_64 rng(seed);
  std::vector<bool> grouped(total, false);
  int remaining = total;
  for (int g = 0; g < shape.num_groups; ++g) {
    const int want = (g == shape.num_groups - 1) ? shape.last_size : shape.regular_size;
    std::vector<int> members;
    for (int z = 0; z < want; ++z) {
      const int w = pick_ungrouped(grouped, remaining, rng);
      grouped[w] = true;
      --remaining;
      members.push_back(w);
    }
    plan.groups.push_back(std::move(members));
  }
  return plan;
}

}  // namespace chemosched
