#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stackbench/types.hpp"

namespace stackbench {

// Table order; every serialized column list follows it.
enum class Metric {
  space_utilization,
  occupancy,
  decision_time,
  local_stability,
  static_stability,
  trajectory_length,
  collapsed_placement,
  dangerous_operation,
};
inline constexpr std::size_t kMetricCount = 8;

std::span<const Metric> all_metrics();
std::string_view metric_key(Metric m);    // "space_utilization"
std::string_view metric_label(Metric m);  // "Uti"
// Throws ConfigError for an unknown key.
Metric metric_from_key(std::string_view key);

enum class Direction { higher_better, lower_better };
Direction direction(Metric m);

enum class Setting { math_pack, physics_pack, execution_pack };
std::span<const Setting> all_settings();
std::string_view setting_key(Setting s);
// Accepts "math_pack" as well as the short form "math". Throws ConfigError.
Setting setting_from_key(std::string_view key);
// Metrics a setting populates, in table order.
std::span<const Metric> setting_metrics(Setting s);

struct MetricVector {
  std::array<std::optional<double>, kMetricCount> values{};

  std::optional<double> get(Metric m) const { return values[static_cast<std::size_t>(m)]; }
  void set(Metric m, std::optional<double> v) { values[static_cast<std::size_t>(m)] = v; }
  bool has(Metric m) const { return get(m).has_value(); }

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

struct WeightVector {
  std::vector<std::pair<Metric, double>> weights;

  double sum() const;
  std::optional<double> get(Metric m) const;
  // Throws ConfigError for negative, duplicate or non-unit-sum weights.
  void validate() const;
};

WeightVector setting_weights(Setting s);

// Min-max normalization over a cohort; an all-equal cohort maps to zeros.
// Throws InputError for a non-finite value, naming the algorithm (from
// `names` when given) and the metric.
std::vector<double> normalize(std::span<const double> values, Direction dir,
                              std::span<const std::string> names = {},
                              std::string_view metric = {});

// Σ w_j s_j. The populated entries of `scores` must be exactly the weight
// keys; throws ConfigError otherwise, or when the weights are invalid.
double weighted_score(const MetricVector& scores, const WeightVector& weights);

struct CohortEntry {
  std::string name;
  MetricVector raw;
  MetricVector normalized;
  double score{0.0};
  // Weighted metrics the entry had no value for; scored as 0.
  std::vector<Metric> missing;
};

struct ScoreReport {
  std::string dataset;
  Setting setting{Setting::math_pack};
  WeightVector weights;
  std::vector<CohortEntry> entries;  // cohort order as given
};

// Normalizes every weighted metric across the cohort and scores each entry.
// Entries lacking a metric are left out of its min/max and receive s = 0.
ScoreReport score_cohort(std::string dataset, Setting setting,
                         std::span<const std::pair<std::string, MetricVector>> cohort,
                         const WeightVector& weights);

}  // namespace stackbench
