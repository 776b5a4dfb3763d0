#include "stackbench/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace stackbench {

namespace {

using enum Metric;

constexpr std::array<Metric, kMetricCount> kMetrics{
    space_utilization, occupancy,         decision_time,       local_stability,
    static_stability,  trajectory_length, collapsed_placement, dangerous_operation};

struct MetricInfo {
  std::string_view key;
  std::string_view label;
  Direction dir;
};

constexpr std::array<MetricInfo, kMetricCount> kInfo{{
    {"space_utilization", "Uti", Direction::higher_better},
    {"occupancy", "Occ", Direction::higher_better},
    {"decision_time", "DecTime", Direction::lower_better},
    {"local_stability", "LocalStab", Direction::lower_better},
    {"static_stability", "StaticStab", Direction::higher_better},
    {"trajectory_length", "TrajLen", Direction::lower_better},
    {"collapsed_placement", "Collapsed", Direction::lower_better},
    {"dangerous_operation", "Dangerous", Direction::lower_better},
}};

constexpr std::array<Setting, 3> kSettings{Setting::math_pack, Setting::physics_pack,
                                           Setting::execution_pack};

constexpr double kWeightSumTolerance = 1e-9;

const MetricInfo& info(Metric m) { return kInfo[static_cast<std::size_t>(m)]; }

}  // namespace

std::span<const Metric> all_metrics() { return kMetrics; }
std::string_view metric_key(Metric m) { return info(m).key; }
std::string_view metric_label(Metric m) { return info(m).label; }
Direction direction(Metric m) { return info(m).dir; }

Metric metric_from_key(std::string_view key) {
  for (Metric m : kMetrics) {
    if (info(m).key == key) return m;
  }
  throw ConfigError("unknown metric '" + std::string(key) + "'");
}

std::span<const Setting> all_settings() { return kSettings; }

std::string_view setting_key(Setting s) {
  switch (s) {
    case Setting::math_pack: return "math_pack";
    case Setting::physics_pack: return "physics_pack";
    case Setting::execution_pack: return "execution_pack";
  }
  return "?";
}

Setting setting_from_key(std::string_view key) {
  if (key == "math_pack" || key == "math") return Setting::math_pack;
  if (key == "physics_pack" || key == "physics") return Setting::physics_pack;
  if (key == "execution_pack" || key == "execution") return Setting::execution_pack;
  throw ConfigError("unknown setting '" + std::string(key) + "'");
}

std::span<const Metric> setting_metrics(Setting s) {
  const std::span<const Metric> all = kMetrics;
  switch (s) {
    case Setting::math_pack: return all.first(3);
    case Setting::physics_pack: return all.first(5);
    case Setting::execution_pack: return all;
  }
  throw ConfigError("unknown setting");
}

double WeightVector::sum() const {
  double s = 0.0;
  for (const auto& [m, w] : weights) s += w;
  return s;
}

std::optional<double> WeightVector::get(Metric m) const {
  for (const auto& [k, w] : weights) {
    if (k == m) return w;
  }
  return std::nullopt;
}

void WeightVector::validate() const {
  std::array<bool, kMetricCount> seen{};
  for (const auto& [m, w] : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError("weight for " + std::string(metric_key(m)) + " must be finite and >= 0");
    }
    if (seen[static_cast<std::size_t>(m)]) {
      throw ConfigError("duplicate weight for " + std::string(metric_key(m)));
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
  if (std::abs(sum() - 1.0) > kWeightSumTolerance) {
    throw ConfigError("weights must sum to 1");
  }
}

WeightVector setting_weights(Setting s) {
  switch (s) {
    case Setting::execution_pack:
      return {{{space_utilization, 0.35},
               {occupancy, 0.15},
               {decision_time, 0.08},
               {local_stability, 0.07},
               {static_stability, 0.15},
               {trajectory_length, 0.08},
               {collapsed_placement, 0.07},
               {dangerous_operation, 0.05}}};
    case Setting::physics_pack:
      return {{{space_utilization, 0.43},
               {occupancy, 0.19},
               {decision_time, 0.10},
               {local_stability, 0.09},
               {static_stability, 0.19}}};
    case Setting::math_pack:
      return {{{space_utilization, 0.60}, {occupancy, 0.26}, {decision_time, 0.14}}};
  }
  throw ConfigError("unknown setting");
}

constexpr double kNormQuantum = 1e12;

std::vector<double> normalize(std::span<const double> values, Direction dir,
                              std::span<const std::string> names, std::string_view metric) {
  if (values.empty()) throw ContractViolation("normalize needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      const std::string who = i < names.size() ? names[i] : "#" + std::to_string(i);
      throw InputError("non-finite " + std::string(metric.empty() ? "metric" : metric) +
                       " value for " + who);
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(values.size(), 0.0);
  if (!(hi > lo)) return out;
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = dir == Direction::higher_better ? (values[i] - lo) / span : (hi - values[i]) / span;
    // Snap to a 1e-12 grid: subtraction noise would otherwise turn an exact
    // midpoint such as (0.5 - 0.2) / (0.8 - 0.2) into 0.49999999999999994.
    out[i] = std::clamp(std::round(s * kNormQuantum) / kNormQuantum, 0.0, 1.0);
  }
  return out;
}

double weighted_score(const MetricVector& scores, const WeightVector& weights) {
  weights.validate();
  for (Metric m : kMetrics) {
    if (scores.has(m) != weights.get(m).has_value()) {
      throw ConfigError("score and weight keys differ at " + std::string(metric_key(m)));
    }
  }
  double total = 0.0;
  for (const auto& [m, w] : weights.weights) total += w * *scores.get(m);
  return total;
}

ScoreReport score_cohort(std::string dataset, Setting setting,
                         std::span<const std::pair<std::string, MetricVector>> cohort,
                         const WeightVector& weights) {
  weights.validate();
  ScoreReport report;
  report.dataset = std::move(dataset);
  report.setting = setting;
  report.weights = weights;
  for (const auto& [name, raw] : cohort) {
    CohortEntry e;
    e.name = name;
    e.raw = raw;
    report.entries.push_back(std::move(e));
  }
  if (report.entries.empty()) return report;

  for (const auto& [m, w] : weights.weights) {
    std::vector<double> values;
    std::vector<std::string> names;
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      const CohortEntry& e = report.entries[i];
      if (auto v = e.raw.get(m)) {
        values.push_back(*v);
        names.push_back(e.name);
        owners.push_back(i);
      }
    }
    for (CohortEntry& e : report.entries) {
      if (!e.raw.has(m)) {
        e.normalized.set(m, 0.0);
        e.missing.push_back(m);
      }
    }
    if (values.empty()) continue;
    const std::vector<double> s = normalize(values, direction(m), names, metric_key(m));
    for (std::size_t k = 0; k < owners.size(); ++k) report.entries[owners[k]].normalized.set(m, s[k]);
  }
  for (CohortEntry& e : report.entries) e.score = weighted_score(e.normalized, weights);
  return report;
}

}  // namespace stackbench
