#include "stackbench/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

namespace stackbench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view scope_key(NormalizationScope s) {
  return s == NormalizationScope::cell_mean ? "cell_mean" : "per_group";
}

NormalizationScope scope_from_key(std::string_view key) {
  if (key == "cell_mean") return NormalizationScope::cell_mean;
  if (key == "per_group") return NormalizationScope::per_group;
  throw ConfigError("unknown normalization scope '" + std::string(key) + "'");
}

WeightVector MatrixConfig::weights_for(Setting s) const {
  auto it = weights.find(s);
  return it == weights.end() ? setting_weights(s) : it->second;
}

void MatrixConfig::validate() const {
  if (datasets.empty()) throw ConfigError("matrix needs at least one dataset");
  if (settings.empty()) throw ConfigError("matrix needs at least one setting");
  if (solvers.empty()) throw ConfigError("matrix needs at least one solver");
  if (groups < 1) throw ConfigError("groups must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  std::set<std::string> names;
  for (const DatasetSpec& d : datasets) {
    if (!names.insert(d.config.name).second) {
      throw ConfigError("duplicate dataset '" + d.config.name + "'");
    }
    d.config.validate();
  }
  std::set<Setting> seen_settings;
  for (Setting s : settings) {
    if (!seen_settings.insert(s).second) throw ConfigError("duplicate setting");
  }
  std::set<std::string> labels;
  for (const SolverSpec& s : solvers) {
    if (!labels.insert(s.label).second) throw ConfigError("duplicate solver label '" + s.label + "'");
    (void)make_solver(s.solver, harness.solver);
  }
  for (const auto& [setting, w] : weights) {
    w.validate();
    const auto metrics = setting_metrics(setting);
    if (w.weights.size() != metrics.size() ||
        !std::all_of(metrics.begin(), metrics.end(), [&](Metric m) { return w.get(m).has_value(); })) {
      throw ConfigError("weights for " + std::string(setting_key(setting)) +
                        " must cover exactly the setting's metrics");
    }
  }
  if (!(harness.seconds_per_work > 0.0)) throw ConfigError("seconds_per_work must be > 0");
}

std::uint64_t dataset_seed(std::uint64_t master, const std::string& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dataset) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return group_seed(master ^ h, -1);
}

std::vector<ItemSequence> dataset_groups(const DatasetSpec& spec, std::uint64_t master, int groups) {
  if (!spec.file) return generate_groups(spec.config, dataset_seed(master, spec.config.name), groups);
  std::vector<ItemSequence> seqs = load_sequences(*spec.file);
  if (static_cast<int>(seqs.size()) < groups) {
    throw InputError(spec.file->string() + " has " + std::to_string(seqs.size()) +
                     " groups, " + std::to_string(groups) + " requested");
  }
  seqs.resize(static_cast<std::size_t>(groups));
  for (ItemSequence& s : seqs) {
    if (s.items.empty()) throw InputError("empty group in " + spec.file->string());
  }
  return seqs;
}

namespace {

MetricVector mean_metrics(const std::vector<const EpisodeSummary*>& eps) {
  MetricVector out;
  for (Metric m : all_metrics()) {
    double sum = 0.0;
    int n = 0;
    for (const EpisodeSummary* e : eps) {
      if (auto v = e->metrics.get(m)) {
        sum += *v;
        ++n;
      }
    }
    if (n > 0) out.set(m, sum / n);
  }
  return out;
}

fs::path log_path(const fs::path& dir, const std::string& dataset, Setting setting,
                  const std::string& solver, int group) {
  return dir / dataset / std::string(setting_key(setting)) / solver /
         ("g" + std::to_string(group) + ".jsonl");
}

json weights_json(const WeightVector& w) {
  json j = json::object();
  for (const auto& [m, v] : w.weights) j[std::string(metric_key(m))] = v;
  return j;
}

WeightVector weights_from(const json& j) {
  WeightVector w;
  for (const auto& [k, v] : j.items()) w.weights.emplace_back(metric_from_key(k), v.get<double>());
  return w;
}

void check_paired(const CellResult& cell) {
  std::map<int, std::string> hashes;
  for (const EpisodeSummary& e : cell.episodes) {
    auto [it, inserted] = hashes.try_emplace(e.group, e.sequence_hash);
    if (!inserted && it->second != e.sequence_hash) {
      throw InputError("group " + std::to_string(e.group) + " of " + cell.dataset +
                       " saw different sequences across solvers");
    }
  }
}

}  // namespace

CellResult score_cell(const std::string& dataset, Setting setting,
                      const std::vector<std::string>& solvers,
                      std::vector<EpisodeSummary> episodes, const WeightVector& weights,
                      NormalizationScope scope) {
  CellResult cell;
  cell.dataset = dataset;
  cell.setting = setting;
  cell.episodes = std::move(episodes);

  std::vector<std::pair<std::string, MetricVector>> cohort;
  std::map<std::string, std::vector<const EpisodeSummary*>> ok;
  for (const EpisodeSummary& e : cell.episodes) {
    if (e.termination == Termination::solver_error) {
      ++cell.failures[e.solver];
    } else {
      ok[e.solver].push_back(&e);
    }
  }
  for (const std::string& s : solvers) {
    auto it = ok.find(s);
    if (it != ok.end()) cohort.emplace_back(s, mean_metrics(it->second));
  }

  if (scope == NormalizationScope::cell_mean) {
    cell.report = score_cohort(dataset, setting, cohort, weights);
    return cell;
  }

  // Per-group: score each group's cohort, then average scores per solver.
  cell.report = score_cohort(dataset, setting, cohort, weights);
  std::map<int, std::vector<std::pair<std::string, MetricVector>>> by_group;
  for (const std::string& s : solvers) {
    auto it = ok.find(s);
    if (it == ok.end()) continue;
    for (const EpisodeSummary* e : it->second) by_group[e->group].emplace_back(s, e->metrics);
  }
  std::map<std::string, std::pair<MetricVector, double>> acc;
  std::map<std::string, int> counts;
  for (const auto& [g, members] : by_group) {
    const ScoreReport r = score_cohort(dataset, setting, members, weights);
    for (const CohortEntry& e : r.entries) {
      auto& [norm, score] = acc[e.name];
      for (const auto& [m, w] : weights.weights) {
        norm.set(m, norm.get(m).value_or(0.0) + *e.normalized.get(m));
      }
      score += e.score;
      ++counts[e.name];
    }
  }
  for (CohortEntry& e : cell.report.entries) {
    const auto& [norm, score] = acc[e.name];
    const double n = counts[e.name];
    MetricVector mean_norm;
    for (const auto& [m, w] : weights.weights) mean_norm.set(m, norm.get(m).value_or(0.0) / n);
    e.normalized = mean_norm;
    e.score = score / n;
  }
  return cell;
}

MatrixResult run_matrix(const MatrixConfig& config) {
  config.validate();
  const fs::path log_dir = config.out_dir / "logs";
  if (config.outputs.logs) fs::create_directories(log_dir);

  std::vector<std::vector<ItemSequence>> sequences;
  for (const DatasetSpec& d : config.datasets) {
    sequences.push_back(dataset_groups(d, config.master_seed, config.groups));
  }

  struct Task {
    std::size_t dataset;
    std::size_t setting;
    std::size_t solver;
    int group;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    for (std::size_t s = 0; s < config.settings.size(); ++s) {
      for (std::size_t v = 0; v < config.solvers.size(); ++v) {
        for (int g = 0; g < config.groups; ++g) tasks.push_back({d, s, v, g});
      }
    }
  }

  std::vector<EpisodeSummary> summaries(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      try {
        const DatasetSpec& ds = config.datasets[t.dataset];
        const SolverSpec& sv = config.solvers[t.solver];
        const Setting setting = config.settings[t.setting];
        const ItemSequence& seq = sequences[t.dataset][static_cast<std::size_t>(t.group)];
        const auto solver = make_solver(sv.solver, config.harness.solver);
        const EpisodeResult r = run_episode(setting, *solver, seq, ds.config.container,
                                            config.harness, {ds.config.name, sv.label});
        if (config.outputs.logs) {
          const fs::path p = log_path(log_dir, ds.config.name, setting, sv.label, t.group);
          fs::create_directories(p.parent_path());
          std::ofstream out(p);
          write_episode_log(out, r.log, r.metrics);
          if (!out) throw InputError("cannot write " + p.string());
        }
        summaries[i] = {sv.label,         seq.group_id, r.log.sequence_hash, r.log.termination,
                        r.log.diagnostic, r.metrics};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks.size());
      }
    }
  };
  const int n_threads = std::min<int>(config.threads, static_cast<int>(tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<std::string> labels;
  for (const SolverSpec& s : config.solvers) labels.push_back(s.label);

  MatrixResult result;
  std::size_t i = 0;
  for (const DatasetSpec& d : config.datasets) {
    for (Setting s : config.settings) {
      std::vector<EpisodeSummary> eps;
      const std::size_t n = config.solvers.size() * static_cast<std::size_t>(config.groups);
      for (std::size_t k = 0; k < n; ++k) eps.push_back(std::move(summaries[i++]));
      result.cells.push_back(
          score_cell(d.config.name, s, labels, std::move(eps), config.weights_for(s), config.scope));
      check_paired(result.cells.back());
    }
  }

  if (config.outputs.logs) {
    json manifest;
    manifest["master_seed"] = config.master_seed;
    manifest["groups"] = config.groups;
    manifest["normalization"] = scope_key(config.scope);
    json ds = json::array();
    for (const DatasetSpec& d : config.datasets) ds.push_back(d.config.name);
    manifest["datasets"] = ds;
    json st = json::array();
    json ws = json::object();
    for (Setting s : config.settings) {
      st.push_back(setting_key(s));
      ws[std::string(setting_key(s))] = weights_json(config.weights_for(s));
    }
    manifest["settings"] = st;
    manifest["solvers"] = labels;
    manifest["weights"] = ws;
    std::ofstream out(log_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) throw InputError("cannot write manifest");
  }
  return result;
}

MatrixResult rescore_logs(const fs::path& log_dir, bool check) {
  std::ifstream in(log_dir / "manifest.json");
  if (!in) throw InputError("no manifest.json in " + log_dir.string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest.json: ") + e.what());
  }

  MatrixResult result;
  try {
    const int groups = manifest.at("groups").get<int>();
    const auto labels = manifest.at("solvers").get<std::vector<std::string>>();
    const NormalizationScope scope = scope_from_key(manifest.at("normalization").get<std::string>());
    for (const json& dj : manifest.at("datasets")) {
      const std::string dataset = dj.get<std::string>();
      for (const json& sj : manifest.at("settings")) {
        const Setting setting = setting_from_key(sj.get<std::string>());
        const WeightVector weights =
            weights_from(manifest.at("weights").at(std::string(setting_key(setting))));
        std::vector<EpisodeSummary> eps;
        for (const std::string& solver : labels) {
          for (int g = 0; g < groups; ++g) {
            const fs::path p = log_path(log_dir, dataset, setting, solver, g);
            std::ifstream lf(p);
            if (!lf) throw InputError("missing log " + p.string());
            const LoadedEpisode ep = read_episode_log(lf);
            const MetricVector m = metrics_from_log(ep.log);
            if (check && !(m == ep.reported)) {
              throw InputError("recomputed metrics differ from " + p.string());
            }
            eps.push_back({ep.log.solver, ep.log.group, ep.log.sequence_hash, ep.log.termination,
                           ep.log.diagnostic, m});
          }
        }
        result.cells.push_back(score_cell(dataset, setting, labels, std::move(eps), weights, scope));
        check_paired(result.cells.back());
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest.json: ") + e.what());
  }
  return result;
}

}  // namespace stackbench
