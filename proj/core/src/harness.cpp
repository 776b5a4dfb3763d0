#include "stackbench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace stackbench {

using json = nlohmann::ordered_json;

std::string_view timing_key(TimingMode m) { return m == TimingMode::wall ? "wall" : "modeled"; }

TimingMode timing_from_key(std::string_view key) {
  if (key == "wall") return TimingMode::wall;
  if (key == "modeled") return TimingMode::modeled;
  throw ConfigError("unknown timing mode '" + std::string(key) + "'");
}

namespace {

constexpr std::array<std::pair<Termination, std::string_view>, 6> kTerminations{{
    {Termination::exhausted, "exhausted"},
    {Termination::no_feasible, "no_feasible"},
    {Termination::collapse, "collapse"},
    {Termination::over_height, "over_height"},
    {Termination::deviation_exceeded, "deviation_exceeded"},
    {Termination::solver_error, "solver_error"},
}};

bool settles(Setting s) { return s != Setting::math_pack; }
bool plans(Setting s) { return s == Setting::execution_pack; }

template <typename T>
std::optional<double> mean_of(const std::vector<T>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0.0;
  for (const T& x : xs) sum += static_cast<double>(x);
  return sum / static_cast<double>(xs.size());
}

// Reason the placement cannot be committed as proposed, or empty.
std::string invalid_reason(const PackState& state, const ItemSpec& item, const Placement& p) {
  if (p.item_id != item.id) return "placement names item '" + p.item_id + "'";
  if (!(p.oriented_dims == p.orientation.apply(item.dims))) {
    return "placement dims do not match the item in its orientation";
  }
  const Heightmap& hm = state.heightmap();
  const CellBox b = p.cells(hm.cell_size());
  if (!hm.in_bounds(b.x, b.y, b.dx, b.dy)) return "placement footprint leaves the container";
  if (b.z != footprint_height_cells(hm, b.x, b.y, b.dx, b.dy)) {
    return "placement is not at its drop height";
  }
  return {};
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json metrics_json(const MetricVector& m) {
  json j = json::object();
  for (Metric k : all_metrics()) {
    if (auto v = m.get(k)) j[std::string(metric_key(k))] = *v;
  }
  return j;
}

MetricVector metrics_from(const json& j) {
  MetricVector m;
  for (const auto& [k, v] : j.items()) m.set(metric_from_key(k), v.get<double>());
  return m;
}

}  // namespace

std::string_view termination_key(Termination t) {
  for (const auto& [k, name] : kTerminations) {
    if (k == t) return name;
  }
  return "?";
}

Termination termination_from_key(std::string_view key) {
  for (const auto& [k, name] : kTerminations) {
    if (name == key) return k;
  }
  throw InputError("unknown termination '" + std::string(key) + "'");
}

std::size_t EpisodeLog::committed() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const StepLog& s) { return s.committed; }));
}

EpisodeResult run_episode(Setting setting, const Solver& solver, const ItemSequence& sequence,
                          const Container& container, const HarnessConfig& config,
                          const EpisodeMeta& meta) {
  if (sequence.items.empty()) throw ContractViolation("run_episode needs a nonempty sequence");
  container.validate();

  EpisodeResult result;
  EpisodeLog& log = result.log;
  log.dataset = meta.dataset;
  log.solver = meta.solver_label.empty() ? std::string(solver.name()) : meta.solver_label;
  log.setting = setting;
  log.group = sequence.group_id;
  log.seed = sequence.seed;
  log.sequence_hash = sequence_hash(sequence);
  log.container = container;
  log.dangerous_threshold = dangerous_threshold(container, config.execution);

  const PickPose pick = default_pick_pose(container, config.execution);
  const double threshold = container.collapse_threshold;
  PackState state(container);
  // Built outside the timed region; commits keep it current afterwards.
  state.warm_ems();
  std::vector<Vec3> settled;
  log.termination = Termination::exhausted;

  for (std::size_t i = 0; i < sequence.items.size(); ++i) {
    const ItemSpec& item = sequence.items[i];
    StepLog step;
    step.index = i;
    step.item_id = item.id;
    step.item_dims = item.dims;

    WorkMeter meter;
    std::optional<Proposal> proposal;
    std::string error;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      proposal = solver.propose(state, item, &meter);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    step.work_units = meter.units;
    step.decision_seconds = config.timing == TimingMode::wall
                                ? std::chrono::duration<double>(t1 - t0).count()
                                : static_cast<double>(meter.units) * config.seconds_per_work;

    if (!error.empty()) {
      log.steps.push_back(std::move(step));
      log.termination = Termination::solver_error;
      log.diagnostic = "item " + item.id + ": solver threw: " + error;
      break;
    }
    if (!proposal) {
      log.steps.push_back(std::move(step));
      log.termination = Termination::no_feasible;
      break;
    }
    const Placement& p = proposal->placement;
    step.placement = p;
    if (std::string why = invalid_reason(state, item, p); !why.empty()) {
      log.steps.push_back(std::move(step));
      log.termination = Termination::solver_error;
      log.diagnostic = "item " + item.id + ": " + why;
      break;
    }
    const CellBox cells = p.cells(container.cell_size);
    if (cells.z + cells.dz > container.nz()) {
      log.steps.push_back(std::move(step));
      log.termination = Termination::over_height;
      break;
    }

    if (plans(setting)) {
      const Trajectory t =
          plan_trajectory(state.heightmap(), container, pick, p, config.execution.clearance);
      TrajectoryStep ts{t.length, t.plan_cost, {}};
      if (config.record_waypoints) ts.waypoints = t.waypoints;
      step.trajectory = std::move(ts);
    }
    state.commit(p);
    step.committed = true;

    if (!settles(setting)) {
      log.steps.push_back(std::move(step));
      continue;
    }
    const SettleReport report = settle(state.placements(), container, config.settle, settled);
    const StabilitySample sample = report.sample(config.settle.aggregate);
    SettleStep ss;
    ss.v_bar_lin = sample.v_bar_lin;
    ss.v_bar_ang = sample.v_bar_ang;
    ss.static_stability = static_stability(sample);
    ss.new_offset = report.boxes.back().offset();
    bool over = false;
    settled.clear();
    log.final_offsets.clear();
    for (std::size_t k = 0; k < report.boxes.size(); ++k) {
      const RigidBoxState& b = report.boxes[k];
      if (k + 1 < report.boxes.size()) ss.prior_max_offset = std::max(ss.prior_max_offset, b.offset());
      over = over || b.actual_pose.z + b.dims.z > container.dims.z + config.settle.height_tolerance;
      settled.push_back(b.actual_pose);
      log.final_offsets.push_back(b.offset());
    }
    const bool prior_moved = ss.prior_max_offset > threshold;
    const bool deviated = ss.new_offset > threshold;
    ss.collapse_event = prior_moved || deviated;
    step.settle = ss;
    log.steps.push_back(std::move(step));
    if (prior_moved) {
      log.termination = Termination::collapse;
      break;
    }
    if (deviated) {
      log.termination = Termination::deviation_exceeded;
      break;
    }
    if (over) {
      log.termination = Termination::over_height;
      break;
    }
  }
  result.metrics = metrics_from_log(log);
  return result;
}

MetricVector metrics_from_log(const EpisodeLog& log) {
  const Container& c = log.container;
  PackState replay(c);
  double placed = 0.0;
  std::vector<double> times;
  std::vector<double> rewards;
  std::vector<double> lengths;
  std::vector<std::int64_t> costs;
  std::int64_t n = 0;
  std::int64_t n_collapsed = 0;
  for (const StepLog& s : log.steps) {
    times.push_back(s.decision_seconds);
    if (!s.committed) continue;
    if (!s.placement) throw InputError("committed step without a placement");
    replay.commit(*s.placement);
    placed += s.item_dims.x * s.item_dims.y * s.item_dims.z;
    ++n;
    if (s.settle) {
      rewards.push_back(s.settle->static_stability);
      if (s.settle->collapse_event) ++n_collapsed;
    }
    if (s.trajectory) {
      lengths.push_back(s.trajectory->length);
      costs.push_back(s.trajectory->plan_cost);
    }
  }

  MetricVector m;
  m.set(Metric::space_utilization, placed / c.volume());
  const double occupied = occupied_heightmap_volume(replay.heightmap());
  m.set(Metric::occupancy, occupied > 0.0 ? placed / occupied : 0.0);
  m.set(Metric::decision_time, mean_of(times));
  if (settles(log.setting)) {
    m.set(Metric::local_stability, mean_of(log.final_offsets));
    m.set(Metric::static_stability, mean_of(rewards));
  }
  if (plans(log.setting)) {
    m.set(Metric::trajectory_length, mean_of(lengths));
    m.set(Metric::collapsed_placement, collapsed_placement_rate(n_collapsed, n));
    if (!costs.empty()) m.set(Metric::dangerous_operation, dangerous_operation_rate(costs, log.dangerous_threshold));
  }
  return m;
}

void write_episode_log(std::ostream& out, const EpisodeLog& log, const MetricVector& metrics) {
  json head;
  head["type"] = "episode";
  head["dataset"] = log.dataset;
  head["solver"] = log.solver;
  head["setting"] = setting_key(log.setting);
  head["group"] = log.group;
  head["seed"] = log.seed;
  head["sequence_hash"] = log.sequence_hash;
  head["container"] = {{"dims", vec_json(log.container.dims)},
                       {"collapse_threshold", log.container.collapse_threshold},
                       {"cell_size", log.container.cell_size}};
  head["dangerous_threshold"] = log.dangerous_threshold;
  out << head.dump() << '\n';

  for (const StepLog& s : log.steps) {
    json j;
    j["type"] = "step";
    j["index"] = s.index;
    j["item"] = s.item_id;
    j["dims"] = vec_json(s.item_dims);
    j["decision_seconds"] = s.decision_seconds;
    j["work"] = s.work_units;
    if (s.placement) {
      j["placement"] = {{"min", vec_json(s.placement->min_corner)},
                        {"dims", vec_json(s.placement->oriented_dims)},
                        {"orientation", s.placement->orientation.index()}};
    }
    j["committed"] = s.committed;
    if (s.settle) {
      j["settle"] = {{"v_lin", s.settle->v_bar_lin},
                     {"v_ang", s.settle->v_bar_ang},
                     {"static_stability", s.settle->static_stability},
                     {"new_offset", s.settle->new_offset},
                     {"prior_max_offset", s.settle->prior_max_offset},
                     {"collapse_event", s.settle->collapse_event}};
    }
    if (s.trajectory) {
      json t = {{"length", s.trajectory->length}, {"plan_cost", s.trajectory->plan_cost}};
      if (!s.trajectory->waypoints.empty()) {
        json w = json::array();
        for (const Vec3& v : s.trajectory->waypoints) w.push_back(vec_json(v));
        t["waypoints"] = std::move(w);
      }
      j["trajectory"] = std::move(t);
    }
    out << j.dump() << '\n';
  }

  json end;
  end["type"] = "end";
  end["termination"] = termination_key(log.termination);
  if (!log.diagnostic.empty()) end["diagnostic"] = log.diagnostic;
  end["final_offsets"] = log.final_offsets;
  end["metrics"] = metrics_json(metrics);
  out << end.dump() << '\n';
}

LoadedEpisode read_episode_log(std::istream& in) {
  LoadedEpisode ep;
  EpisodeLog& log = ep.log;
  std::string line;
  std::size_t lineno = 0;
  bool have_head = false;
  bool have_end = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (have_end) throw InputError("content after the end record");
      if (type == "episode") {
        if (have_head) throw InputError("duplicate episode header");
        have_head = true;
        log.dataset = j.at("dataset").get<std::string>();
        log.solver = j.at("solver").get<std::string>();
        log.setting = setting_from_key(j.at("setting").get<std::string>());
        log.group = j.at("group").get<int>();
        log.seed = j.at("seed").get<std::uint64_t>();
        log.sequence_hash = j.at("sequence_hash").get<std::string>();
        const json& c = j.at("container");
        log.container.dims = vec_from(c.at("dims"));
        log.container.collapse_threshold = c.at("collapse_threshold").get<double>();
        log.container.cell_size = c.at("cell_size").get<double>();
        log.dangerous_threshold = j.at("dangerous_threshold").get<double>();
      } else if (type == "step") {
        if (!have_head) throw InputError("step before the episode header");
        StepLog s;
        s.index = j.at("index").get<std::size_t>();
        s.item_id = j.at("item").get<std::string>();
        s.item_dims = vec_from(j.at("dims"));
        s.decision_seconds = j.at("decision_seconds").get<double>();
        s.work_units = j.at("work").get<std::uint64_t>();
        if (j.contains("placement")) {
          const json& p = j["placement"];
          Placement pl;
          pl.item_id = s.item_id;
          pl.min_corner = vec_from(p.at("min"));
          pl.oriented_dims = vec_from(p.at("dims"));
          pl.orientation = orientation_from_index(p.at("orientation").get<int>());
          s.placement = pl;
        }
        s.committed = j.at("committed").get<bool>();
        if (j.contains("settle")) {
          const json& t = j["settle"];
          s.settle = SettleStep{t.at("v_lin").get<double>(),
                                t.at("v_ang").get<double>(),
                                t.at("static_stability").get<double>(),
                                t.at("new_offset").get<double>(),
                                t.at("prior_max_offset").get<double>(),
                                t.at("collapse_event").get<bool>()};
        }
        if (j.contains("trajectory")) {
          const json& t = j["trajectory"];
          TrajectoryStep ts{t.at("length").get<double>(), t.at("plan_cost").get<std::int64_t>(), {}};
          if (t.contains("waypoints")) {
            for (const json& w : t["waypoints"]) ts.waypoints.push_back(vec_from(w));
          }
          s.trajectory = std::move(ts);
        }
        log.steps.push_back(std::move(s));
      } else if (type == "end") {
        if (!have_head) throw InputError("end before the episode header");
        have_end = true;
        log.termination = termination_from_key(j.at("termination").get<std::string>());
        if (j.contains("diagnostic")) log.diagnostic = j["diagnostic"].get<std::string>();
        log.final_offsets = j.at("final_offsets").get<std::vector<double>>();
        ep.reported = metrics_from(j.at("metrics"));
      } else {
        throw InputError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw InputError("log line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw InputError("log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_head || !have_end) throw InputError("episode log is truncated");
  return ep;
}

std::vector<std::string> validate_episode(const LoadedEpisode& ep) {
  const EpisodeLog& log = ep.log;
  std::vector<std::string> problems;
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (log.steps.empty()) fail("no steps recorded");
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepLog& s = log.steps[i];
    const std::string at = "step " + std::to_string(i) + ": ";
    if (s.index != i) fail(at + "index out of sequence");
    if (s.settle && !settles(log.setting)) fail(at + "settle record outside a settling setting");
    if (s.trajectory && !plans(log.setting)) fail(at + "trajectory outside the execution setting");
    if (s.committed) {
      if (!s.placement) fail(at + "committed without a placement");
      if (settles(log.setting) && !s.settle) fail(at + "committed without a settle record");
      if (plans(log.setting) && !s.trajectory) fail(at + "committed without a trajectory");
    } else if (i + 1 != log.steps.size()) {
      fail(at + "uncommitted step before the end of the episode");
    }
    if (s.settle && s.settle->collapse_event && i + 1 != log.steps.size()) {
      fail(at + "placements continued after a collapse event");
    }
    if (!std::isfinite(s.decision_seconds) || s.decision_seconds < 0.0) {
      fail(at + "invalid decision time");
    }
  }

  if (!log.steps.empty()) {
    const StepLog& last = log.steps.back();
    const double thr = log.container.collapse_threshold;
    switch (log.termination) {
      case Termination::exhausted:
        if (!last.committed) fail("exhausted episode ends with an uncommitted step");
        break;
      case Termination::no_feasible:
        if (last.placement) fail("no_feasible episode ends with a placement");
        break;
      case Termination::collapse:
        if (!last.settle || !(last.settle->prior_max_offset > thr)) {
          fail("collapse termination without an earlier box past the threshold");
        }
        break;
      case Termination::deviation_exceeded:
        if (!last.settle || !(last.settle->new_offset > thr)) {
          fail("deviation termination without the new box past the threshold");
        }
        break;
      case Termination::over_height:
      case Termination::solver_error:
        break;
    }
  }

  for (Metric m : all_metrics()) {
    const auto allowed = setting_metrics(log.setting);
    const bool in_setting = std::find(allowed.begin(), allowed.end(), m) != allowed.end();
    if (ep.reported.has(m) && !in_setting) {
      fail(std::string(metric_key(m)) + " reported outside its setting");
    }
  }
  try {
    if (!(metrics_from_log(log) == ep.reported)) fail("reported metrics differ from the recomputation");
  } catch (const std::exception& e) {
    fail(std::string("metrics cannot be recomputed: ") + e.what());
  }
  return problems;
}

}  // namespace stackbench
