#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stackbench/config.hpp"

namespace stackbench {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

Vec3 read_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw ConfigError(where + ": expected [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void read_container(const json& j, Container& c, const std::string& where) {
  check_keys(j, {"dims", "collapse_threshold", "cell_size"}, where);
  if (j.contains("dims")) c.dims = read_vec(j["dims"], where + ".dims");
  read(j, "collapse_threshold", c.collapse_threshold, where);
  read(j, "cell_size", c.cell_size, where);
}

void read_repetitive(const json& j, RepetitiveParams& p, const std::string& where) {
  check_keys(j, {"catalog", "catalog_size", "dim_min", "dim_max", "run_length", "mean_run"}, where);
  if (j.contains("catalog")) {
    if (!j["catalog"].is_array()) throw ConfigError(where + ".catalog: expected a list");
    p.catalog.clear();
    for (const json& d : j["catalog"]) p.catalog.push_back(read_vec(d, where + ".catalog"));
  }
  read(j, "catalog_size", p.catalog_size, where);
  read(j, "dim_min", p.dim_min, where);
  read(j, "dim_max", p.dim_max, where);
  read(j, "mean_run", p.mean_run, where);
  if (j.contains("run_length")) {
    std::string s;
    read(j, "run_length", s, where);
    if (s == "geometric") p.run_length = RunLength::geometric;
    else if (s == "fixed") p.run_length = RunLength::fixed;
    else throw ConfigError(where + ".run_length: expected geometric or fixed");
  }
}

void read_diverse(const json& j, DiverseParams& p, const std::string& where) {
  check_keys(j, {"table", "categories", "dim_min", "dim_max", "zipf_exponent"}, where);
  if (j.contains("table")) {
    if (!j["table"].is_array()) throw ConfigError(where + ".table: expected a list");
    p.table.clear();
    for (const json& row : j["table"]) {
      const std::string w = where + ".table";
      check_keys(row, {"dims", "proportion"}, w);
      if (!row.contains("dims") || !row.contains("proportion")) {
        throw ConfigError(w + ": rows need dims and proportion");
      }
      Category c;
      c.dims = read_vec(row["dims"], w + ".dims");
      read(row, "proportion", c.proportion, w);
      p.table.push_back(c);
    }
  }
  read(j, "categories", p.categories, where);
  read(j, "dim_min", p.dim_min, where);
  read(j, "dim_max", p.dim_max, where);
  read(j, "zipf_exponent", p.zipf_exponent, where);
}

void read_wood(const json& j, WoodBoardParams& p, const std::string& where) {
  check_keys(j, {"length_min", "length_max", "cross_min", "cross_max", "e_min"}, where);
  read(j, "length_min", p.length_min, where);
  read(j, "length_max", p.length_max, where);
  read(j, "cross_min", p.cross_min, where);
  read(j, "cross_max", p.cross_max, where);
  read(j, "e_min", p.e_min, where);
}

struct DatasetDefaults {
  std::optional<int> group_size;
  std::optional<double> cell_size;
};

DatasetSpec read_dataset(const json& j, const DatasetDefaults& defaults, const fs::path& base,
                         const std::string& where) {
  DatasetSpec spec;
  auto apply_defaults = [&] {
    if (defaults.group_size) spec.config.group_size = *defaults.group_size;
    if (defaults.cell_size) spec.config.container.cell_size = *defaults.cell_size;
  };
  if (j.is_string()) {
    spec.config = builtin_config(j.get<std::string>());
    apply_defaults();
    return spec;
  }
  check_keys(j, {"name", "builtin", "generator", "file", "container", "group_size", "catalog_seed",
                 "repetitive", "diverse", "wood_board"},
             where);
  std::string name;
  std::string builtin;
  read(j, "name", name, where);
  read(j, "builtin", builtin, where);
  if (builtin.empty() && !j.contains("generator")) builtin = name;
  if (!builtin.empty()) {
    spec.config = builtin_config(builtin);
  } else {
    spec.config.kind = generator_from_key(j["generator"].get<std::string>());
  }
  if (j.contains("generator") && !builtin.empty()) {
    spec.config.kind = generator_from_key(j["generator"].get<std::string>());
  }
  spec.config.name = name.empty() ? builtin : name;
  if (spec.config.name.empty()) throw ConfigError(where + ": dataset needs a name");
  apply_defaults();
  if (j.contains("container")) read_container(j["container"], spec.config.container, where + ".container");
  read(j, "group_size", spec.config.group_size, where);
  read(j, "catalog_seed", spec.config.catalog_seed, where);
  if (j.contains("repetitive")) read_repetitive(j["repetitive"], spec.config.repetitive, where + ".repetitive");
  if (j.contains("diverse")) read_diverse(j["diverse"], spec.config.diverse, where + ".diverse");
  if (j.contains("wood_board")) read_wood(j["wood_board"], spec.config.wood_board, where + ".wood_board");
  if (j.contains("file")) {
    std::string f;
    read(j, "file", f, where);
    fs::path p(f);
    spec.file = p.is_relative() ? base / p : p;
  }
  return spec;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

MatrixConfig parse_config_json(const json& j, const fs::path& base_dir) {
  check_keys(j, {"master_seed", "groups", "group_size", "cell_size", "threads", "out", "datasets",
                 "settings", "solvers", "solver_config", "settle", "execution", "timing",
                 "weights", "normalization", "outputs"},
             "config");
  MatrixConfig cfg;
  read(j, "master_seed", cfg.master_seed, "config");
  read(j, "groups", cfg.groups, "config");
  read(j, "threads", cfg.threads, "config");
  std::string out = "out";
  read(j, "out", out, "config");
  cfg.out_dir = out;

  DatasetDefaults defaults;
  if (j.contains("group_size")) defaults.group_size = j["group_size"].get<int>();
  if (j.contains("cell_size")) defaults.cell_size = j["cell_size"].get<double>();

  if (!j.contains("datasets") || !j["datasets"].is_array()) {
    throw ConfigError("config.datasets: expected a list");
  }
  for (std::size_t i = 0; i < j["datasets"].size(); ++i) {
    cfg.datasets.push_back(read_dataset(j["datasets"][i], defaults, base_dir,
                                        "config.datasets[" + std::to_string(i) + "]"));
  }

  if (j.contains("settings")) {
    for (const json& s : j["settings"]) cfg.settings.push_back(setting_from_key(s.get<std::string>()));
  } else {
    cfg.settings.assign(all_settings().begin(), all_settings().end());
  }

  if (j.contains("solvers")) {
    for (const json& s : j["solvers"]) {
      if (s.is_string()) {
        cfg.solvers.push_back({s.get<std::string>(), s.get<std::string>()});
        continue;
      }
      check_keys(s, {"label", "solver"}, "config.solvers");
      SolverSpec spec;
      read(s, "solver", spec.solver, "config.solvers");
      spec.label = spec.solver;
      read(s, "label", spec.label, "config.solvers");
      cfg.solvers.push_back(spec);
    }
  } else {
    for (std::string_view s : solver_names()) cfg.solvers.push_back({std::string(s), std::string(s)});
  }

  HarnessConfig& h = cfg.harness;
  if (j.contains("solver_config")) {
    const json& s = j["solver_config"];
    const std::string w = "config.solver_config";
    check_keys(s, {"min_support", "orientations", "br_lambda", "br_fill_weight",
                   "sdf_truncation_cells", "sdf_rotation_penalty", "sdf_height_weight", "hm_objective"},
               w);
    read(s, "min_support", h.solver.min_support, w);
    read(s, "br_lambda", h.solver.br_lambda, w);
    read(s, "br_fill_weight", h.solver.br_fill_weight, w);
    read(s, "sdf_truncation_cells", h.solver.sdf_truncation_cells, w);
    read(s, "sdf_rotation_penalty", h.solver.sdf_rotation_penalty, w);
    read(s, "sdf_height_weight", h.solver.sdf_height_weight, w);
    if (s.contains("hm_objective")) {
      const std::string o = s["hm_objective"].get<std::string>();
      if (o == "footprint_sum") h.solver.hm_objective = HmObjective::footprint_sum;
      else if (o == "volume_increase") h.solver.hm_objective = HmObjective::volume_increase;
      else throw ConfigError(w + ".hm_objective: expected footprint_sum or volume_increase");
    }
    if (s.contains("orientations")) {
      const std::string o = s["orientations"].get<std::string>();
      if (o == "yaw") h.solver.orientations = OrientationSet::yaw;
      else if (o == "all") h.solver.orientations = OrientationSet::all;
      else throw ConfigError(w + ".orientations: expected yaw or all");
    }
  }
  if (j.contains("settle")) {
    const json& s = j["settle"];
    const std::string w = "config.settle";
    check_keys(s, {"steps", "tick", "slide_rate", "angular_gain", "com_margin", "height_tolerance",
                   "aggregate"},
               w);
    read(s, "steps", h.settle.steps, w);
    read(s, "tick", h.settle.tick, w);
    read(s, "slide_rate", h.settle.slide_rate, w);
    read(s, "angular_gain", h.settle.angular_gain, w);
    read(s, "com_margin", h.settle.com_margin, w);
    read(s, "height_tolerance", h.settle.height_tolerance, w);
    if (s.contains("aggregate")) {
      const std::string a = s["aggregate"].get<std::string>();
      if (a == "mean") h.settle.aggregate = VelocityAggregate::mean;
      else if (a == "max") h.settle.aggregate = VelocityAggregate::max;
      else throw ConfigError(w + ".aggregate: expected mean or max");
    }
    if (h.settle.steps < 1 || !(h.settle.tick > 0.0) || !(h.settle.slide_rate > 0.0)) {
      throw ConfigError(w + ": steps, tick and slide_rate must be positive");
    }
  }
  if (j.contains("execution")) {
    const json& s = j["execution"];
    const std::string w = "config.execution";
    check_keys(s, {"clearance", "pick_standoff", "pick_height", "dangerous_threshold_factor",
                   "record_waypoints"},
               w);
    read(s, "clearance", h.execution.clearance, w);
    read(s, "pick_standoff", h.execution.pick_standoff, w);
    read(s, "pick_height", h.execution.pick_height, w);
    read(s, "dangerous_threshold_factor", h.execution.dangerous_threshold_factor, w);
    read(s, "record_waypoints", h.record_waypoints, w);
    if (!(h.execution.dangerous_threshold_factor > 0.0)) {
      throw ConfigError(w + ".dangerous_threshold_factor must be > 0");
    }
    if (h.execution.pick_height < 0.0 || h.execution.clearance < 0.0) {
      throw ConfigError(w + ": clearance and pick_height must be >= 0");
    }
  }
  if (j.contains("timing")) {
    const json& s = j["timing"];
    check_keys(s, {"mode", "seconds_per_work"}, "config.timing");
    if (s.contains("mode")) h.timing = timing_from_key(s["mode"].get<std::string>());
    read(s, "seconds_per_work", h.seconds_per_work, "config.timing");
  }
  if (j.contains("weights")) {
    for (const auto& [setting, ws] : j["weights"].items()) {
      WeightVector w;
      const std::string where = "config.weights." + setting;
      if (!ws.is_object()) throw ConfigError(where + ": expected an object");
      for (const auto& [metric, v] : ws.items()) {
        if (!v.is_number()) throw ConfigError(where + "." + metric + ": expected a number");
        w.weights.emplace_back(metric_from_key(metric), v.get<double>());
      }
      cfg.weights[setting_from_key(setting)] = w;
    }
  }
  if (j.contains("normalization")) {
    cfg.scope = scope_from_key(j["normalization"].get<std::string>());
  }
  if (j.contains("outputs")) {
    const json& s = j["outputs"];
    check_keys(s, {"csv", "json", "md", "svg", "logs"}, "config.outputs");
    read(s, "csv", cfg.outputs.csv, "config.outputs");
    read(s, "json", cfg.outputs.json, "config.outputs");
    read(s, "md", cfg.outputs.md, "config.outputs");
    read(s, "svg", cfg.outputs.svg, "config.outputs");
    read(s, "logs", cfg.outputs.logs, "config.outputs");
  }
  cfg.validate();
  return cfg;
}

}  // namespace

MatrixConfig parse_matrix_config(std::string_view text, const fs::path& base_dir) {
  const json j = parse_text(text);
  try {
    return parse_config_json(j, base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

MatrixConfig load_matrix_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_config(ss.str(), path.parent_path());
}

DatasetSpec parse_dataset_spec(std::string_view text, const fs::path& base_dir) {
  DatasetSpec spec = read_dataset(parse_text(text), {}, base_dir, "dataset");
  spec.config.validate();
  return spec;
}

}  // namespace stackbench
