#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stackbench/stackbench.hpp"

namespace fs = std::filesystem;
using namespace stackbench;

namespace {

DatasetSpec dataset_from_arg(const std::string& arg, const std::string& container) {
  const fs::path p(arg);
  if (p.extension() == ".jsonl") {
    DatasetSpec spec;
    spec.config = builtin_config(container);
    spec.config.name = p.stem().string();
    spec.file = p;
    return spec;
  }
  if (p.extension() == ".json") {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset_spec(ss.str(), p.parent_path());
  }
  return {builtin_config(arg), std::nullopt};
}

void print_episodes(const MatrixResult& r) {
  for (const CellResult& c : r.cells) {
    for (const EpisodeSummary& e : c.episodes) {
      std::printf("%s %s %s g%d %-18s", c.dataset.c_str(), std::string(setting_key(c.setting)).c_str(),
                  e.solver.c_str(), e.group, std::string(termination_key(e.termination)).c_str());
      for (Metric m : all_metrics()) {
        if (auto v = e.metrics.get(m)) {
          std::printf(" %s=%.4g", std::string(metric_label(m)).c_str(), *v);
        }
      }
      std::printf("\n");
      if (!e.diagnostic.empty()) std::printf("  %s\n", e.diagnostic.c_str());
    }
  }
}

void emit(const MatrixResult& r, const fs::path& dir, const OutputOptions& formats) {
  for (const fs::path& p : emit_leaderboard(r, dir, formats)) std::printf("wrote %s\n", p.string().c_str());
  std::printf("\n%s", leaderboard_md(r).c_str());
}

int validate_logs(const fs::path& dir) {
  int bad = 0;
  int n = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    ++n;
    std::ifstream in(entry.path());
    try {
      for (const std::string& p : validate_episode(read_episode_log(in))) {
        std::printf("%s: %s\n", entry.path().string().c_str(), p.c_str());
        ++bad;
      }
    } catch (const std::exception& e) {
      std::printf("%s: %s\n", entry.path().string().c_str(), e.what());
      ++bad;
    }
  }
  if (fs::exists(dir / "manifest.json")) {
    try {
      (void)rescore_logs(dir, true);
    } catch (const std::exception& e) {
      std::printf("rescore: %s\n", e.what());
      ++bad;
    }
  }
  std::printf("%d episode logs checked, %d problems\n", n, bad);
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online 3D bin packing benchmark"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run solvers on one dataset under one setting");
  std::string run_dataset = "repetitive";
  std::string run_container = "repetitive";
  std::string run_setting = "math_pack";
  std::vector<std::string> run_solvers{"dbl"};
  std::uint64_t run_seed = 0;
  int run_groups = 30;
  int run_threads = 1;
  std::string run_out = "out/run";
  std::string run_timing = "wall";
  std::optional<double> run_cell_size;
  std::optional<int> run_group_size;
  bool run_svg = false;
  run->add_option("--dataset", run_dataset, "Builtin name, dataset .json, or items .jsonl");
  run->add_option("--container", run_container, "Builtin container for a .jsonl dataset");
  run->add_option("--setting", run_setting, "math_pack | physics_pack | execution_pack");
  run->add_option("--solver", run_solvers, "Solver name(s)")->delimiter(',');
  run->add_option("--seed", run_seed, "Master seed");
  run->add_option("--groups", run_groups, "Test groups");
  run->add_option("--threads", run_threads, "Worker threads");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--timing", run_timing, "wall | modeled");
  run->add_option("--cell-size", run_cell_size, "Grid cell size in meters");
  run->add_option("--group-size", run_group_size, "Items per generated group");
  run->add_flag("--svg", run_svg, "Also write summary.svg");

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Run a benchmark matrix from a JSON config");
  std::string matrix_config;
  std::optional<int> matrix_threads;
  std::optional<std::string> matrix_out;
  matrix->add_option("--config", matrix_config, "Matrix config file")->required();
  matrix->add_option("--threads", matrix_threads, "Override worker threads");
  matrix->add_option("--out", matrix_out, "Override output directory");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate item sequences as JSONL");
  std::string gen_dataset = "repetitive";
  std::uint64_t gen_seed = 0;
  int gen_groups = 30;
  std::optional<int> gen_group_size;
  std::optional<double> gen_cell_size;
  std::string gen_out;
  gen->add_option("--dataset", gen_dataset, "Builtin name or dataset .json");
  gen->add_option("--seed", gen_seed, "Master seed (same derivation as matrix)");
  gen->add_option("--groups", gen_groups, "Number of groups");
  gen->add_option("--group-size", gen_group_size, "Items per group");
  gen->add_option("--cell-size", gen_cell_size, "Grid cell size used for clamping");
  gen->add_option("--out", gen_out, "Output .jsonl (stdout when omitted)");

  // score
  auto* score = app.add_subcommand("score", "Recompute metrics and leaderboards from logs");
  std::string score_logs;
  std::optional<std::string> score_out;
  bool score_no_check = false;
  score->add_option("--logs", score_logs, "Log directory containing manifest.json")->required();
  score->add_option("--out", score_out, "Output directory (default: <logs>/../rescored)");
  score->add_flag("--no-check", score_no_check, "Do not compare with the logged metrics");

  // validate
  auto* validate = app.add_subcommand("validate", "Schema checks for datasets, configs and logs");
  std::optional<std::string> val_dataset;
  std::optional<std::string> val_config;
  std::optional<std::string> val_logs;
  validate->add_option("--dataset", val_dataset, "Items .jsonl file");
  validate->add_option("--config", val_config, "Matrix config file");
  validate->add_option("--logs", val_logs, "Log directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      MatrixConfig cfg;
      DatasetSpec ds = dataset_from_arg(run_dataset, run_container);
      if (run_cell_size) ds.config.container.cell_size = *run_cell_size;
      if (run_group_size) ds.config.group_size = *run_group_size;
      cfg.datasets.push_back(std::move(ds));
      cfg.settings = {setting_from_key(run_setting)};
      for (const std::string& s : run_solvers) cfg.solvers.push_back({s, s});
      cfg.groups = run_groups;
      cfg.master_seed = run_seed;
      cfg.threads = run_threads;
      cfg.harness.timing = timing_from_key(run_timing);
      cfg.out_dir = run_out;
      cfg.outputs.svg = run_svg;
      const auto t0 = std::chrono::steady_clock::now();
      const MatrixResult r = run_matrix(cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      print_episodes(r);
      std::printf("%.2f s\n", secs);
      emit(r, cfg.out_dir, cfg.outputs);
      return 0;
    }
    if (*matrix) {
      MatrixConfig cfg = load_matrix_config(matrix_config);
      if (matrix_threads) cfg.threads = *matrix_threads;
      if (matrix_out) cfg.out_dir = *matrix_out;
      cfg.validate();
      const auto t0 = std::chrono::steady_clock::now();
      const MatrixResult r = run_matrix(cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("%zu cells in %.2f s\n", r.cells.size(), secs);
      emit(r, cfg.out_dir, cfg.outputs);
      return 0;
    }
    if (*gen) {
      DatasetSpec ds = dataset_from_arg(gen_dataset, "repetitive");
      if (ds.file) throw ConfigError("gen needs a generator, not a .jsonl file");
      if (gen_group_size) ds.config.group_size = *gen_group_size;
      if (gen_cell_size) ds.config.container.cell_size = *gen_cell_size;
      const auto seqs = dataset_groups(ds, gen_seed, gen_groups);
      if (gen_out.empty()) {
        write_sequences(std::cout, seqs);
      } else {
        write_sequences(fs::path(gen_out), seqs);
        std::fprintf(stderr, "wrote %d groups to %s\n", gen_groups, gen_out.c_str());
      }
      return 0;
    }
    if (*score) {
      const fs::path logs(score_logs);
      const MatrixResult r = rescore_logs(logs, !score_no_check);
      const fs::path out = score_out ? fs::path(*score_out) : logs.parent_path() / "rescored";
      OutputOptions formats;
      emit(r, out, formats);
      return 0;
    }
    if (*validate) {
      int status = 0;
      if (!val_dataset && !val_config && !val_logs) {
        std::fprintf(stderr, "validate: give --dataset, --config and/or --logs\n");
        return 2;
      }
      if (val_dataset) {
        const auto seqs = load_sequences(fs::path(*val_dataset));
        std::size_t items = 0;
        for (const ItemSequence& s : seqs) items += s.items.size();
        std::printf("%s: %zu groups, %zu items OK\n", val_dataset->c_str(), seqs.size(), items);
      }
      if (val_config) {
        const MatrixConfig cfg = load_matrix_config(*val_config);
        std::printf("%s: %zu datasets x %zu settings x %zu solvers x %d groups OK\n",
                    val_config->c_str(), cfg.datasets.size(), cfg.settings.size(),
                    cfg.solvers.size(), cfg.groups);
      }
      if (val_logs) status = std::max(status, validate_logs(*val_logs));
      return status;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
