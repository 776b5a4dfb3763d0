#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace stackbench;
namespace fs = std::filesystem;

namespace {

EpisodeSummary summary(const std::string& solver, int group, double uti, double occ, double dec,
                       Termination t = Termination::exhausted) {
  EpisodeSummary e;
  e.solver = solver;
  e.group = group;
  e.sequence_hash = "h" + std::to_string(group);
  e.termination = t;
  e.metrics.set(Metric::space_utilization, uti);
  e.metrics.set(Metric::occupancy, occ);
  e.metrics.set(Metric::decision_time, dec);
  return e;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stackbench_" + name);
  fs::remove_all(p);
  return p;
}

MatrixConfig small_matrix(const fs::path& out, int threads) {
  MatrixConfig cfg;
  for (const char* name : {"repetitive", "diverse"}) {
    DatasetSpec d{builtin_config(name), std::nullopt};
    d.config.group_size = 12;
    cfg.datasets.push_back(d);
  }
  cfg.settings = {Setting::math_pack, Setting::physics_pack};
  cfg.solvers = {{"dbl", "dbl"}, {"hm", "hm"}, {"lsah", "lsah"}};
  cfg.groups = 3;
  cfg.master_seed = 11;
  cfg.threads = threads;
  cfg.harness.timing = TimingMode::modeled;
  cfg.out_dir = out;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ScoreCell, CellMeanHandComputed) {
  // Means: a (0.6, 0.9, 0.002), b (0.4, 0.95, 0.001).
  std::vector<EpisodeSummary> eps{summary("a", 0, 0.5, 0.9, 0.001), summary("a", 1, 0.7, 0.9, 0.003),
                                  summary("b", 0, 0.4, 0.9, 0.001), summary("b", 1, 0.4, 1.0, 0.001)};
  const auto cell = score_cell("d", Setting::math_pack, {"a", "b"}, eps, setting_weights(Setting::math_pack),
                               NormalizationScope::cell_mean);
  ASSERT_EQ(cell.report.entries.size(), 2u);
  EXPECT_EQ(cell.report.entries[0].name, "a");
  EXPECT_NEAR(*cell.report.entries[0].raw.get(Metric::space_utilization), 0.6, 1e-12);
  EXPECT_NEAR(cell.report.entries[0].score, 0.60, 1e-12);
  EXPECT_NEAR(cell.report.entries[1].score, 0.40, 1e-12);
  EXPECT_TRUE(cell.failures.empty());
}

TEST(ScoreCell, PerGroupAveragesGroupScores) {
  // Group 0: a wins Uti only; group 1: a wins everything.
  std::vector<EpisodeSummary> eps{summary("a", 0, 0.6, 0.8, 0.002), summary("a", 1, 0.6, 0.9, 0.001),
                                  summary("b", 0, 0.4, 0.9, 0.001), summary("b", 1, 0.4, 0.8, 0.002)};
  const auto cell = score_cell("d", Setting::math_pack, {"a", "b"}, eps, setting_weights(Setting::math_pack),
                               NormalizationScope::per_group);
  EXPECT_NEAR(cell.report.entries[0].score, (0.60 + 1.0) / 2, 1e-12);
  EXPECT_NEAR(cell.report.entries[1].score, (0.40 + 0.0) / 2, 1e-12);
}

TEST(ScoreCell, IdenticalSolversAndFailures) {
  std::vector<EpisodeSummary> eps{summary("a", 0, 0.5, 0.9, 0.001), summary("b", 0, 0.5, 0.9, 0.001),
                                  summary("c", 0, 0.9, 0.9, 0.0, Termination::solver_error)};
  const auto cell = score_cell("d", Setting::math_pack, {"a", "b", "c"}, eps,
                               setting_weights(Setting::math_pack), NormalizationScope::cell_mean);
  ASSERT_EQ(cell.report.entries.size(), 2u);
  for (const auto& e : cell.report.entries) EXPECT_EQ(e.score, 0.0);
  EXPECT_EQ(cell.failures.at("c"), 1);
  MatrixResult r;
  r.cells.push_back(cell);
  const auto tables = leaderboard_tables(r);
  ASSERT_EQ(tables.size(), 1u);
  ASSERT_EQ(tables[0].rows.size(), 3u);
  // Ties break on name; the failed solver still gets a row without a score.
  EXPECT_EQ(tables[0].rows[0].solver, "a");
  EXPECT_EQ(tables[0].rows[1].solver, "b");
  EXPECT_EQ(tables[0].rows[2].solver, "c");
  EXPECT_FALSE(tables[0].rows[2].scores[0].has_value());
}

TEST(Leaderboard, SortsByMeanAcrossDatasets) {
  MatrixResult r;
  for (const char* ds : {"x", "y"}) {
    const bool flip = std::string(ds) == "y";
    std::vector<EpisodeSummary> eps{summary("p", 0, flip ? 0.2 : 0.6, 0.9, 0.001),
                                    summary("q", 0, flip ? 0.5 : 0.4, 0.9, 0.001)};
    r.cells.push_back(score_cell(ds, Setting::math_pack, {"p", "q"}, eps, setting_weights(Setting::math_pack),
                                 NormalizationScope::cell_mean));
  }
  const auto t = leaderboard_tables(r);
  ASSERT_EQ(t[0].datasets, (std::vector<std::string>{"x", "y"}));
  // p: 0.6 and 0; q: 0 and 0.6; tie on mean 0.3.
  EXPECT_EQ(t[0].rows[0].solver, "p");
  EXPECT_NEAR(t[0].rows[0].mean, 0.3, 1e-12);
  EXPECT_NEAR(t[0].rows[1].mean, 0.3, 1e-12);
  const std::string csv = leaderboard_csv(r);
  EXPECT_NE(csv.find("math_pack,1,p,0.600,0.000,0.300"), std::string::npos) << csv;
  EXPECT_NE(leaderboard_md(r).find("| p |"), std::string::npos);
}

TEST(RunMatrix, DeterministicAcrossThreadCounts) {
  const fs::path a = scratch("matrix_t1"), b = scratch("matrix_t4");
  const auto ra = run_matrix(small_matrix(a, 1));
  const auto rb = run_matrix(small_matrix(b, 4));
  EXPECT_EQ(leaderboard_csv(ra), leaderboard_csv(rb));
  EXPECT_EQ(cells_csv(ra), cells_csv(rb));
  emit_leaderboard(ra, a, OutputOptions{});
  emit_leaderboard(rb, b, OutputOptions{});
  EXPECT_EQ(slurp(a / "leaderboard.csv"), slurp(b / "leaderboard.csv"));
  const fs::path log = fs::path("repetitive") / "physics_pack" / "hm" / "g1.jsonl";
  EXPECT_EQ(slurp(a / "logs" / log), slurp(b / "logs" / log));

  ASSERT_EQ(ra.cells.size(), 4u);
  for (const auto& cell : ra.cells) {
    EXPECT_EQ(cell.episodes.size(), 9u);
    // Paired sequences: every solver sees the same group.
    std::map<int, std::string> hashes;
    for (const auto& e : cell.episodes) {
      auto [it, inserted] = hashes.try_emplace(e.group, e.sequence_hash);
      EXPECT_EQ(it->second, e.sequence_hash);
    }
    for (const auto& e : cell.report.entries) {
      EXPECT_GE(e.score, 0.0);
      EXPECT_LE(e.score, 1.0 + 1e-12);
    }
  }

  const auto again = rescore_logs(a / "logs");
  EXPECT_EQ(leaderboard_csv(again), leaderboard_csv(ra));
  EXPECT_EQ(cells_csv(again), cells_csv(ra));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunMatrix, RescoreDetectsTamperedLog) {
  const fs::path dir = scratch("matrix_tamper");
  auto cfg = small_matrix(dir, 2);
  cfg.datasets.resize(1);
  cfg.settings = {Setting::math_pack};
  run_matrix(cfg);
  const fs::path log = dir / "logs" / "repetitive" / "math_pack" / "dbl" / "g0.jsonl";
  std::vector<std::string> lines;
  {
    std::istringstream in(slurp(log));
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  ASSERT_GE(lines.size(), 4u);
  ASSERT_NE(lines[lines.size() - 2].find("\"type\":\"step\""), std::string::npos);
  // Drop the last step so the recomputed metrics disagree.
  lines.erase(lines.end() - 2);
  {
    std::ofstream out(log);
    for (const auto& l : lines) out << l << '\n';
  }
  EXPECT_THROW(rescore_logs(dir / "logs"), InputError);
  EXPECT_THROW(rescore_logs(dir / "missing"), InputError);
  fs::remove_all(dir);
}

TEST(DatasetSeeds, DependOnlyOnMasterAndName) {
  EXPECT_EQ(dataset_seed(3, "diverse"), dataset_seed(3, "diverse"));
  EXPECT_NE(dataset_seed(3, "diverse"), dataset_seed(3, "repetitive"));
  EXPECT_NE(dataset_seed(3, "diverse"), dataset_seed(4, "diverse"));
  DatasetSpec spec{builtin_config("wood_board"), std::nullopt};
  const auto g5 = dataset_groups(spec, 3, 5);
  const auto g2 = dataset_groups(spec, 3, 2);
  ASSERT_EQ(g5.size(), 5u);
  EXPECT_EQ(sequence_hash(g5[1]), sequence_hash(g2[1]));
}

TEST(DatasetGroups, FileBackedNeedsEnoughGroups) {
  const fs::path p = fs::temp_directory_path() / "stackbench_groups.jsonl";
  write_sequences(p, generate_groups(builtin_config("diverse"), 1, 2));
  DatasetSpec spec{builtin_config("diverse"), p};
  EXPECT_EQ(dataset_groups(spec, 0, 2).size(), 2u);
  EXPECT_THROW(dataset_groups(spec, 0, 3), InputError);
  fs::remove(p);
}

TEST(MatrixConfigParse, StrictKeys) {
  const std::string ok = R"({
    "master_seed": 4, "groups": 2, "group_size": 10, "threads": 2, "out": "o",
    "datasets": [{"name": "repetitive"}, {"name": "boards", "builtin": "wood_board", "container": {"cell_size": 0.02}}],
    "settings": ["math", "execution_pack"],
    "solvers": ["dbl", {"label": "sdf_all", "solver": "sdf"}],
    "solver_config": {"orientations": "all", "hm_objective": "volume_increase"},
    "timing": {"mode": "modeled"},
    "normalization": "per_group",
    "outputs": {"svg": true}
  })";
  const auto cfg = parse_matrix_config(ok);
  EXPECT_EQ(cfg.master_seed, 4u);
  EXPECT_EQ(cfg.datasets.size(), 2u);
  EXPECT_EQ(cfg.datasets[0].config.group_size, 10);
  EXPECT_EQ(cfg.datasets[1].config.name, "boards");
  EXPECT_EQ(cfg.datasets[1].config.kind, GeneratorKind::wood_board);
  EXPECT_EQ(cfg.datasets[1].config.container.cell_size, 0.02);
  EXPECT_EQ(cfg.settings, (std::vector<Setting>{Setting::math_pack, Setting::execution_pack}));
  EXPECT_EQ(cfg.solvers[1].label, "sdf_all");
  EXPECT_EQ(cfg.harness.solver.orientations, OrientationSet::all);
  EXPECT_EQ(cfg.harness.solver.hm_objective, HmObjective::volume_increase);
  EXPECT_EQ(cfg.harness.timing, TimingMode::modeled);
  EXPECT_EQ(cfg.scope, NormalizationScope::per_group);
  EXPECT_TRUE(cfg.outputs.svg);
  EXPECT_EQ(cfg.out_dir, fs::path("o"));

  auto bad = [](const std::string& text) {
    try {
      parse_matrix_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(bad(R"({"datasets": [{"name": "repetitive"}], "colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(bad(R"({"datasets": [{"name": "repetitive", "size": 3}]})").find("datasets[0]"), std::string::npos);
  EXPECT_FALSE(bad(R"({"datasets": []})").empty());
  EXPECT_FALSE(bad(R"({"datasets": [{"name": "repetitive"}], "groups": 0})").empty());
  EXPECT_FALSE(bad(R"({"datasets": [{"name": "repetitive"}], "solvers": ["dbl", "dbl"]})").empty());
  EXPECT_FALSE(bad(R"({"datasets": [{"name": "repetitive"}], "weights": {"math": {"occupancy": 1.5}}})").empty());
  EXPECT_FALSE(bad(R"({"datasets": [{"name": "repetitive"}], "timing": {"mode": "fast"}})").empty());
  EXPECT_FALSE(bad("{not json").empty());
  EXPECT_FALSE(bad(R"({"datasets": [{"name": "repetitive"}], "solver_config": {"hm_objective": "max"}})").empty());
  EXPECT_THROW(load_matrix_config("/nonexistent/config.json"), ConfigError);
}
