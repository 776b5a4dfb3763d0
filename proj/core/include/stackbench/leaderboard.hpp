#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stackbench/matrix.hpp"

namespace stackbench {

struct LeaderboardRow {
  std::string solver;
  std::vector<std::optional<double>> scores;  // per dataset column
  double mean{0.0};                           // over the present columns
};

struct LeaderboardTable {
  Setting setting{Setting::math_pack};
  std::vector<std::string> datasets;
  std::vector<LeaderboardRow> rows;  // Score descending, then solver name
};

std::vector<LeaderboardTable> leaderboard_tables(const MatrixResult& result);

// Scores are printed with three decimals.
std::string leaderboard_csv(const MatrixResult& result);
std::string leaderboard_md(const MatrixResult& result);
std::string leaderboard_json(const MatrixResult& result);
// Long format: one row per (dataset, setting, solver) with raw cell means.
std::string cells_csv(const MatrixResult& result);
// Mean Score bars per setting.
std::string summary_svg(const MatrixResult& result);

// Writes leaderboard.{csv,md,json}, cells.csv and summary.svg as enabled.
// Throws InputError when a file cannot be written.
std::vector<std::filesystem::path> emit_leaderboard(const MatrixResult& result,
                                                    const std::filesystem::path& dir,
                                                    const OutputOptions& formats);

}  // namespace stackbench
