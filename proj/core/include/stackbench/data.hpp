#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackbench/geometry.hpp"

namespace stackbench {

enum class GeneratorKind { repetitive, diverse, wood_board };
enum class RunLength { geometric, fixed };

struct RepetitiveParams {
  // Explicit box types; when empty, `catalog_size` types are drawn uniformly
  // per axis from [dim_min, dim_max] using the catalog seed.
  std::vector<Vec3> catalog;
  int catalog_size{12};
  double dim_min{0.15};
  double dim_max{0.60};
  RunLength run_length{RunLength::geometric};
  double mean_run{6.0};  // geometric: expected run length; fixed: rounded run length
};

struct Category {
  Vec3 dims;
  double proportion{0.0};
};

struct DiverseParams {
  // Explicit table; when empty, `categories` rows with Zipf proportions
  // p_k ∝ 1 / (k + 1)^zipf_exponent are built from the catalog seed.
  std::vector<Category> table;
  int categories{40};
  double dim_min{0.05};
  double dim_max{0.70};
  double zipf_exponent{1.0};
};

struct WoodBoardParams {
  double length_min{0.8};
  double length_max{2.4};
  double cross_min{0.05};  // width and height range
  double cross_max{0.45};
  double e_min{3.0};  // length / max(width, height) floor
};

struct DatasetConfig {
  std::string name;
  GeneratorKind kind{GeneratorKind::repetitive};
  Container container;
  int group_size{80};
  std::uint64_t catalog_seed{0x5eed};
  RepetitiveParams repetitive;
  DiverseParams diverse;
  WoodBoardParams wood_board;

  // Throws ConfigError.
  void validate() const;
};

// Names "repetitive", "diverse" and "wood_board"; throws ConfigError otherwise.
DatasetConfig builtin_config(std::string_view name);
std::string_view generator_key(GeneratorKind kind);
GeneratorKind generator_from_key(std::string_view key);

enum class SequenceSource { loaded, generated };

struct ItemSequence {
  int group_id{0};
  std::vector<ItemSpec> items;
  SequenceSource source{SequenceSource::generated};
  std::uint64_t seed{0};
};

// Resolved catalogs (explicit tables pass through unchanged).
std::vector<Vec3> repetitive_catalog(const DatasetConfig& cfg);
std::vector<Category> diverse_table(const DatasetConfig& cfg);

ItemSequence gen_repetitive(const DatasetConfig& cfg, std::uint64_t seed, int group_id = 0);
ItemSequence gen_diverse(const DatasetConfig& cfg, std::uint64_t seed, int group_id = 0);
ItemSequence gen_wood_board(const DatasetConfig& cfg, std::uint64_t seed, int group_id = 0);
ItemSequence generate(const DatasetConfig& cfg, std::uint64_t seed, int group_id = 0);

// Seed of group `group` under `master`; distinct groups get decorrelated seeds.
std::uint64_t group_seed(std::uint64_t master, int group);
std::vector<ItemSequence> generate_groups(const DatasetConfig& cfg, std::uint64_t master,
                                          int groups);

// Fraction of items whose dims equal their predecessor's.
double repeat_rate(const ItemSequence& seq);

// FNV-1a over ids and dims, as 16 hex digits.
std::string sequence_hash(const ItemSequence& seq);

// JSONL: {"group": int, "id": str, "l": m, "w": m, "h": m, "t": s?, "v": m³?}.
// Groups come back in order of first appearance with item order preserved.
// A stored "v" must match l·w·h within 1%. Throws InputError with the line.
std::vector<ItemSequence> load_sequences(std::istream& in);
std::vector<ItemSequence> load_sequences(const std::filesystem::path& path);
void write_sequences(std::ostream& out, const std::vector<ItemSequence>& seqs);
void write_sequences(const std::filesystem::path& path, const std::vector<ItemSequence>& seqs);

}  // namespace stackbench
