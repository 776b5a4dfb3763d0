#include "stackbench/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

namespace stackbench {

namespace {

constexpr double kProportionTolerance = 1e-6;
constexpr double kVolumeTolerance = 0.01;

// Fixed bit-level conversions so sequences match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

long to_mm(double m) { return std::lround(m * 1000.0); }
double from_mm(long mm) { return static_cast<double>(mm) / 1000.0; }

// Largest dim per axis that still fits the container's grid.
Vec3 container_cap(const Container& c) {
  const double cs = c.cell_size;
  auto cap = [&](double d, int n) {
    return from_mm(static_cast<long>(std::floor(std::min(d, n * cs) * 1000.0 + 1e-9)));
  };
  return {cap(c.dims.x, c.nx()), cap(c.dims.y, c.ny()), cap(c.dims.z, c.nz())};
}

// Rounds to whole millimetres (at least 1 mm) and clamps into the container.
Vec3 fit_dims(const Vec3& d, const Vec3& cap) {
  auto fit = [](double v, double hi) { return std::min(from_mm(std::max(1L, to_mm(v))), hi); };
  return {fit(d.x, cap.x), fit(d.y, cap.y), fit(d.z, cap.z)};
}

std::string item_id(int group, std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "g%d-%03zu", group, index);
  return buf;
}

ItemSequence make_sequence(const DatasetConfig& cfg, std::uint64_t seed, int group_id,
                           const std::vector<Vec3>& dims) {
  ItemSequence seq;
  seq.group_id = group_id;
  seq.seed = seed;
  seq.source = SequenceSource::generated;
  seq.items.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    seq.items.push_back({item_id(group_id, i), dims[i], i, std::nullopt});
  }
  (void)cfg;
  return seq;
}

void check_range(double lo, double hi, const char* what) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ConfigError(std::string(what) + " range must satisfy 0 < min <= max");
  }
}

}  // namespace

void DatasetConfig::validate() const {
  container.validate();
  if (group_size < 1) throw ConfigError("group_size must be >= 1");
  switch (kind) {
    case GeneratorKind::repetitive: {
      const RepetitiveParams& p = repetitive;
      if (p.catalog.empty()) {
        if (p.catalog_size < 1) throw ConfigError("repetitive catalog is empty");
        check_range(p.dim_min, p.dim_max, "repetitive dim");
      }
      for (const Vec3& d : p.catalog) {
        if (!(d.x > 0.0 && d.y > 0.0 && d.z > 0.0)) {
          throw ConfigError("repetitive catalog dims must be positive");
        }
      }
      if (!(p.mean_run >= 1.0) || !std::isfinite(p.mean_run)) {
        throw ConfigError("mean_run must be >= 1");
      }
      break;
    }
    case GeneratorKind::diverse: {
      const DiverseParams& p = diverse;
      if (p.table.empty()) {
        if (p.categories < 1) throw ConfigError("diverse needs at least one category");
        check_range(p.dim_min, p.dim_max, "diverse dim");
        if (!std::isfinite(p.zipf_exponent) || p.zipf_exponent < 0.0) {
          throw ConfigError("zipf_exponent must be finite and >= 0");
        }
        break;
      }
      double sum = 0.0;
      for (const Category& row : p.table) {
        if (!(row.proportion >= 0.0) || !std::isfinite(row.proportion)) {
          throw ConfigError("category proportions must be >= 0");
        }
        if (!(row.dims.x > 0.0 && row.dims.y > 0.0 && row.dims.z > 0.0)) {
          throw ConfigError("category dims must be positive");
        }
        sum += row.proportion;
      }
      if (std::abs(sum - 1.0) > kProportionTolerance) {
        throw ConfigError("category proportions must sum to 1");
      }
      break;
    }
    case GeneratorKind::wood_board: {
      const WoodBoardParams& p = wood_board;
      check_range(p.length_min, p.length_max, "wood_board length");
      check_range(p.cross_min, p.cross_max, "wood_board cross-section");
      if (!(p.e_min > 0.0) || !std::isfinite(p.e_min)) throw ConfigError("e_min must be > 0");
      const Vec3 cap = container_cap(container);
      if (p.e_min * p.cross_min > std::min(p.length_max, cap.x)) {
        throw ConfigError("wood_board ranges admit no board with the required elongation");
      }
      if (p.cross_min > std::min(cap.y, cap.z)) {
        throw ConfigError("wood_board cross-section does not fit the container");
      }
      break;
    }
  }
}

std::string_view generator_key(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::repetitive: return "repetitive";
    case GeneratorKind::diverse: return "diverse";
    case GeneratorKind::wood_board: return "wood_board";
  }
  return "?";
}

GeneratorKind generator_from_key(std::string_view key) {
  if (key == "repetitive") return GeneratorKind::repetitive;
  if (key == "diverse") return GeneratorKind::diverse;
  if (key == "wood_board") return GeneratorKind::wood_board;
  throw ConfigError("unknown generator '" + std::string(key) + "'");
}

DatasetConfig builtin_config(std::string_view name) {
  DatasetConfig cfg;
  cfg.name = std::string(name);
  cfg.group_size = 80;
  if (name == "repetitive") {
    cfg.kind = GeneratorKind::repetitive;
    cfg.container.dims = {1.34, 1.25, 1.00};
    cfg.container.collapse_threshold = 0.07;
  } else if (name == "diverse") {
    cfg.kind = GeneratorKind::diverse;
    cfg.container.dims = {1.20, 1.00, 1.70};
    cfg.container.collapse_threshold = 0.04;
  } else if (name == "wood_board") {
    cfg.kind = GeneratorKind::wood_board;
    cfg.container.dims = {2.50, 1.20, 1.00};
    cfg.container.collapse_threshold = 0.07;
  } else {
    throw ConfigError("unknown dataset '" + std::string(name) + "'");
  }
  return cfg;
}

std::vector<Vec3> repetitive_catalog(const DatasetConfig& cfg) {
  const RepetitiveParams& p = cfg.repetitive;
  const Vec3 cap = container_cap(cfg.container);
  std::vector<Vec3> out;
  if (!p.catalog.empty()) {
    for (const Vec3& d : p.catalog) out.push_back(fit_dims(d, cap));
    return out;
  }
  if (p.catalog_size < 1) throw ConfigError("repetitive catalog is empty");
  Rng rng(splitmix64(cfg.catalog_seed ^ 0x7265706574ULL));
  for (int k = 0; k < p.catalog_size; ++k) {
    // Types must be distinguishable by dims for the repeat statistic.
    Vec3 d;
    for (int attempt = 0; attempt < 64; ++attempt) {
      d = fit_dims({rng.uniform(p.dim_min, p.dim_max), rng.uniform(p.dim_min, p.dim_max),
                    rng.uniform(p.dim_min, p.dim_max)},
                   cap);
      if (std::find(out.begin(), out.end(), d) == out.end()) break;
    }
    out.push_back(d);
  }
  return out;
}

std::vector<Category> diverse_table(const DatasetConfig& cfg) {
  const DiverseParams& p = cfg.diverse;
  const Vec3 cap = container_cap(cfg.container);
  if (!p.table.empty()) {
    std::vector<Category> out = p.table;
    for (Category& row : out) row.dims = fit_dims(row.dims, cap);
    return out;
  }
  if (p.categories < 1) throw ConfigError("diverse needs at least one category");
  Rng rng(splitmix64(cfg.catalog_seed ^ 0x646976657273ULL));
  std::vector<Category> out;
  double total = 0.0;
  for (int k = 0; k < p.categories; ++k) {
    Category row;
    row.dims = fit_dims({rng.uniform(p.dim_min, p.dim_max), rng.uniform(p.dim_min, p.dim_max),
                         rng.uniform(p.dim_min, p.dim_max)},
                        cap);
    row.proportion = 1.0 / std::pow(k + 1.0, p.zipf_exponent);
    total += row.proportion;
    out.push_back(row);
  }
  for (Category& row : out) row.proportion /= total;
  return out;
}

ItemSequence gen_repetitive(const DatasetConfig& cfg, std::uint64_t seed, int group_id) {
  cfg.validate();
  const std::vector<Vec3> catalog = repetitive_catalog(cfg);
  const RepetitiveParams& p = cfg.repetitive;
  Rng rng(seed);
  const auto draw_other = [&](std::size_t current) {
    if (catalog.size() == 1) return current;
    const std::size_t k = rng.index(catalog.size() - 1);
    return k >= current ? k + 1 : k;
  };

  const double repeat_p = 1.0 - 1.0 / p.mean_run;
  const long fixed_run = std::max(1L, std::lround(p.mean_run));
  std::vector<Vec3> dims;
  std::size_t type = rng.index(catalog.size());
  long run = 0;
  for (int i = 0; i < cfg.group_size; ++i) {
    if (i > 0) {
      const bool repeat = p.run_length == RunLength::geometric ? rng.uniform() < repeat_p
                                                                : run < fixed_run;
      if (!repeat) {
        type = draw_other(type);
        run = 0;
      }
    }
    ++run;
    dims.push_back(catalog[type]);
  }
  return make_sequence(cfg, seed, group_id, dims);
}

ItemSequence gen_diverse(const DatasetConfig& cfg, std::uint64_t seed, int group_id) {
  cfg.validate();
  const std::vector<Category> table = diverse_table(cfg);
  std::vector<double> cum;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    acc += table[k].proportion;
    cum.push_back(acc);
    if (table[k].proportion > 0.0) last_nonzero = k;
  }
  Rng rng(seed);
  std::vector<Vec3> dims;
  for (int i = 0; i < cfg.group_size; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t k =
        it == cum.end() ? last_nonzero : static_cast<std::size_t>(it - cum.begin());
    dims.push_back(table[k].dims);
  }
  return make_sequence(cfg, seed, group_id, dims);
}

ItemSequence gen_wood_board(const DatasetConfig& cfg, std::uint64_t seed, int group_id) {
  cfg.validate();
  const WoodBoardParams& p = cfg.wood_board;
  const Vec3 cap = container_cap(cfg.container);
  const double len_hi = std::min(p.length_max, cap.x);
  // Cross-sections thicker than len_hi / e_min cannot meet the elongation floor.
  const double cross_hi_w = std::min({p.cross_max, cap.y, len_hi / p.e_min});
  const double cross_hi_h = std::min({p.cross_max, cap.z, len_hi / p.e_min});
  const long len_hi_mm = static_cast<long>(std::floor(len_hi * 1000.0 + 1e-9));

  Rng rng(seed);
  std::vector<Vec3> dims;
  for (int i = 0; i < cfg.group_size; ++i) {
    long w = std::max(1L, to_mm(rng.uniform(p.cross_min, std::max(p.cross_min, cross_hi_w))));
    long h = std::max(1L, to_mm(rng.uniform(p.cross_min, std::max(p.cross_min, cross_hi_h))));
    const double draw = rng.uniform();
    long lo = 0;
    for (;;) {
      const long m = std::max(w, h);
      lo = std::max(static_cast<long>(std::ceil(p.e_min * static_cast<double>(m))),
                    static_cast<long>(std::ceil(p.length_min * 1000.0 - 1e-9)));
      while (from_mm(lo) / from_mm(m) < p.e_min) ++lo;
      if (lo <= len_hi_mm || m == 1) break;
      // Millimetre rounding pushed the cross-section past the cap.
      if (w >= h) --w; else --h;
    }
    lo = std::min(lo, len_hi_mm);
    const long l = std::clamp(to_mm(from_mm(lo) + draw * (from_mm(len_hi_mm) - from_mm(lo))), lo,
                              len_hi_mm);
    dims.push_back({from_mm(l), from_mm(w), from_mm(h)});
  }
  return make_sequence(cfg, seed, group_id, dims);
}

ItemSequence generate(const DatasetConfig& cfg, std::uint64_t seed, int group_id) {
  switch (cfg.kind) {
    case GeneratorKind::repetitive: return gen_repetitive(cfg, seed, group_id);
    case GeneratorKind::diverse: return gen_diverse(cfg, seed, group_id);
    case GeneratorKind::wood_board: return gen_wood_board(cfg, seed, group_id);
  }
  throw ConfigError("unknown generator");
}

std::uint64_t group_seed(std::uint64_t master, int group) {
  return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(group) + 1));
}

std::vector<ItemSequence> generate_groups(const DatasetConfig& cfg, std::uint64_t master,
                                          int groups) {
  std::vector<ItemSequence> out;
  out.reserve(static_cast<std::size_t>(std::max(groups, 0)));
  for (int g = 0; g < groups; ++g) out.push_back(generate(cfg, group_seed(master, g), g));
  return out;
}

double repeat_rate(const ItemSequence& seq) {
  if (seq.items.empty()) return 0.0;
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < seq.items.size(); ++i) {
    if (seq.items[i].dims == seq.items[i - 1].dims) ++repeats;
  }
  return static_cast<double>(repeats) / static_cast<double>(seq.items.size());
}

std::string sequence_hash(const ItemSequence& seq) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const ItemSpec& item : seq.items) {
    feed(item.id.data(), item.id.size());
    feed("\0", 1);
    for (int a = 0; a < 3; ++a) {
      const double v = item.dims[a];
      feed(&v, sizeof v);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ItemSequence> load_sequences(std::istream& in) {
  std::vector<ItemSequence> seqs;
  std::map<long long, std::size_t> by_group;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + "invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw InputError(where + "expected an object");
    auto number = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_number()) {
        throw InputError(where + "missing numeric field '" + key + "'");
      }
      return j[key].get<double>();
    };
    if (!j.contains("group") || !j["group"].is_number_integer()) {
      throw InputError(where + "missing integer field 'group'");
    }
    if (!j.contains("id") || !j["id"].is_string()) {
      throw InputError(where + "missing string field 'id'");
    }
    ItemSpec item;
    item.id = j["id"].get<std::string>();
    item.dims = {number("l"), number("w"), number("h")};
    if (j.contains("t") && !j["t"].is_null()) item.timestamp = number("t");
    try {
      validate_item(item);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    if (j.contains("v") && !j["v"].is_null()) {
      const double stored = number("v");
      const double v = item.volume();
      if (std::abs(stored - v) > kVolumeTolerance * v) {
        throw InputError(where + "item " + item.id + ": stored volume " + std::to_string(stored) +
                         " disagrees with l*w*h = " + std::to_string(v));
      }
    }
    const long long group = j["group"].get<long long>();
    auto [it, inserted] = by_group.try_emplace(group, seqs.size());
    if (inserted) {
      ItemSequence seq;
      seq.group_id = static_cast<int>(group);
      seq.source = SequenceSource::loaded;
      seqs.push_back(std::move(seq));
    }
    ItemSequence& seq = seqs[it->second];
    item.seq_index = seq.items.size();
    seq.items.push_back(std::move(item));
  }
  return seqs;
}

std::vector<ItemSequence> load_sequences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return load_sequences(in);
}

void write_sequences(std::ostream& out, const std::vector<ItemSequence>& seqs) {
  for (const ItemSequence& seq : seqs) {
    for (const ItemSpec& item : seq.items) {
      nlohmann::ordered_json j;
      j["group"] = seq.group_id;
      j["id"] = item.id;
      j["l"] = item.dims.x;
      j["w"] = item.dims.y;
      j["h"] = item.dims.z;
      if (item.timestamp) j["t"] = *item.timestamp;
      out << j.dump() << '\n';
    }
  }
}

void write_sequences(const std::filesystem::path& path, const std::vector<ItemSequence>& seqs) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_sequences(out, seqs);
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace stackbench
