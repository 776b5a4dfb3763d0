#pragma once

#include <filesystem>
#include <string_view>

#include "stackbench/matrix.hpp"

namespace stackbench {

// Declarative JSON matrix configuration; keys are listed in docs/config.md.
// Unknown keys and bad values throw ConfigError naming the offending path.
// Relative dataset files resolve against `base_dir`; `out` is used as given.
MatrixConfig parse_matrix_config(std::string_view text, const std::filesystem::path& base_dir = {});
MatrixConfig load_matrix_config(const std::filesystem::path& path);

// Same shape as one entry of the config's "datasets" list.
DatasetSpec parse_dataset_spec(std::string_view text, const std::filesystem::path& base_dir = {});

}  // namespace stackbench
