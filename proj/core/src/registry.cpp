#include <array>

#include "grid_ops.hpp"

namespace stackbench {

namespace {

constexpr std::array<std::string_view, 8> kSolverNames{
    "dbl", "hm", "lsah", "macs", "onlinebph", "br", "sdf", "packe_h"};

}  // namespace

std::span<const std::string_view> solver_names() { return kSolverNames; }

std::unique_ptr<Solver> make_solver(std::string_view name, const SolverConfig& config) {
  if (name == "dbl") return detail::make_dbl(config);
  if (name == "hm") return detail::make_hm(config);
  if (name == "lsah") return detail::make_lsah(config);
  if (name == "macs") return detail::make_macs(config);
  if (name == "onlinebph") return detail::make_onlinebph(config);
  if (name == "br") return detail::make_br(config);
  if (name == "sdf") return detail::make_sdf(config);
  if (name == "packe_h") return detail::make_packe_h(config);
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

}  // namespace stackbench
