#include <benchmark/benchmark.h>

#include "stackbench/stackbench.hpp"

using namespace stackbench;

namespace {

// Half-filled container from a fixed DBL run, shared by the solver benchmarks.
PackState half_full(const DatasetConfig& cfg, double cell_size) {
  Container c = cfg.container;
  c.cell_size = cell_size;
  PackState state(c);
  const auto solver = make_solver("dbl");
  const ItemSequence seq = generate(cfg, 11);
  for (std::size_t i = 0; i < seq.items.size() / 2; ++i) {
    auto p = solver->propose(state, seq.items[i]);
    if (!p) break;
    state.commit(p->placement);
  }
  return state;
}

void BM_Propose(benchmark::State& st, const char* solver_name, double cell_size) {
  const DatasetConfig cfg = builtin_config("repetitive");
  const PackState base = half_full(cfg, cell_size);
  const ItemSequence seq = generate(cfg, 12);
  const auto solver = make_solver(solver_name);
  std::size_t i = 0;
  for (auto _ : st) {
    PackState state = base;
    benchmark::DoNotOptimize(solver->propose(state, seq.items[i++ % seq.items.size()]));
  }
}

void BM_ComputeEms(benchmark::State& st, double cell_size) {
  const PackState base = half_full(builtin_config("repetitive"), cell_size);
  for (auto _ : st) benchmark::DoNotOptimize(compute_ems(base.heightmap(), base.container()));
}

void BM_Settle(benchmark::State& st) {
  const PackState base = half_full(builtin_config("repetitive"), 0.01);
  SettleConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(settle(base.placements(), base.container(), cfg));
  st.counters["boxes"] = static_cast<double>(base.placements().size());
}

void BM_Episode(benchmark::State& st, const char* solver_name, Setting setting) {
  const DatasetConfig cfg = builtin_config("repetitive");
  const ItemSequence seq = generate(cfg, 13);
  const auto solver = make_solver(solver_name);
  HarnessConfig h;
  Container c = cfg.container;
  c.cell_size = 0.02;
  for (auto _ : st) benchmark::DoNotOptimize(run_episode(setting, *solver, seq, c, h));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Propose, dbl_1cm, "dbl", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, hm_1cm, "hm", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, sdf_1cm, "sdf", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, lsah_1cm, "lsah", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, macs_1cm, "macs", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, onlinebph_1cm, "onlinebph", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, br_1cm, "br", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, packe_h_1cm, "packe_h", 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, macs_2cm, "macs", 0.02)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Propose, br_2cm, "br", 0.02)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ComputeEms, 1cm, 0.01)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ComputeEms, 2cm, 0.02)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Settle)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, dbl_math, "dbl", Setting::math_pack)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, dbl_exec, "dbl", Setting::execution_pack)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
