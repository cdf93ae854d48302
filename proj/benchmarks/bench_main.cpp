#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "qfs/bounds.hpp"
#include "qfs/formlang.hpp"
#include "qfs/minimize.hpp"
#include "qfs/subspace.hpp"
#include "qfs/zerofinder.hpp"

namespace {

qfs::FFSystem corpus_system(const char* name) {
  std::ifstream in(std::string(QFS_BENCH_CORPUS_DIR) + "/" + name);
  std::stringstream text;
  text << in.rdbuf();
  return qfs::to_finite_system(qfs::parse_system(text.str()));
}

void BM_EnumerateF2Binary(benchmark::State& state) {
  const auto s = corpus_system("f2-triple.qfs");
  for (auto _ : state) benchmark::DoNotOptimize(qfs::enumerate_common_zeros(s).count);
}
BENCHMARK(BM_EnumerateF2Binary)->Unit(benchmark::kMicrosecond);

void BM_EnumerateF2Generic(benchmark::State& state) {
  const auto s = corpus_system("f2-triple.qfs");
  qfs::EnumerateOptions options;
  options.generic_only = true;
  for (auto _ : state) benchmark::DoNotOptimize(qfs::enumerate_common_zeros(s, options).count);
}
BENCHMARK(BM_EnumerateF2Generic)->Unit(benchmark::kMicrosecond);

void BM_EnumerateF3(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = qfs::random_system(qfs::FiniteField::prime(3), 2, n, 17);
  for (auto _ : state) benchmark::DoNotOptimize(qfs::enumerate_common_zeros(s).count);
}
BENCHMARK(BM_EnumerateF3)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_MinimizedF2Triple(benchmark::State& state) {
  const auto s = corpus_system("f2-triple.qfs");
  for (auto _ : state) benchmark::DoNotOptimize(qfs::is_Fq_minimized(s).status);
}
BENCHMARK(BM_MinimizedF2Triple)->Unit(benchmark::kMillisecond);

void BM_SubspacePairF3(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto s = qfs::random_system(qfs::FiniteField::prime(3), 2, 7, seed++);
    benchmark::DoNotOptimize(qfs::find_totally_singular(s, 2).nodes);
  }
}
BENCHMARK(BM_SubspacePairF3)->Unit(benchmark::kMicrosecond);

void BM_BoundTable(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qfs::bound_table(r).size());
}
BENCHMARK(BM_BoundTable)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
